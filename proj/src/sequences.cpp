#include "supermarket/sequences.hpp"

#include <cmath>
#include <stdexcept>

namespace supermarket {

double rho_norm(std::span<const double> x, double rho) {
  if (!(rho > 1.0)) throw std::invalid_argument("rho_norm needs rho > 1");
  double acc = 0.0;
  for (std::size_t i = x.size(); i-- > 0;) {
    acc = acc / rho + std::abs(x[i]);
  }
  return acc;
}

void GridPath::validate() const {
  for (const auto& lv : levels) {
    if (lv.size() != grid.size()) {
      throw std::invalid_argument("GridPath level length != grid length");
    }
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw std::invalid_argument("GridPath grid must be strictly increasing");
    }
  }
}

double rho_norm_path(const GridPath& path, double rho, double t) {
  if (!(rho > 1.0)) throw std::invalid_argument("rho_norm_path needs rho > 1");
  path.validate();
  if (path.grid.empty() || t < path.grid.front()) {
    throw std::invalid_argument("rho_norm_path: t precedes the grid");
  }
  std::size_t last = 0;
  while (last + 1 < path.grid.size() && path.grid[last + 1] <= t) ++last;

  double acc = 0.0;
  for (std::size_t i = path.levels.size(); i-- > 0;) {
    double sup = 0.0;
    const RealSeq& lv = path.levels[i];
    for (std::size_t k = 0; k <= last; ++k) {
      sup = std::max(sup, std::abs(lv[k]));
    }
    acc = acc / rho + sup;
  }
  return acc;
}

}  // namespace supermarket
