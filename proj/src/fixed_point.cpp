#include "supermarket/fixed_point.hpp"

#include <cmath>
#include <stdexcept>

namespace supermarket {

RealSeq fixed_point(int d, double pi1, std::size_t L) {
  if (d < 2) throw std::invalid_argument("fixed_point needs d >= 2");
  if (!(pi1 >= 0.0) || !std::isfinite(pi1)) {
    throw std::invalid_argument("fixed_point needs pi1 >= 0");
  }
  RealSeq pi(L + 1, 0.0);
  if (L >= 1) pi[1] = pi1;
  for (std::size_t i = 1; i < L; ++i) {
    pi[i + 1] = (d + 1) * pi[i] - d * pi[i - 1];
  }
  return pi;
}

double lyapunov_phi(std::span<const double> T, std::span<const double> pi,
                    int d) {
  if (T.size() != pi.size()) {
    throw std::invalid_argument("lyapunov_phi: length mismatch");
  }
  if (d < 2) throw std::invalid_argument("lyapunov_phi needs d >= 2");
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  double acc = 0.0;
  for (std::size_t i = T.size(); i-- > 1;) {
    acc = acc * w + std::abs(T[i] - pi[i]);
  }
  return acc * w;
}

double lyapunov_rate(int d) {
  if (d < 2) throw std::invalid_argument("lyapunov_rate needs d >= 2");
  const double r = std::sqrt(static_cast<double>(d)) - 1.0;
  return r * r;
}

}  // namespace supermarket
