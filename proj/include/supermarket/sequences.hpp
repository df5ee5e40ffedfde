#pragma once

#include <span>
#include <vector>

namespace supermarket {

using RealSeq = std::vector<double>;

/// Weighted l1 norm sum_i rho^{-i} |x_i| with x indexed from 0. Requires
/// rho > 1. Summation runs from the high index down so the geometric tail
/// accumulates before the dominant low-index terms.
double rho_norm(std::span<const double> x, double rho);

/// A family of per-level sample paths on one shared time grid.
/// levels[i][k] is level i at grid[k]; all levels have grid.size() samples.
struct GridPath {
  std::vector<double> grid;
  std::vector<RealSeq> levels;

  std::size_t num_levels() const { return levels.size(); }
  std::size_t num_samples() const { return grid.size(); }

  /// Throws std::invalid_argument on ragged levels or a non-increasing grid.
  void validate() const;
};

/// Path norm sum_i rho^{-i} sup_{s in grid, s <= t} |x_i(s)|. The sup runs
/// over recorded grid points only. Requires t >= grid.front().
double rho_norm_path(const GridPath& path, double rho, double t);

}  // namespace supermarket
