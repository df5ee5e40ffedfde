#include "supermarket/initial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace supermarket {

namespace {

// Largest-remainder apportionment of n queues over the exact-length classes
// p_i = S[i] - S[i+1] (S starts at 1 and ends at 0, so shares sum to n).
// Ties go to the lower class.
TailCounts apportion(std::int64_t n, const std::vector<double>& S) {
  std::size_t classes = S.size() - 1;
  std::vector<std::int64_t> count(classes);
  std::vector<double> remainder(classes);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < classes; ++i) {
    double share = static_cast<double>(n) * (S[i] - S[i + 1]);
    count[i] = static_cast<std::int64_t>(std::floor(share));
    remainder[i] = share - std::floor(share);
    assigned += count[i];
  }
  std::vector<std::size_t> order(classes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  std::int64_t leftover = n - assigned;
  if (leftover < 0 || leftover > static_cast<std::int64_t>(classes))
    throw std::logic_error("apportionment leftover out of range");
  for (std::int64_t j = 0; j < leftover; ++j) ++count[order[static_cast<std::size_t>(j)]];

  // Tail counts q_i = sum of classes >= i.
  std::vector<std::int64_t> tail(classes > 1 ? classes - 1 : 0);
  std::int64_t acc = 0;
  for (std::size_t i = classes; i-- > 1;) {
    acc += count[i];
    tail[i - 1] = acc;
  }
  return TailCounts(n, std::move(tail));
}

}  // namespace

RealSeq geometric_profile_limit(int d, const Eta& eta, double c, int levels) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("profile scale c must be positive");
  if (levels < 0) throw std::invalid_argument("levels must be >= 0");
  RealSeq T(static_cast<std::size_t>(levels) + 1, 0.0);
  double scale = c;
  for (int i = 1; i <= levels; ++i) {
    scale *= d;
    T[static_cast<std::size_t>(i)] =
        eta.is_finite() ? std::min(eta.value(), scale) : scale;
  }
  return T;
}

RealSeq plateau_profile_limit(int d, double c, int knee, int levels) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("profile scale c must be positive");
  if (knee < 1) throw std::invalid_argument("knee must be >= 1");
  if (levels < 0) throw std::invalid_argument("levels must be >= 0");
  RealSeq T(static_cast<std::size_t>(levels) + 1, 0.0);
  double scale = c;
  for (int i = 1; i <= levels; ++i) {
    if (i <= knee) scale *= d;
    T[static_cast<std::size_t>(i)] = scale;
  }
  return T;
}

TailCounts profile_state(std::int64_t n, double eta,
                         std::span<const double> target) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(eta >= 1.0)) throw std::invalid_argument("eta must be >= 1");
  if (target.empty() || target[0] != 0.0)
    throw std::invalid_argument("target must start with T_0 == 0");

  std::vector<double> S;
  S.reserve(target.size() + 1);
  double prev = 0.0;
  for (double t : target) {
    if (!(t >= prev) || !(t <= eta))
      throw std::invalid_argument(
          "target must be nondecreasing and within [0, eta]");
    prev = t;
    S.push_back(1.0 - t / eta);
  }
  S.push_back(0.0);
  return apportion(n, S);
}

TailCounts geometric_profile_state(std::int64_t n, int d, double eta, double c) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(eta >= 1.0)) throw std::invalid_argument("eta must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("profile scale c must be positive");

  // Tail fractions S_i = max(0, 1 - c d^i / eta), S_0 = 1; the profile dies
  // after at most log_d(eta/c) levels.
  std::vector<double> S{1.0};
  double scale = c;
  while (true) {
    double s = 1.0 - scale * static_cast<double>(d) / eta;
    scale *= d;
    if (s <= 0.0) break;
    S.push_back(s);
  }
  S.push_back(0.0);
  return apportion(n, S);
}

}  // namespace supermarket
