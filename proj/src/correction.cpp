#include "supermarket/correction.hpp"

#include <cmath>
#include <stdexcept>

namespace supermarket {

namespace {

void check_d(int d) {
  if (d < 2) throw std::invalid_argument("correction term needs d >= 2");
}

}  // namespace

double g_eval(const Eta& eta, int d, double x) {
  check_d(d);
  if (eta.is_infinite()) return 0.0;
  const double e = eta.value();
  return (e / d) * std::pow(1.0 - x / e, d) - e / d + x;
}

double g_eval_binomial(const Eta& eta, int d, double x) {
  check_d(d);
  if (eta.is_infinite()) return 0.0;
  const double e = eta.value();
  // C(d,l) built up iteratively; powers of x/eta accumulated alongside.
  double coeff = static_cast<double>(d) * (d - 1) / 2.0;  // C(d,2)
  double xpow = x * x / e;                                // x^l / eta^{l-1}
  double sign = 1.0;                                      // (-1)^l at l = 2
  double acc = 0.0;
  for (int l = 2; l <= d; ++l) {
    acc += sign * coeff * xpow;
    coeff *= static_cast<double>(d - l) / (l + 1);
    xpow *= x / e;
    sign = -sign;
  }
  return acc / d;
}

double g_lipschitz_bound(int d) {
  check_d(d);
  return std::pow(4.0, d);
}

}  // namespace supermarket
