#pragma once

#include "supermarket/eta.hpp"

namespace supermarket {

/// Correction term g^eta(x) = (eta/d)(1 - x/eta)^d - eta/d + x.
/// Identically zero when eta is infinite. Defined for all real x; the model
/// only evaluates it on [-eta - 2, eta + 2].
double g_eval(const Eta& eta, int d, double x);

/// Same function via the binomial expansion
/// (1/d) * sum_{l=2}^{d} C(d,l) (-1)^l x^l / eta^{l-1}.
/// Independent evaluation route kept for cross-checking g_eval.
double g_eval_binomial(const Eta& eta, int d, double x);

/// Lipschitz bound 4^d for g^eta on [-eta - 2, eta + 2], valid for every
/// finite eta >= 1 (and trivially for the zero function at eta = infinity).
double g_lipschitz_bound(int d);

}  // namespace supermarket
