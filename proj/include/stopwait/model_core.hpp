#pragma once

#include <optional>
#include <utility>

namespace stopwait {

// Coefficients of the close-probability index: p = logistic(alpha + beta1*n +
// beta2*l + beta3*w), where n is the answer count, l the last inter-arrival
// time in hours, and w the hours waited since the last answer.
struct LogitCoefficients {
  double alpha;
  double beta1;
  double beta2;
  double beta3;
};

// Quadratic utility of holding n answers.  Marginal benefit of the (n+1)-th
// answer is alpha_u - beta1*n; concave on [0, inf) iff beta1 > 0.
struct UtilitySpec {
  double alpha_u;
  double beta1;
  double u0 = 0.0;
};

// Linear expected cost of waiting for the next answer given (l, w).
struct CostSpec {
  double alpha_c;
  double beta2;
  double beta3;
};

enum class Decision { Close, Wait };

// 1 / (1 + e^{-z}).  Rejects non-finite input.
double logistic(double z);

// logistic(alpha + beta1*n + beta2*l + beta3*w).  Requires n >= 1, l, w >= 0.
double close_probability(const LogitCoefficients& c, double n, double l,
                         double w);

// alpha_u - beta1 * n, n >= 0.
double marginal_benefit(const UtilitySpec& u, int n);

// (alpha_u + beta1/2)*n - (beta1/2)*n^2 + u0.  Telescopes:
// utility(n+1) - utility(n) == marginal_benefit(n).
double utility(const UtilitySpec& u, int n);

// alpha_c + beta2*l + beta3*w.  Requires l, w >= 0.
double expected_wait_cost(const CostSpec& c, double l, double w);

// Close iff marginal_benefit(n) <= expected_wait_cost(l, w).  Equality
// resolves to Close.
Decision myopic_decision(const UtilitySpec& u, const CostSpec& c, int n,
                         double l, double w);

// Largest n at which utility is still non-decreasing: floor(alpha_u/beta1 +
// 0.5).  Empty when alpha_u <= 0; requires beta1 > 0.
std::optional<long> utility_peak(const UtilitySpec& u);

// Split a fitted index intercept at a chosen alpha_u, so that
// alpha_c - alpha_u == c.alpha holds exactly.
std::pair<UtilitySpec, CostSpec> split_intercept(const LogitCoefficients& c,
                                                 double alpha_u,
                                                 double u0 = 0.0);

}  // namespace stopwait
