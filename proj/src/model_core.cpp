#include "stopwait/model_core.hpp"

#include <cmath>
#include <stdexcept>

namespace stopwait {

double logistic(double z) {
  if (!std::isfinite(z)) throw std::invalid_argument("logistic: non-finite input");
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double close_probability(const LogitCoefficients& c, double n, double l,
                         double w) {
  if (n < 1.0) throw std::invalid_argument("close_probability: n must be >= 1");
  if (l < 0.0 || w < 0.0)
    throw std::invalid_argument("close_probability: l and w must be >= 0");
  return logistic(c.alpha + c.beta1 * n + c.beta2 * l + c.beta3 * w);
}

double marginal_benefit(const UtilitySpec& u, int n) {
  if (n < 0) throw std::invalid_argument("marginal_benefit: n must be >= 0");
  return u.alpha_u - u.beta1 * static_cast<double>(n);
}

double utility(const UtilitySpec& u, int n) {
  if (n < 0) throw std::invalid_argument("utility: n must be >= 0");
  const double x = static_cast<double>(n);
  return (u.alpha_u + u.beta1 / 2.0) * x - (u.beta1 / 2.0) * x * x + u.u0;
}

double expected_wait_cost(const CostSpec& c, double l, double w) {
  if (l < 0.0 || w < 0.0)
    throw std::invalid_argument("expected_wait_cost: l and w must be >= 0");
  return c.alpha_c + c.beta2 * l + c.beta3 * w;
}

Decision myopic_decision(const UtilitySpec& u, const CostSpec& c, int n,
                         double l, double w) {
  if (n < 1) throw std::invalid_argument("myopic_decision: n must be >= 1");
  return marginal_benefit(u, n) <= expected_wait_cost(c, l, w) ? Decision::Close
                                                               : Decision::Wait;
}

std::optional<long> utility_peak(const UtilitySpec& u) {
  if (u.beta1 <= 0.0)
    throw std::invalid_argument("utility_peak: beta1 must be > 0");
  if (u.alpha_u <= 0.0) return std::nullopt;
  return static_cast<long>(std::floor(u.alpha_u / u.beta1 + 0.5));
}

std::pair<UtilitySpec, CostSpec> split_intercept(const LogitCoefficients& c,
                                                 double alpha_u, double u0) {
  UtilitySpec u{alpha_u, c.beta1, u0};
  CostSpec cost{c.alpha + alpha_u, c.beta2, c.beta3};
  return {u, cost};
}

}  // namespace stopwait
