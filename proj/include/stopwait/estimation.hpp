#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "stopwait/expansion.hpp"
#include "stopwait/model_core.hpp"

namespace stopwait {

struct LogitFit {
  LogitCoefficients coefficients{};
  std::array<double, 4> standard_errors{};
  double log_likelihood = 0.0;
  std::size_t n_observations = 0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string diagnosis;             // non-empty when not converged
  std::vector<double> loglik_trace;  // one entry per Newton iteration
};

struct CorrelationResult {
  double r = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
};

struct InverseGaussianParams {
  double mu = 1.0;      // mean, > 0
  double lambda = 1.0;  // scale, > 0

  double variance() const { return mu * mu * mu / lambda; }
};

// Bernoulli log-likelihood of the close outcomes under
// p = logistic(alpha + beta1*n + beta2*l + beta3*w).
double logit_loglik(const std::vector<VisitObservation>& obs,
                    const LogitCoefficients& c);

// Analytic score: sum over observations of (y - p) * x.
std::array<double, 4> logit_gradient(const std::vector<VisitObservation>& obs,
                                     const LogitCoefficients& c);

// Newton-Raphson from the zero vector with step-halving; standard errors
// from the inverse observed information at the optimum.  Stops when the
// gradient max-norm falls below 1e-8, capped at 100 iterations.  Separation
// is reported as non-convergence with a diagnosis, not an exception.
LogitFit fit_logit(const std::vector<VisitObservation>& obs);

// Two-sided Wald significance stars at the 1% / 0.5% / 0.1% levels.
std::string significance_stars(double z);

enum class ReportFormat { KeyValue, Csv };
std::string format_logit_report(const LogitFit& fit, ReportFormat format);

// Sample Pearson r with a 95% Fisher z-transform interval.
CorrelationResult pearson_correlation(
    const std::vector<std::pair<double, double>>& pairs);
std::string format_correlation_report(const CorrelationResult& r,
                                      ReportFormat format);

// Closed-form MLE: mu = mean, lambda = n / sum(1/x_i - 1/mu).
InverseGaussianParams fit_inverse_gaussian(const std::vector<double>& samples);

double invgauss_pdf(const InverseGaussianParams& p, double x);
double invgauss_cdf(const InverseGaussianParams& p, double x);

// Least-squares slope of log(frequency) vs log(value) over integer-binned
// frequencies restricted to [tail_lo, tail_hi].  Requires at least 5
// distinct populated values in range.
double tail_slope(const std::vector<double>& samples, double tail_lo,
                  double tail_hi);

// Kolmogorov-Smirnov sup distance between the empirical CDF of `samples`
// and `cdf`, using both step sides.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

double normal_cdf(double x);

}  // namespace stopwait
