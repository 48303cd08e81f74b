#include "stopwait/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "stopwait/errors.hpp"
#include "stopwait/rng.hpp"

namespace stopwait {

namespace {

constexpr double kGradientTol = 1e-8;
constexpr std::size_t kMaxIterations = 100;
constexpr std::size_t kMaxHalvings = 30;
constexpr double kDivergenceNorm = 1e3;

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

Vec4 design_row(const VisitObservation& o) {
  return {1.0, static_cast<double>(o.n_answers), o.last_interarrival,
          o.waiting};
}

double linear_index(const LogitCoefficients& c, const Vec4& x) {
  return c.alpha * x[0] + c.beta1 * x[1] + c.beta2 * x[2] + c.beta3 * x[3];
}

// log(1 + e^z) without overflow
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double max_abs(const Vec4& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Solves the SPD system A x = b by Cholesky factorization on the active
// columns, in extended precision: the information matrix can be badly
// conditioned when covariate scales differ by orders of magnitude.  Columns
// carrying no information contribute a zero component; a non-positive pivot
// on an active column means the system is singular.
bool solve4(const Mat4& a, const Vec4& b, Vec4& x) {
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  const double tiny = std::max(scale, 1.0) * 1e-14;

  std::array<int, 4> active{};
  int m = 0;
  for (int i = 0; i < 4; ++i) {
    if (a[i][i] > tiny)
      active[m++] = i;
    else if (std::fabs(b[i]) > tiny)
      return false;
    else
      x[i] = 0.0;
  }

  long double l[4][4] = {};
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      long double s = a[active[i]][active[j]];
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (s <= 0.0L) return false;
        l[i][i] = sqrtl(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  long double y[4];
  for (int i = 0; i < m; ++i) {
    long double s = b[active[i]];
    for (int k = 0; k < i; ++k) s -= l[i][k] * y[k];
    y[i] = s / l[i][i];
  }
  for (int i = m - 1; i >= 0; --i) {
    long double s = y[i];
    for (int k = i + 1; k < m; ++k) s -= l[k][i] * y[k];
    y[i] = s / l[i][i];
    x[active[i]] = static_cast<double>(y[i]);
  }
  return true;
}

Mat4 information_matrix(const std::vector<VisitObservation>& obs,
                        const LogitCoefficients& c) {
  Mat4 info{};
  for (const VisitObservation& o : obs) {
    const Vec4 x = design_row(o);
    const double p = logistic(linear_index(c, x));
    const double w = p * (1.0 - p);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) info[i][j] += w * x[i] * x[j];
  }
  return info;
}

// Standard errors from the inverse of the observed information.  Columns
// carrying no information get an infinite standard error.
Vec4 standard_errors_from(const Mat4& info, bool& singular) {
  Vec4 se;
  singular = false;
  double scale = 0.0;
  for (const auto& row : info)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  const double tiny = std::max(scale, 1.0) * 1e-12;

  std::vector<int> active;
  for (int i = 0; i < 4; ++i) {
    if (info[i][i] > tiny)
      active.push_back(i);
    else
      se[i] = std::numeric_limits<double>::infinity();
  }
  const int m = static_cast<int>(active.size());
  // Gauss-Jordan on the active submatrix augmented with the identity.
  std::vector<std::vector<double>> a(m, std::vector<double>(2 * m, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) a[i][j] = info[active[i]][active[j]];
    a[i][m + i] = 1.0;
  }
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    if (std::fabs(a[col][col]) < tiny) {
      singular = true;
      for (int i : active) se[i] = std::numeric_limits<double>::infinity();
      return se;
    }
    const double p = a[col][col];
    for (int c = 0; c < 2 * m; ++c) a[col][c] /= p;
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 2 * m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (int i = 0; i < m; ++i) {
    const double v = a[i][m + i];
    se[active[i]] = v > 0.0 ? std::sqrt(v)
                            : std::numeric_limits<double>::infinity();
  }
  return se;
}

LogitCoefficients add_scaled(const LogitCoefficients& c, const Vec4& d,
                             double s) {
  return {c.alpha + s * d[0], c.beta1 + s * d[1], c.beta2 + s * d[2],
          c.beta3 + s * d[3]};
}

}  // namespace

// Both accumulate in extended precision: near the optimum the Newton
// step-acceptance test compares likelihood differences far below the
// rounding noise of a plain double sum over ~10^5 terms.
double logit_loglik(const std::vector<VisitObservation>& obs,
                    const LogitCoefficients& c) {
  long double ll = 0.0L;
  for (const VisitObservation& o : obs) {
    const double z = linear_index(c, design_row(o));
    ll += (o.closed ? z : 0.0) - softplus(z);
  }
  return static_cast<double>(ll);
}

std::array<double, 4> logit_gradient(const std::vector<VisitObservation>& obs,
                                     const LogitCoefficients& c) {
  long double g[4] = {};
  for (const VisitObservation& o : obs) {
    const Vec4 x = design_row(o);
    const double resid =
        (o.closed ? 1.0 : 0.0) - logistic(linear_index(c, x));
    for (int i = 0; i < 4; ++i) g[i] += resid * x[i];
  }
  return {static_cast<double>(g[0]), static_cast<double>(g[1]),
          static_cast<double>(g[2]), static_cast<double>(g[3])};
}

LogitFit fit_logit(const std::vector<VisitObservation>& obs) {
  if (obs.empty()) throw std::invalid_argument("fit_logit: no observations");
  std::size_t ones = 0;
  for (const VisitObservation& o : obs) {
    if (!std::isfinite(o.last_interarrival) || !std::isfinite(o.waiting))
      throw std::invalid_argument("fit_logit: non-finite covariate");
    if (o.closed) ++ones;
  }
  if (ones == 0 || ones == obs.size())
    throw std::invalid_argument("fit_logit: all outcomes identical");

  LogitFit fit;
  fit.n_observations = obs.size();
  LogitCoefficients beta{0.0, 0.0, 0.0, 0.0};
  double ll = logit_loglik(obs, beta);
  fit.loglik_trace.push_back(ll);

  for (std::size_t iter = 1; iter <= kMaxIterations; ++iter) {
    const Vec4 g = logit_gradient(obs, beta);
    if (max_abs(g) < kGradientTol) {
      fit.converged = true;
      break;
    }
    const Mat4 info = information_matrix(obs, beta);
    Vec4 delta;
    if (!solve4(info, g, delta)) {
      fit.diagnosis = "singular information matrix (possible separation)";
      break;
    }
    double step = 1.0;
    LogitCoefficients candidate = add_scaled(beta, delta, step);
    double ll_candidate = logit_loglik(obs, candidate);
    std::size_t halvings = 0;
    while (ll_candidate < ll && halvings < kMaxHalvings) {
      step /= 2.0;
      candidate = add_scaled(beta, delta, step);
      ll_candidate = logit_loglik(obs, candidate);
      ++halvings;
    }
    if (ll_candidate < ll) {
      fit.diagnosis = "step-halving failed to improve the likelihood";
      break;
    }
    beta = candidate;
    ll = ll_candidate;
    fit.iterations = iter;
    fit.loglik_trace.push_back(ll);
    const double norm = std::max(
        {std::fabs(beta.alpha), std::fabs(beta.beta1), std::fabs(beta.beta2),
         std::fabs(beta.beta3)});
    if (norm > kDivergenceNorm) {
      fit.diagnosis = "diverging coefficient norm (possible separation)";
      break;
    }
  }
  if (!fit.converged && fit.diagnosis.empty())
    fit.diagnosis = "no convergence within the iteration cap";

  fit.coefficients = beta;
  fit.log_likelihood = ll;
  bool singular = false;
  fit.standard_errors = standard_errors_from(information_matrix(obs, beta),
                                             singular);
  if (singular && fit.converged) {
    fit.converged = false;
    fit.diagnosis = "singular information at the optimum";
  }
  return fit;
}

std::string significance_stars(double z) {
  const double a = std::fabs(z);
  if (a >= 3.2905267314919255) return "***";  // two-sided 0.1%
  if (a >= 2.8070337683438042) return "**";   // two-sided 0.5%
  if (a >= 2.5758293035489004) return "*";    // two-sided 1%
  return "";
}

namespace {

const char* kTermNames[4] = {"alpha", "beta1", "beta2", "beta3"};

std::array<double, 4> coefficient_array(const LogitCoefficients& c) {
  return {c.alpha, c.beta1, c.beta2, c.beta3};
}

}  // namespace

std::string format_logit_report(const LogitFit& fit, ReportFormat format) {
  const auto est = coefficient_array(fit.coefficients);
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "term,estimate,std_error,z,significance\n";
    for (int i = 0; i < 4; ++i) {
      const double z = est[i] / fit.standard_errors[i];
      out << kTermNames[i] << ',' << format_double(est[i]) << ','
          << format_double(fit.standard_errors[i]) << ',' << format_double(z)
          << ',' << significance_stars(z) << '\n';
    }
    return out.str();
  }
  for (int i = 0; i < 4; ++i) {
    const double z = est[i] / fit.standard_errors[i];
    out << kTermNames[i] << '=' << format_double(est[i]) << '\n'
        << kTermNames[i] << "_se=" << format_double(fit.standard_errors[i])
        << '\n'
        << kTermNames[i] << "_z=" << format_double(z) << '\n'
        << kTermNames[i] << "_sig=" << significance_stars(z) << '\n';
  }
  out << "log_likelihood=" << format_double(fit.log_likelihood) << '\n'
      << "n_observations=" << fit.n_observations << '\n'
      << "iterations=" << fit.iterations << '\n'
      << "converged=" << (fit.converged ? 1 : 0) << '\n';
  if (!fit.diagnosis.empty()) out << "diagnosis=" << fit.diagnosis << '\n';
  return out.str();
}

CorrelationResult pearson_correlation(
    const std::vector<std::pair<double, double>>& pairs) {
  const std::size_t n = pairs.size();
  if (n < 3)
    throw std::invalid_argument("pearson_correlation: need at least 3 pairs");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("pearson_correlation: constant variable");
  CorrelationResult result;
  result.n = n;
  result.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (1.0 - std::fabs(result.r) < 1e-12) {
    result.ci_low = result.ci_high = result.r;
    return result;
  }
  const double z = std::atanh(result.r);
  const double half = 1.959963984540054 / std::sqrt(static_cast<double>(n - 3));
  result.ci_low = std::tanh(z - half);
  result.ci_high = std::tanh(z + half);
  return result;
}

std::string format_correlation_report(const CorrelationResult& r,
                                      ReportFormat format) {
  const double z_wald =
      std::atanh(r.r) * std::sqrt(static_cast<double>(r.n - 3));
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "term,estimate,ci_low,ci_high,significance\n";
    out << "pearson_r," << format_double(r.r) << ',' << format_double(r.ci_low)
        << ',' << format_double(r.ci_high) << ',' << significance_stars(z_wald)
        << '\n';
    return out.str();
  }
  out << "pearson_r=" << format_double(r.r) << '\n'
      << "ci_low=" << format_double(r.ci_low) << '\n'
      << "ci_high=" << format_double(r.ci_high) << '\n'
      << "significance=" << significance_stars(z_wald) << '\n'
      << "n=" << r.n << '\n';
  return out.str();
}

InverseGaussianParams fit_inverse_gaussian(const std::vector<double>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("fit_inverse_gaussian: need at least 2 samples");
  double mean = 0.0;
  for (double x : samples) {
    if (!(x > 0.0))
      throw std::invalid_argument("fit_inverse_gaussian: non-positive sample");
    mean += x;
  }
  mean /= static_cast<double>(samples.size());
  double dispersion = 0.0;
  for (double x : samples) dispersion += 1.0 / x - 1.0 / mean;
  if (dispersion <= 0.0)
    throw NumericError("fit_inverse_gaussian: zero dispersion");
  return {mean, static_cast<double>(samples.size()) / dispersion};
}

double invgauss_pdf(const InverseGaussianParams& p, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("invgauss_pdf: x must be > 0");
  const double d = x - p.mu;
  return std::sqrt(p.lambda / (2.0 * Rng::pi())) * std::pow(x, -1.5) *
         std::exp(-p.lambda * d * d / (2.0 * p.mu * p.mu * x));
}

namespace {

// log(erfc(u)), stable for large positive u.
double log_erfc(double u) {
  if (u < 20.0) return std::log(std::erfc(u));
  // asymptotic expansion: erfc(u) ~ exp(-u^2) / (u sqrt(pi)) (1 - 1/(2u^2))
  return -u * u - std::log(u * std::sqrt(Rng::pi())) +
         std::log1p(-0.5 / (u * u));
}

const double kSqrt2 = std::sqrt(2.0);

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double invgauss_cdf(const InverseGaussianParams& p, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("invgauss_cdf: x must be > 0");
  const double a = std::sqrt(p.lambda / x);
  const double term1 = normal_cdf(a * (x / p.mu - 1.0));
  // exp(2*lambda/mu) * Phi(-a (x/mu + 1)) computed in log space
  const double u = a * (x / p.mu + 1.0) / kSqrt2;
  const double log_term2 = 2.0 * p.lambda / p.mu + std::log(0.5) + log_erfc(u);
  const double v = term1 + std::exp(log_term2);
  return std::clamp(v, 0.0, 1.0);
}

double tail_slope(const std::vector<double>& samples, double tail_lo,
                  double tail_hi) {
  if (!(tail_lo < tail_hi))
    throw std::invalid_argument("tail_slope: empty tail range");
  std::map<long long, std::size_t> counts;
  for (double x : samples) {
    if (!(x > 0.0))
      throw std::invalid_argument("tail_slope: non-positive sample");
    ++counts[std::llround(x)];
  }
  std::vector<std::pair<double, double>> points;  // (log value, log count)
  for (const auto& [value, count] : counts) {
    const double v = static_cast<double>(value);
    if (v <= 0.0 || v < tail_lo || v > tail_hi) continue;
    points.emplace_back(std::log(v), std::log(static_cast<double>(count)));
  }
  if (points.size() < 5)
    throw NumericError("tail_slope: fewer than 5 distinct values in range");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  return sxy / sxx;
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

}  // namespace stopwait
