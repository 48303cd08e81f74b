#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "doctest.h"
#include "stopwait/errors.hpp"
#include "stopwait/estimation.hpp"
#include "stopwait/rng.hpp"

using namespace stopwait;

namespace {

std::vector<VisitObservation> intercept_only(std::size_t n_total,
                                             std::size_t n_ones) {
  std::vector<VisitObservation> obs(n_total);
  for (std::size_t i = 0; i < n_total; ++i) {
    obs[i].question_id = "q";
    obs[i].n_answers = 0;
    obs[i].closed = i < n_ones;
  }
  return obs;
}

std::vector<VisitObservation> random_observations(Rng& rng, std::size_t count,
                                                  const LogitCoefficients& c) {
  std::vector<VisitObservation> obs(count);
  for (auto& o : obs) {
    o.question_id = "q";
    o.n_answers = 1 + static_cast<int>(rng.uniform() * 10);
    o.last_interarrival = rng.exponential(0.5);
    o.waiting = rng.exponential(0.3);
    o.closed = rng.uniform() < close_probability(c, o.n_answers,
                                                 o.last_interarrival, o.waiting);
  }
  return obs;
}

}  // namespace

TEST_CASE("intercept-only fits have closed forms") {
  SUBCASE("balanced outcomes give the zero vector") {
    const auto fit = fit_logit(intercept_only(40, 20));
    CHECK(fit.converged);
    CHECK(std::fabs(fit.coefficients.alpha) < 1e-8);
    CHECK(fit.coefficients.beta1 == 0.0);
    CHECK(fit.coefficients.beta2 == 0.0);
    CHECK(fit.coefficients.beta3 == 0.0);
  }
  SUBCASE("25% ones give log(1/3)") {
    const auto fit = fit_logit(intercept_only(100, 25));
    CHECK(fit.converged);
    CHECK(fit.coefficients.alpha ==
          doctest::Approx(std::log(0.25 / 0.75)).epsilon(1e-6));
    CHECK(std::fabs(fit.coefficients.alpha + 1.0986) < 1e-4);
    // the flat covariate columns carry no information
    CHECK(std::isinf(fit.standard_errors[1]));
    CHECK(std::isinf(fit.standard_errors[2]));
    CHECK(std::isinf(fit.standard_errors[3]));
    CHECK(std::isfinite(fit.standard_errors[0]));
  }
}

TEST_CASE("fit rejects degenerate inputs") {
  CHECK_THROWS_AS(fit_logit({}), std::invalid_argument);
  CHECK_THROWS_AS(fit_logit(intercept_only(10, 0)), std::invalid_argument);
  CHECK_THROWS_AS(fit_logit(intercept_only(10, 10)), std::invalid_argument);
}

TEST_CASE("separation reported as non-convergence") {
  // perfectly separated on w
  std::vector<VisitObservation> obs(40);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    obs[i].n_answers = 1;
    obs[i].waiting = static_cast<double>(i);
    obs[i].closed = i >= 20;
  }
  const auto fit = fit_logit(obs);
  CHECK_FALSE(fit.converged);
  CHECK_FALSE(fit.diagnosis.empty());
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(101);
  const LogitCoefficients truth{-2.0, 0.1, 0.05, 0.02};
  const auto obs = random_observations(rng, 500, truth);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    LogitCoefficients c{rng.normal(0, 1), rng.normal(0, 0.1),
                        rng.normal(0, 0.1), rng.normal(0, 0.1)};
    const auto g = logit_gradient(obs, c);
    double* fields[4] = {&c.alpha, &c.beta1, &c.beta2, &c.beta3};
    for (int i = 0; i < 4; ++i) {
      const double saved = *fields[i];
      *fields[i] = saved + h;
      const double up = logit_loglik(obs, c);
      *fields[i] = saved - h;
      const double down = logit_loglik(obs, c);
      *fields[i] = saved;
      const double fd = (up - down) / (2.0 * h);
      CHECK(std::fabs(g[i] - fd) / std::max(1.0, std::fabs(fd)) < 1e-6);
    }
  }
}

TEST_CASE("likelihood trace is non-decreasing") {
  Rng rng(7);
  const LogitCoefficients truth{-1.5, 0.08, 0.03, 0.01};
  const auto fit = fit_logit(random_observations(rng, 2000, truth));
  CHECK(fit.converged);
  REQUIRE(fit.loglik_trace.size() >= 2);
  for (std::size_t i = 1; i < fit.loglik_trace.size(); ++i)
    CHECK(fit.loglik_trace[i] >= fit.loglik_trace[i - 1]);
}

TEST_CASE("converged fit satisfies the gradient tolerance") {
  Rng rng(13);
  const LogitCoefficients truth{-2.2, 0.05, 0.04, 0.03};
  const auto obs = random_observations(rng, 3000, truth);
  const auto fit = fit_logit(obs);
  REQUIRE(fit.converged);
  const auto g = logit_gradient(obs, fit.coefficients);
  for (double gi : g) CHECK(std::fabs(gi) < 1e-8);
  CHECK(fit.n_observations == obs.size());
  for (double se : fit.standard_errors) CHECK(se > 0.0);
}

TEST_CASE("significance stars follow the Wald cutoffs") {
  CHECK(significance_stars(0.0) == "");
  CHECK(significance_stars(2.57) == "");
  CHECK(significance_stars(2.58) == "*");
  CHECK(significance_stars(-2.9) == "**");
  CHECK(significance_stars(3.3) == "***");
  CHECK(significance_stars(-50.0) == "***");
}

TEST_CASE("logit report formats") {
  LogitFit fit;
  fit.coefficients = {-4.408, 0.027, 0.028, 0.021};
  fit.standard_errors = {0.1, 0.01, 0.01, 0.005};
  fit.log_likelihood = -123.5;
  fit.n_observations = 1000;
  fit.iterations = 6;
  fit.converged = true;

  const std::string kv = format_logit_report(fit, ReportFormat::KeyValue);
  CHECK(kv.find("alpha=-4.408\n") != std::string::npos);
  CHECK(kv.find("alpha_sig=***\n") != std::string::npos);
  CHECK(kv.find("beta1=0.027\n") != std::string::npos);
  CHECK(kv.find("converged=1\n") != std::string::npos);
  CHECK(kv.find("diagnosis=") == std::string::npos);

  const std::string csv = format_logit_report(fit, ReportFormat::Csv);
  CHECK(csv.rfind("term,estimate,std_error,z,significance\n", 0) == 0);
  CHECK(csv.find("beta3,0.021,0.005,4.2,***\n") != std::string::npos);
}

TEST_CASE("pearson correlation basics") {
  const auto perfect = pearson_correlation({{1, 2}, {2, 4}, {3, 6}});
  CHECK(perfect.r == doctest::Approx(1.0));
  CHECK(perfect.ci_low == perfect.ci_high);

  const auto half = pearson_correlation({{1, 6}, {2, 4}, {3, 5}});
  CHECK(half.r == doctest::Approx(-0.5).epsilon(1e-12));

  CHECK_THROWS_AS(pearson_correlation({{1, 1}, {2, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(pearson_correlation({{1, 1}, {1, 2}, {1, 3}}),
                  std::invalid_argument);
}

TEST_CASE("pearson CI brackets r and shrinks with n") {
  Rng rng(55);
  std::vector<std::pair<double, double>> small, large;
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.normal();
    const double y = -0.4 * x + rng.normal();
    if (i < 30) small.emplace_back(x, y);
    large.emplace_back(x, y);
  }
  const auto rs = pearson_correlation(small);
  const auto rl = pearson_correlation(large);
  CHECK(rs.ci_low <= rs.r);
  CHECK(rs.r <= rs.ci_high);
  CHECK(rl.ci_high - rl.ci_low < rs.ci_high - rs.ci_low);
  CHECK(rl.r < 0.0);
  CHECK(rl.ci_high < 0.0);
}

TEST_CASE("pearson correlation affine invariance") {
  Rng rng(77);
  std::vector<std::pair<double, double>> base;
  for (int i = 0; i < 100; ++i)
    base.emplace_back(rng.normal(), rng.normal() + 0.3 * i);
  const double r0 = pearson_correlation(base).r;
  std::vector<std::pair<double, double>> scaled, flipped;
  for (const auto& [x, y] : base) {
    scaled.emplace_back(3.0 * x + 7.0, 0.5 * y - 2.0);
    flipped.emplace_back(-x, y);
  }
  CHECK(pearson_correlation(scaled).r == doctest::Approx(r0).epsilon(1e-12));
  CHECK(pearson_correlation(flipped).r == doctest::Approx(-r0).epsilon(1e-12));
}

TEST_CASE("inverse gaussian closed-form fit") {
  const auto p = fit_inverse_gaussian({1.0, 3.0});
  CHECK(p.mu == doctest::Approx(2.0));
  CHECK(p.lambda == doctest::Approx(6.0));
  CHECK(p.variance() == doctest::Approx(8.0 / 6.0));

  CHECK_THROWS_AS(fit_inverse_gaussian({2.0, 2.0, 2.0}), NumericError);
  CHECK_THROWS_AS(fit_inverse_gaussian({1.0, -2.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_inverse_gaussian({1.0}), std::invalid_argument);
}

TEST_CASE("inverse gaussian fit mean matches sample mean exactly") {
  Rng rng(91);
  std::vector<double> samples;
  double sum = 0.0;
  for (int i = 0; i < 500; ++i) {
    samples.push_back(rng.inverse_gaussian(6.1, 5.8));
    sum += samples.back();
  }
  const auto p = fit_inverse_gaussian(samples);
  CHECK(p.mu == sum / 500.0);
}

TEST_CASE("inverse gaussian pdf values") {
  const InverseGaussianParams reference{6.1, 5.8};
  CHECK(std::fabs(invgauss_pdf(reference, 6.1) - 0.06377) < 1e-4);
  const InverseGaussianParams unit{1.0, 1.0};
  CHECK(invgauss_pdf(unit, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * Rng::pi())).epsilon(1e-12));
  CHECK(std::fabs(invgauss_pdf(unit, 1.0) - 0.39894) < 1e-5);
  CHECK_THROWS_AS(invgauss_pdf(unit, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(invgauss_pdf(unit, -1.0), std::invalid_argument);
}

TEST_CASE("inverse gaussian cdf shape") {
  const InverseGaussianParams p{6.1, 5.8};
  double prev = 0.0;
  for (double x = 0.05; x <= 200.0; x += 0.05) {
    const double f = invgauss_cdf(p, x);
    CHECK(f >= prev);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    prev = f;
  }
  CHECK(invgauss_cdf(p, 1e-6) < 1e-10);
  CHECK(invgauss_cdf(p, 1e4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(invgauss_cdf(p, 0.0), std::invalid_argument);
}

TEST_CASE("cdf derivative matches pdf") {
  const InverseGaussianParams p{6.1, 5.8};
  const double h = 1e-6;
  for (double x = 0.5; x <= 40.0; x += 0.5) {
    const double deriv = (invgauss_cdf(p, x + h) - invgauss_cdf(p, x - h)) /
                         (2.0 * h);
    CHECK(std::fabs(deriv - invgauss_pdf(p, x)) < 1e-6);
  }
}

TEST_CASE("log-density slope approaches -3/2 for small lambda") {
  // d log f / d log x = -3/2 - lambda*(x^2 - mu^2)/(2 mu^2 x)
  const InverseGaussianParams p{10.0, 0.01};
  for (double x = 5.0; x <= 50.0; x *= 1.5) {
    const double h = 1e-5;
    const double slope = (std::log(invgauss_pdf(p, x * (1 + h))) -
                          std::log(invgauss_pdf(p, x * (1 - h)))) /
                         (std::log(1 + h) - std::log(1 - h));
    CHECK(std::fabs(slope + 1.5) < 0.01);
  }
}

TEST_CASE("tail slope on exact power laws") {
  // counts proportional to x^{-3/2} at perfect-square values
  std::vector<double> samples;
  const double values[5] = {1, 4, 9, 16, 25};
  const std::size_t counts32[5] = {216000, 27000, 8000, 3375, 1728};
  for (int i = 0; i < 5; ++i)
    samples.insert(samples.end(), counts32[i], values[i]);
  CHECK(std::fabs(tail_slope(samples, 0.5, 30.0) + 1.5) < 1e-9);

  // counts proportional to x^{-1}
  std::vector<double> inverse;
  const std::size_t counts1[5] = {3600, 900, 400, 225, 144};
  for (int i = 0; i < 5; ++i)
    inverse.insert(inverse.end(), counts1[i], values[i]);
  CHECK(std::fabs(tail_slope(inverse, 0.5, 30.0) + 1.0) < 1e-9);

  CHECK_THROWS_AS(tail_slope(samples, 10.0, 30.0), NumericError);
  CHECK_THROWS_AS(tail_slope(samples, 5.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(tail_slope({-1.0}, 1.0, 10.0), std::invalid_argument);
}

TEST_CASE("ks distance") {
  const auto uniform_cdf = [](double x) {
    return std::clamp(x, 0.0, 1.0);
  };
  CHECK(ks_distance({0.5}, uniform_cdf) == doctest::Approx(0.5));
  CHECK(ks_distance({0.25, 0.5, 0.75}, uniform_cdf) ==
        doctest::Approx(0.25).epsilon(1e-12));

  Rng rng(31);
  std::vector<double> draws;
  for (int i = 0; i < 100000; ++i) draws.push_back(rng.uniform());
  const double d = ks_distance(draws, uniform_cdf);
  CHECK(d < 0.01);
  CHECK(d >= 0.0);
  CHECK_THROWS_AS(ks_distance({}, uniform_cdf), std::invalid_argument);
}

TEST_CASE("ig sampler agrees with the analytic cdf") {
  Rng rng(47);
  const InverseGaussianParams p{6.1, 5.8};
  std::vector<double> draws;
  for (int i = 0; i < 20000; ++i)
    draws.push_back(rng.inverse_gaussian(p.mu, p.lambda));
  const double d = ks_distance(
      draws, [&](double x) { return invgauss_cdf(p, x); });
  CHECK(d < 0.015);
  const auto fitted = fit_inverse_gaussian(draws);
  CHECK(fitted.mu == doctest::Approx(6.1).epsilon(0.03));
  CHECK(fitted.lambda == doctest::Approx(5.8).epsilon(0.05));
}

TEST_CASE("correlation report formats") {
  CorrelationResult r{-0.148, -0.196, -0.098, 1536};
  const std::string kv = format_correlation_report(r, ReportFormat::KeyValue);
  CHECK(kv.find("pearson_r=-0.148\n") != std::string::npos);
  CHECK(kv.find("n=1536\n") != std::string::npos);
  const std::string csv = format_correlation_report(r, ReportFormat::Csv);
  CHECK(csv.rfind("term,estimate,ci_low,ci_high,significance\n", 0) == 0);
}
