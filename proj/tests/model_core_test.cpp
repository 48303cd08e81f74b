#include "stopwait/model_core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "stopwait/rng.hpp"

using namespace stopwait;

namespace {
const LogitCoefficients kReferenceFit{-4.408, 0.027, 0.028, 0.021};
}

TEST_CASE("logistic basics") {
  CHECK(logistic(0.0) == doctest::Approx(0.5));
  CHECK(std::fabs(logistic(-4.408) - 0.01203) < 1e-5);
  CHECK_THROWS_AS(logistic(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(logistic(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

TEST_CASE("logistic symmetry over a grid") {
  for (double z = -40.0; z <= 40.0; z += 0.37)
    CHECK(logistic(z) + logistic(-z) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("logistic strictly increasing") {
  double prev = logistic(-30.0);
  for (double z = -29.5; z <= 30.0; z += 0.5) {
    const double cur = logistic(z);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("close probability at the reported fit") {
  CHECK(std::fabs(close_probability(kReferenceFit, 1, 0, 0) - 0.01236) < 1e-5);
  CHECK(std::fabs(close_probability(kReferenceFit, 10, 10, 10) - 0.02538) < 1e-5);
  const LogitCoefficients zero{0, 0, 0, 0};
  CHECK(close_probability(zero, 1, 0, 0) == doctest::Approx(0.5));
  CHECK(close_probability(zero, 7, 3.5, 12.2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(close_probability(kReferenceFit, 1, -0.1, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(close_probability(kReferenceFit, 1, 0, -0.1),
                  std::invalid_argument);
}

TEST_CASE("close probability monotone when coefficients positive") {
  double prev = 0.0;
  for (int n = 1; n <= 30; ++n) {
    const double p = close_probability(kReferenceFit, n, 5, 5);
    CHECK(p > prev);
    prev = p;
  }
  prev = 0.0;
  for (double l = 0; l <= 30; l += 1.5) {
    const double p = close_probability(kReferenceFit, 3, l, 5);
    CHECK(p > prev);
    prev = p;
  }
  prev = 0.0;
  for (double w = 0; w <= 30; w += 1.5) {
    const double p = close_probability(kReferenceFit, 3, 5, w);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("marginal benefit") {
  const UtilitySpec u{1.0, 0.027};
  CHECK(marginal_benefit(u, 0) == doctest::Approx(1.0));
  CHECK(marginal_benefit(u, 10) == doctest::Approx(0.73));
  for (int n = 0; n < 100; ++n)
    CHECK(marginal_benefit(u, n + 1) < marginal_benefit(u, n));
}

TEST_CASE("utility quadratic form") {
  const UtilitySpec u{1.0, 0.027, 0.0};
  CHECK(utility(u, 0) == doctest::Approx(0.0));
  CHECK(utility(u, 1) == doctest::Approx(1.0));
  CHECK(utility(u, 2) == doctest::Approx(1.973));
  // constant second difference -beta1
  for (int n = 0; n < 50; ++n) {
    const double second =
        utility(u, n + 2) - 2.0 * utility(u, n + 1) + utility(u, n);
    CHECK(second == doctest::Approx(-0.027).epsilon(1e-9));
  }
}

TEST_CASE("utility telescopes against marginal benefit") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const UtilitySpec u{rng.uniform() * 8.0 - 2.0, rng.uniform() * 0.2,
                        rng.uniform() * 4.0 - 2.0};
    for (int n = 0; n <= 200; ++n)
      CHECK(std::fabs(utility(u, n + 1) - utility(u, n) -
                      marginal_benefit(u, n)) < 1e-9);
  }
}

TEST_CASE("utility concave when beta1 positive") {
  const UtilitySpec u{3.0, 0.05};
  double prev_diff = utility(u, 1) - utility(u, 0);
  for (int n = 1; n <= 120; ++n) {
    const double diff = utility(u, n + 1) - utility(u, n);
    CHECK(diff <= prev_diff);
    prev_diff = diff;
  }
}

TEST_CASE("expected wait cost") {
  const CostSpec c{0.0, 0.028, 0.021};
  CHECK(expected_wait_cost(c, 0, 0) == doctest::Approx(0.0));
  CHECK(expected_wait_cost(c, 10, 5) == doctest::Approx(0.385));
  // additivity in l
  CHECK(expected_wait_cost(c, 7.5 + 2.5, 4) - expected_wait_cost(c, 7.5, 4) ==
        doctest::Approx(0.028 * 2.5));
  CHECK_THROWS_AS(expected_wait_cost(c, -1, 0), std::invalid_argument);
}

TEST_CASE("myopic decision rule") {
  const UtilitySpec u{1.0, 0.027};
  const CostSpec c{0.0, 0.028, 0.021};
  // marginal benefit 0.73 vs cost 0.385
  CHECK(myopic_decision(u, c, 10, 10, 5) == Decision::Wait);
  // zero marginal benefit vs positive cost
  const UtilitySpec flat{0.0, 0.027};
  CHECK(myopic_decision(flat, c, 1, 10, 5) == Decision::Close);
  // exact equality closes
  const UtilitySpec even{0.385 + 0.027, 0.027};
  CHECK(marginal_benefit(even, 1) == doctest::Approx(0.385));
  CHECK(myopic_decision(even, c, 1, 10, 5) == Decision::Close);
}

TEST_CASE("utility peak") {
  CHECK(utility_peak({1.0, 0.027}) == 37);
  CHECK(utility_peak({4.0, 0.027}) == 148);
  CHECK(utility_peak({0.027, 0.027}) == 1);
  CHECK(!utility_peak({-1.0, 0.027}).has_value());
  CHECK_THROWS_AS(utility_peak({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(utility_peak({1.0, -0.1}), std::invalid_argument);
}

TEST_CASE("intercept split identity") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const LogitCoefficients c{rng.uniform() * 10 - 5, rng.uniform(),
                              rng.uniform(), rng.uniform()};
    const double alpha_u = rng.uniform() * 6 - 1;
    const auto [u, cost] = split_intercept(c, alpha_u);
    CHECK(cost.alpha_c - u.alpha_u == doctest::Approx(c.alpha).epsilon(1e-12));
    CHECK(u.beta1 == c.beta1);
    CHECK(cost.beta2 == c.beta2);
    CHECK(cost.beta3 == c.beta3);
  }
}
