#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stopwait/records.hpp"
#include "stopwait/simulator.hpp"

using namespace stopwait;

TEST_CASE("arrivals are ascending, bounded, and deterministic") {
  SimScenario s;
  s.seed = 12;
  s.arrival.rate = 0.3;
  for (std::size_t q = 0; q < 20; ++q) {
    const auto times = generate_arrivals(s, q);
    double prev = 0.0;
    for (double t : times) {
      CHECK(t > prev);
      CHECK(t < s.horizon);
      prev = t;
    }
    CHECK(generate_arrivals(s, q) == times);
  }
  CHECK(generate_arrivals(s, 0) != generate_arrivals(s, 1));
  SimScenario other = s;
  other.seed = 13;
  CHECK(generate_arrivals(other, 0) != generate_arrivals(s, 0));
}

TEST_CASE("poisson arrival count matches the rate") {
  SimScenario s;
  s.seed = 4;
  s.arrival.rate = 0.2;
  s.horizon = 96.0;
  double total = 0.0;
  const std::size_t questions = 2000;
  for (std::size_t q = 0; q < questions; ++q)
    total += static_cast<double>(generate_arrivals(s, q).size());
  const double mean = total / static_cast<double>(questions);
  const double expected = s.arrival.rate * s.horizon;  // 19.2
  CHECK(std::fabs(mean - expected) < 0.3);
}

TEST_CASE("renewal arrivals use lognormal gaps") {
  SimScenario s;
  s.seed = 9;
  s.arrival.kind = ArrivalSpec::Kind::LognormalRenewal;
  s.arrival.meanlog = 1.5;
  s.arrival.sdlog = 0.5;
  // lognormal gap mean = exp(1.5 + 0.125) ~ 5.08 h
  double total = 0.0;
  std::size_t gaps = 0;
  for (std::size_t q = 0; q < 500; ++q) {
    const auto times = generate_arrivals(s, q);
    double prev = 0.0;
    for (double t : times) {
      total += t - prev;
      prev = t;
      ++gaps;
    }
  }
  CHECK(std::fabs(total / static_cast<double>(gaps) -
                  std::exp(1.5 + 0.5 * 0.25)) < 0.2);
}

TEST_CASE("extreme intercepts pin down the close time") {
  SimScenario s;
  s.seed = 3;
  SUBCASE("never closes") {
    s.agent.logit.alpha = -60.0;
    for (std::size_t q = 0; q < 10; ++q)
      CHECK(!simulate_asker({1.0, 5.0, 9.0}, s, q).has_value());
  }
  SUBCASE("closes at the first arrival check") {
    s.agent.logit.alpha = 60.0;
    const auto close = simulate_asker({1.0, 5.0}, s, 0);
    REQUIRE(close.has_value());
    CHECK(*close == 1.0);
  }
  SUBCASE("closes at the first grid visit when arrival checks are off") {
    s.agent.logit.alpha = 60.0;
    s.check_at_arrivals = false;
    const auto close = simulate_asker({1.0, 5.0}, s, 0);
    REQUIRE(close.has_value());
    CHECK(*close == 2.0);
  }
}

TEST_CASE("gumbel and logit agents close at the same rate") {
  // matched parameters: alpha = alpha_c - alpha_u = -3.408 - 1.0 = -4.408
  SimScenario logit_s;
  logit_s.seed = 21;
  logit_s.horizon = 1.5;  // no grid visit before the horizon
  logit_s.agent.kind = AgentSpec::Kind::Logit;

  SimScenario gumbel_s = logit_s;
  gumbel_s.agent.kind = AgentSpec::Kind::Gumbel;

  const std::size_t trials = 100000;
  std::size_t logit_closes = 0, gumbel_closes = 0;
  for (std::size_t q = 0; q < trials; ++q) {
    if (simulate_asker({1.0}, logit_s, q)) ++logit_closes;
    if (simulate_asker({1.0}, gumbel_s, q)) ++gumbel_closes;
  }
  const double p = close_probability(logit_s.agent.logit, 1, 1.0, 0.0);
  const double n = static_cast<double>(trials);
  const double tol = 3.0 * std::sqrt(2.0 * p * (1.0 - p) / n);
  CHECK(std::fabs(logit_closes / n - gumbel_closes / n) < tol);
  // and both sit near the analytic probability
  CHECK(std::fabs(logit_closes / n - p) < 3.0 * std::sqrt(p * (1.0 - p) / n));
}

TEST_CASE("generated corpora are valid and deterministic") {
  SimScenario s;
  s.n_questions = 200;
  s.seed = 8;
  const auto records = generate_dataset(s);
  REQUIRE(records.size() == s.n_questions);
  std::size_t closed = 0;
  for (const auto& q : records) {
    validate_record(q);
    if (q.closed_at) {
      CHECK(q.closed_by_asker);
      CHECK(!q.answer_times.empty());
      CHECK(q.answer_times.back() <= *q.closed_at);
      ++closed;
    } else {
      CHECK_FALSE(q.closed_by_asker);
    }
  }
  CHECK(closed > 0);
  CHECK(generate_dataset(s) == records);

  SimScenario other = s;
  other.seed = 9;
  CHECK(generate_dataset(other) != records);

  s.n_questions = 0;
  CHECK(generate_dataset(s).empty());
}

TEST_CASE("question ids are stable and unique") {
  SimScenario s;
  s.n_questions = 3;
  const auto records = generate_dataset(s);
  CHECK(records[0].question_id == "q000001");
  CHECK(records[1].question_id == "q000002");
  CHECK(records[2].question_id == "q000003");
}

TEST_CASE("scenario validation") {
  SimScenario s;
  s.horizon = 0.0;
  CHECK_THROWS_AS(generate_dataset(s), std::invalid_argument);
  s = {};
  s.visit_interval = -1.0;
  CHECK_THROWS_AS(generate_dataset(s), std::invalid_argument);
  s = {};
  s.arrival.rate = 0.0;
  CHECK_THROWS_AS(generate_dataset(s), std::invalid_argument);
  s = {};
  s.arrival.kind = ArrivalSpec::Kind::LognormalRenewal;
  s.arrival.sdlog = 0.0;
  CHECK_THROWS_AS(generate_dataset(s), std::invalid_argument);
}
