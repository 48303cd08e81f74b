#include "stopwait/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "stopwait/rng.hpp"

namespace stopwait {

namespace {

void validate(const SimScenario& s) {
  if (!(s.horizon > 0.0))
    throw std::invalid_argument("SimScenario: horizon must be > 0");
  if (!(s.visit_interval > 0.0))
    throw std::invalid_argument("SimScenario: visit_interval must be > 0");
  if (s.arrival.kind == ArrivalSpec::Kind::Poisson && !(s.arrival.rate > 0.0))
    throw std::invalid_argument("SimScenario: arrival rate must be > 0");
  if (s.arrival.kind == ArrivalSpec::Kind::LognormalRenewal &&
      !(s.arrival.sdlog > 0.0))
    throw std::invalid_argument("SimScenario: arrival sdlog must be > 0");
}

double draw_gap(const ArrivalSpec& spec, Rng& rng) {
  if (spec.kind == ArrivalSpec::Kind::Poisson)
    return rng.exponential(spec.rate);
  return std::exp(rng.normal(spec.meanlog, spec.sdlog));
}

// Close decision at one visit; consumes draws from the agent stream.
bool decides_to_close(const AgentSpec& agent, int n, double l, double w,
                      Rng& rng) {
  if (agent.kind == AgentSpec::Kind::Logit)
    return rng.uniform() <
           close_probability(agent.logit, static_cast<double>(n), l, w);
  const double eps_close = rng.gumbel();
  const double eps_wait = rng.gumbel();
  const double stay = utility(agent.utility, n + 1) -
                      expected_wait_cost(agent.cost, l, w) + eps_wait;
  return utility(agent.utility, n) + eps_close > stay;
}

std::string question_id_for(std::size_t index) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "q%06zu", index + 1);
  return buf;
}

}  // namespace

std::vector<double> generate_arrivals(const SimScenario& scenario,
                                      std::size_t question_index) {
  validate(scenario);
  Rng rng(scenario.seed, 2 * question_index);
  std::vector<double> times;
  double t = 0.0;
  for (;;) {
    t += draw_gap(scenario.arrival, rng);
    if (t >= scenario.horizon) break;
    times.push_back(t);
  }
  return times;
}

std::optional<double> simulate_asker(const std::vector<double>& answer_times,
                                     const SimScenario& scenario,
                                     std::size_t question_index) {
  validate(scenario);
  Rng rng(scenario.seed, 2 * question_index + 1);
  const std::size_t k_count = answer_times.size();
  for (std::size_t k = 0; k < k_count; ++k) {
    const double t_k = answer_times[k];
    const double prev = k == 0 ? 0.0 : answer_times[k - 1];
    const double l = t_k - prev;
    const int n = static_cast<int>(k + 1);
    const double epoch_end =
        k + 1 < k_count ? answer_times[k + 1] : scenario.horizon;
    if (scenario.check_at_arrivals &&
        decides_to_close(scenario.agent, n, l, 0.0, rng))
      return t_k;
    for (std::size_t j = 1;; ++j) {
      const double v = t_k + static_cast<double>(j) * scenario.visit_interval;
      if (v >= epoch_end) break;
      if (decides_to_close(scenario.agent, n, l, v - t_k, rng)) return v;
    }
  }
  return std::nullopt;
}

std::vector<QuestionRecord> generate_dataset(const SimScenario& scenario) {
  validate(scenario);
  std::vector<QuestionRecord> records;
  records.reserve(scenario.n_questions);
  for (std::size_t q = 0; q < scenario.n_questions; ++q) {
    QuestionRecord record;
    record.question_id = question_id_for(q);
    record.posted_at = 0.0;
    record.answer_times = generate_arrivals(scenario, q);
    if (!record.answer_times.empty()) {
      if (const auto closed = simulate_asker(record.answer_times, scenario, q)) {
        record.closed_at = *closed;
        record.closed_by_asker = true;
        while (record.answer_times.back() > *closed)
          record.answer_times.pop_back();
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace stopwait
