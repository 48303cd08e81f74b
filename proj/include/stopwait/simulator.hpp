#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stopwait/model_core.hpp"
#include "stopwait/records.hpp"

namespace stopwait {

struct ArrivalSpec {
  enum class Kind { Poisson, LognormalRenewal };
  Kind kind = Kind::Poisson;
  double rate = 0.2;     // answers per hour (Poisson)
  double meanlog = 1.5;  // renewal inter-arrival log-mean
  double sdlog = 0.5;    // renewal inter-arrival log-sd
};

struct AgentSpec {
  enum class Kind { Logit, Gumbel };
  Kind kind = Kind::Logit;
  LogitCoefficients logit{-4.408, 0.027, 0.028, 0.021};
  UtilitySpec utility{1.0, 0.027, 0.0};
  CostSpec cost{-3.408, 0.028, 0.021};
};

struct SimScenario {
  std::size_t n_questions = 100;
  ArrivalSpec arrival;
  double horizon = 96.0;        // open period in hours
  double visit_interval = 1.0;  // asker check spacing in hours
  AgentSpec agent;
  std::uint64_t seed = 0;
  // Also check at the instant of each answer arrival (w = 0) in addition to
  // the interval grid.  Visits the expansion schedule does not emit, so
  // recovery runs that refit the expanded corpus should turn this off.
  bool check_at_arrivals = true;
};

// Answer arrival times for one question (posted at 0), truncated at the
// horizon.  Deterministic given (seed, question_index).
std::vector<double> generate_arrivals(const SimScenario& scenario,
                                      std::size_t question_index);

// Walks the visit schedule over the given arrivals and returns the first
// close time, or nothing if the horizon ends first.  Uses its own stream
// derived from (seed, question_index), independent of the arrival stream.
std::optional<double> simulate_asker(const std::vector<double>& answer_times,
                                     const SimScenario& scenario,
                                     std::size_t question_index);

// Full synthetic corpus; questions that never close are emitted with
// closed_by_asker = false and fail eligibility downstream.
std::vector<QuestionRecord> generate_dataset(const SimScenario& scenario);

}  // namespace stopwait
