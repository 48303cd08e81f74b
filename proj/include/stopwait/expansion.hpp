#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stopwait/records.hpp"

namespace stopwait {

// One asker visit: the unit of observation for the discrete-choice fit.
struct VisitObservation {
  std::string question_id;
  double visit_time = 0.0;
  int n_answers = 0;           // n, >= 1
  double last_interarrival = 0.0;  // l, >= 0
  double waiting = 0.0;        // w, >= 0
  bool closed = false;

  bool operator==(const VisitObservation&) const = default;
};

struct QuestionSummary {
  int total_answers = 0;
  double elapsed_time = 0.0;  // close time minus last answer arrival

  bool operator==(const QuestionSummary&) const = default;
};

struct ExpansionOptions {
  double visit_interval = 1.0;
  // When true, the closing observation is snapped forward to the next
  // scheduled visit instead of sitting at the exact close time.
  bool snap_close_to_grid = false;
};

// Expands one eligible question into its visit schedule: after the k-th
// answer at t_k, visits at t_k + j*interval strictly before the next answer
// (or close), each a non-close observation, plus one closing observation.
// A visit landing exactly on an answer arrival belongs to the new answer's
// epoch.  l for n=1 is the posting-to-first-answer gap.
std::vector<VisitObservation> expand_question(const QuestionRecord& q,
                                              const ExpansionOptions& opts);

std::vector<VisitObservation> expand_corpus(
    const std::vector<QuestionRecord>& records, const ExpansionOptions& opts);

// total_answers and time between last answer and closure.
QuestionSummary summarize(const QuestionRecord& q);

// CSV with header question_id,visit_time,n,l,w,closed (closed in {0,1}).
void write_observations_csv(const std::vector<VisitObservation>& obs,
                            std::ostream& out);
std::string write_observations_csv(const std::vector<VisitObservation>& obs);
std::vector<VisitObservation> read_observations_csv(std::istream& in);
std::vector<VisitObservation> read_observations_csv(const std::string& text);

}  // namespace stopwait
