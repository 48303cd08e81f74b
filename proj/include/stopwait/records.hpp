#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stopwait {

// One question's event history.  Times are decimal hours relative to a
// file-level epoch.
struct QuestionRecord {
  std::string question_id;
  double posted_at = 0.0;
  std::vector<double> answer_times;  // strictly ascending, all >= posted_at
  std::optional<double> closed_at;   // if present, >= first answer time
  bool closed_by_asker = false;

  bool operator==(const QuestionRecord&) const = default;
};

enum class LogFormat { Csv, Jsonl };

// Histogram of open durations (closed_at - posted_at) with half-open bins
// [k*bin_width, (k+1)*bin_width).
struct HistogramReport {
  double bin_width = 1.0;
  std::vector<std::size_t> counts;
  std::vector<double> durations;  // one per input record

  std::size_t total() const { return durations.size(); }
  // Fraction of questions closed within t hours (duration <= t).
  double fraction_within(double t) const;
};

// Throws ParseError (with line number and question id where known) on
// malformed input or invariant violations; never drops records silently.
std::vector<QuestionRecord> parse_event_log(std::istream& in, LogFormat format);
std::vector<QuestionRecord> parse_event_log(const std::string& text,
                                            LogFormat format);

void serialize_event_log(const std::vector<QuestionRecord>& records,
                         std::ostream& out, LogFormat format);
std::string serialize_event_log(const std::vector<QuestionRecord>& records,
                                LogFormat format);

// Checks the QuestionRecord invariants; throws ParseError naming the
// question on violation.
void validate_record(const QuestionRecord& q);

// Keeps records closed by the asker in strictly less than `max_open_hours`
// (default matches the 4-day open period plus slack).  Order preserved;
// idempotent.
std::vector<QuestionRecord> filter_eligible(
    const std::vector<QuestionRecord>& records, double max_open_hours = 100.0);

HistogramReport open_duration_histogram(
    const std::vector<QuestionRecord>& records, double bin_width);

// CSV `bin_start,bin_end,count,cumulative_fraction`.
void write_histogram_csv(const HistogramReport& report, std::ostream& out);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

}  // namespace stopwait
