#include "stopwait/expansion.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "stopwait/errors.hpp"

namespace stopwait {

std::vector<VisitObservation> expand_question(const QuestionRecord& q,
                                              const ExpansionOptions& opts) {
  if (opts.visit_interval <= 0.0)
    throw std::invalid_argument("expand_question: visit_interval must be > 0");
  const std::string who = "question '" + q.question_id + "': ";
  if (q.answer_times.empty())
    throw std::invalid_argument(who + "cannot expand a question with no answers");
  if (!q.closed_at)
    throw std::invalid_argument(who + "cannot expand an unclosed question");
  const double closed_at = *q.closed_at;
  if (closed_at < q.answer_times.back())
    throw std::invalid_argument(who + "close time precedes the last answer");

  const double interval = opts.visit_interval;
  std::vector<VisitObservation> out;
  const std::size_t k_count = q.answer_times.size();
  for (std::size_t k = 0; k < k_count; ++k) {
    const double t_k = q.answer_times[k];
    const double prev = k == 0 ? q.posted_at : q.answer_times[k - 1];
    const double l = t_k - prev;
    const double epoch_end =
        k + 1 < k_count ? std::min(q.answer_times[k + 1], closed_at) : closed_at;
    for (std::size_t j = 1;; ++j) {
      const double v = t_k + static_cast<double>(j) * interval;
      if (v >= epoch_end) break;
      out.push_back({q.question_id, v, static_cast<int>(k + 1), l, v - t_k,
                     false});
    }
  }

  const double t_last = q.answer_times.back();
  const double l_last =
      t_last - (k_count > 1 ? q.answer_times[k_count - 2] : q.posted_at);
  double close_time = closed_at;
  if (opts.snap_close_to_grid && closed_at > t_last) {
    const double j = std::ceil((closed_at - t_last) / interval);
    close_time = t_last + j * interval;
  }
  out.push_back({q.question_id, close_time, static_cast<int>(k_count), l_last,
                 close_time - t_last, true});
  return out;
}

std::vector<VisitObservation> expand_corpus(
    const std::vector<QuestionRecord>& records, const ExpansionOptions& opts) {
  std::vector<VisitObservation> out;
  for (const QuestionRecord& q : records) {
    std::vector<VisitObservation> rows = expand_question(q, opts);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

QuestionSummary summarize(const QuestionRecord& q) {
  if (q.answer_times.empty())
    throw std::invalid_argument("summarize: question '" + q.question_id +
                                "' has no answers");
  if (!q.closed_at)
    throw std::invalid_argument("summarize: question '" + q.question_id +
                                "' is not closed");
  return {static_cast<int>(q.answer_times.size()),
          *q.closed_at - q.answer_times.back()};
}

void write_observations_csv(const std::vector<VisitObservation>& obs,
                            std::ostream& out) {
  out << "question_id,visit_time,n,l,w,closed\n";
  for (const VisitObservation& o : obs) {
    out << o.question_id << ',' << format_double(o.visit_time) << ','
        << o.n_answers << ',' << format_double(o.last_interarrival) << ','
        << format_double(o.waiting) << ',' << (o.closed ? '1' : '0') << '\n';
  }
}

std::string write_observations_csv(const std::vector<VisitObservation>& obs) {
  std::ostringstream out;
  write_observations_csv(obs, out);
  return out.str();
}

namespace {

double field_to_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError("bad numeric field '" + s + "'", line);
  return v;
}

}  // namespace

std::vector<VisitObservation> read_observations_csv(std::istream& in) {
  std::vector<VisitObservation> out;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) return out;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "question_id,visit_time,n,l,w,closed")
    throw ParseError("missing or malformed header", line_no);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto pos = line.find(',', start);
      fields.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (fields.size() != 6) throw ParseError("expected 6 fields", line_no);
    VisitObservation o;
    o.question_id = fields[0];
    o.visit_time = field_to_double(fields[1], line_no);
    o.n_answers = static_cast<int>(field_to_double(fields[2], line_no));
    o.last_interarrival = field_to_double(fields[3], line_no);
    o.waiting = field_to_double(fields[4], line_no);
    if (fields[5] != "0" && fields[5] != "1")
      throw ParseError("closed must be 0 or 1", line_no);
    o.closed = fields[5] == "1";
    if (o.n_answers < 1 || o.last_interarrival < 0.0 || o.waiting < 0.0)
      throw ParseError("observation violates n>=1, l>=0, w>=0", line_no);
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<VisitObservation> read_observations_csv(const std::string& text) {
  std::istringstream in(text);
  return read_observations_csv(in);
}

}  // namespace stopwait
