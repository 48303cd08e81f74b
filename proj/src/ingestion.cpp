#include "stopwait/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "stopwait/errors.hpp"

namespace stopwait {

namespace {

double parse_hours(const std::string& field, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw ParseError("bad time_hours value '" + field + "'", line);
  return value;
}

struct PendingRecord {
  QuestionRecord record;
  bool has_posted = false;
  std::size_t first_line = 0;
};

std::vector<QuestionRecord> parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) return {};
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "event,question_id,time_hours")
    throw ParseError("missing or malformed header", line_no);

  std::vector<PendingRecord> pending;
  std::unordered_map<std::string, std::size_t> index;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos
                                            : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
      throw ParseError("expected 3 fields", line_no);
    const std::string event = line.substr(0, c1);
    const std::string qid = line.substr(c1 + 1, c2 - c1 - 1);
    const double t = parse_hours(line.substr(c2 + 1), line_no);
    if (qid.empty()) throw ParseError("empty question_id", line_no);

    auto [it, inserted] = index.emplace(qid, pending.size());
    if (inserted) {
      pending.push_back({});
      pending.back().record.question_id = qid;
      pending.back().first_line = line_no;
    }
    PendingRecord& p = pending[it->second];

    if (event == "posted") {
      if (p.has_posted)
        throw ParseError("duplicate 'posted' event for question '" + qid + "'",
                         line_no);
      p.has_posted = true;
      p.record.posted_at = t;
    } else if (event == "answer") {
      p.record.answer_times.push_back(t);
    } else if (event == "closed_by_asker" || event == "closed_other") {
      if (p.record.closed_at)
        throw ParseError("duplicate close event for question '" + qid + "'",
                         line_no);
      p.record.closed_at = t;
      p.record.closed_by_asker = (event == "closed_by_asker");
    } else {
      throw ParseError("unknown event '" + event + "'", line_no);
    }
  }

  std::vector<QuestionRecord> out;
  out.reserve(pending.size());
  for (PendingRecord& p : pending) {
    if (!p.has_posted)
      throw ParseError("question '" + p.record.question_id +
                           "' has no 'posted' event",
                       p.first_line);
    std::sort(p.record.answer_times.begin(), p.record.answer_times.end());
    validate_record(p.record);
    out.push_back(std::move(p.record));
  }
  return out;
}

std::vector<QuestionRecord> parse_jsonl(std::istream& in) {
  std::vector<QuestionRecord> out;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("malformed JSON object", line_no);
    QuestionRecord q;
    try {
      q.question_id = j.at("question_id").get<std::string>();
      q.posted_at = j.at("posted_at").get<double>();
      q.answer_times = j.at("answer_times").get<std::vector<double>>();
      if (!j.at("closed_at").is_null())
        q.closed_at = j.at("closed_at").get<double>();
      q.closed_by_asker = j.at("closed_by_asker").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad record object: ") + e.what(), line_no);
    }
    if (q.question_id.empty()) throw ParseError("empty question_id", line_no);
    if (!seen.emplace(q.question_id, line_no).second)
      throw ParseError("duplicate question_id '" + q.question_id + "'",
                       line_no);
    validate_record(q);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

void validate_record(const QuestionRecord& q) {
  const std::string who = "question '" + q.question_id + "': ";
  if (!std::isfinite(q.posted_at)) throw ParseError(who + "non-finite posted_at");
  for (std::size_t i = 0; i < q.answer_times.size(); ++i) {
    if (!std::isfinite(q.answer_times[i]))
      throw ParseError(who + "non-finite answer time");
    if (q.answer_times[i] < q.posted_at)
      throw ParseError(who + "answer time " + format_double(q.answer_times[i]) +
                       " precedes posted_at " + format_double(q.posted_at));
    if (i > 0 && q.answer_times[i] <= q.answer_times[i - 1])
      throw ParseError(who + "answer times not strictly ascending");
  }
  if (q.closed_at) {
    if (q.answer_times.empty())
      throw ParseError(who + "closed without any answer");
    if (*q.closed_at < q.answer_times.front())
      throw ParseError(who + "close time precedes first answer");
  } else if (q.closed_by_asker) {
    throw ParseError(who + "closed_by_asker set without a close time");
  }
}

std::vector<QuestionRecord> parse_event_log(std::istream& in,
                                            LogFormat format) {
  return format == LogFormat::Csv ? parse_csv(in) : parse_jsonl(in);
}

std::vector<QuestionRecord> parse_event_log(const std::string& text,
                                            LogFormat format) {
  std::istringstream in(text);
  return parse_event_log(in, format);
}

void serialize_event_log(const std::vector<QuestionRecord>& records,
                         std::ostream& out, LogFormat format) {
  if (format == LogFormat::Csv) {
    out << "event,question_id,time_hours\n";
    for (const QuestionRecord& q : records) {
      if (q.question_id.find_first_of(",\n") != std::string::npos)
        throw std::invalid_argument("question_id not representable in CSV: '" +
                                    q.question_id + "'");
      out << "posted," << q.question_id << ',' << format_double(q.posted_at)
          << '\n';
      for (double t : q.answer_times)
        out << "answer," << q.question_id << ',' << format_double(t) << '\n';
      if (q.closed_at)
        out << (q.closed_by_asker ? "closed_by_asker," : "closed_other,")
            << q.question_id << ',' << format_double(*q.closed_at) << '\n';
    }
  } else {
    for (const QuestionRecord& q : records) {
      nlohmann::json j;
      j["question_id"] = q.question_id;
      j["posted_at"] = q.posted_at;
      j["answer_times"] = q.answer_times;
      if (q.closed_at)
        j["closed_at"] = *q.closed_at;
      else
        j["closed_at"] = nullptr;
      j["closed_by_asker"] = q.closed_by_asker;
      out << j.dump() << '\n';
    }
  }
}

std::string serialize_event_log(const std::vector<QuestionRecord>& records,
                                LogFormat format) {
  std::ostringstream out;
  serialize_event_log(records, out, format);
  return out.str();
}

std::vector<QuestionRecord> filter_eligible(
    const std::vector<QuestionRecord>& records, double max_open_hours) {
  std::vector<QuestionRecord> out;
  for (const QuestionRecord& q : records) {
    if (!q.closed_by_asker || !q.closed_at) continue;
    if (*q.closed_at - q.posted_at < max_open_hours) out.push_back(q);
  }
  return out;
}

double HistogramReport::fraction_within(double t) const {
  if (durations.empty()) return 0.0;
  const auto n = std::count_if(durations.begin(), durations.end(),
                               [t](double d) { return d <= t; });
  return static_cast<double>(n) / static_cast<double>(durations.size());
}

HistogramReport open_duration_histogram(
    const std::vector<QuestionRecord>& records, double bin_width) {
  if (bin_width <= 0.0)
    throw std::invalid_argument("open_duration_histogram: bin_width must be > 0");
  HistogramReport report;
  report.bin_width = bin_width;
  for (const QuestionRecord& q : records) {
    if (!q.closed_at)
      throw std::invalid_argument("open_duration_histogram: question '" +
                                  q.question_id + "' is not closed");
    const double d = *q.closed_at - q.posted_at;
    report.durations.push_back(d);
    const auto bin = static_cast<std::size_t>(std::floor(d / bin_width));
    if (bin >= report.counts.size()) report.counts.resize(bin + 1, 0);
    ++report.counts[bin];
  }
  return report;
}

void write_histogram_csv(const HistogramReport& report, std::ostream& out) {
  out << "bin_start,bin_end,count,cumulative_fraction\n";
  const double total = static_cast<double>(report.total());
  std::size_t seen = 0;
  for (std::size_t k = 0; k < report.counts.size(); ++k) {
    seen += report.counts[k];
    out << format_double(static_cast<double>(k) * report.bin_width) << ','
        << format_double(static_cast<double>(k + 1) * report.bin_width) << ','
        << report.counts[k] << ','
        << format_double(total > 0.0 ? static_cast<double>(seen) / total : 0.0)
        << '\n';
  }
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace stopwait
