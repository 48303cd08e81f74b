#include "stopwait/stopwait.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stopwait/errors.hpp"
#include "stopwait/estimation.hpp"
#include "stopwait/expansion.hpp"
#include "stopwait/model_core.hpp"
#include "stopwait/records.hpp"
#include "stopwait/simulator.hpp"
#include "stopwait/threshold.hpp"

struct sw_dataset {
  std::vector<stopwait::QuestionRecord> records;
};

struct sw_observations {
  std::vector<stopwait::VisitObservation> rows;
};

struct sw_threshold {
  stopwait::ThresholdSolution solution;
};

namespace {

thread_local std::string g_last_error;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename F>
sw_status guarded(F&& f) {
  try {
    f();
    return SW_OK;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return SW_ERR_IO;
  } catch (const stopwait::ParseError& e) {
    g_last_error = e.what();
    return SW_ERR_PARSE;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return SW_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SW_ERR_NUMERIC;
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open '") + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const char* path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
  out << text;
  if (!out) throw IoError(std::string("write to '") + path + "' failed");
}

char* copy_to_buffer(const std::string& text, size_t* out_len) {
  char* buf = new char[text.size() + 1];
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  if (out_len) *out_len = text.size();
  return buf;
}

stopwait::LogFormat to_format(sw_format format) {
  require(format == SW_FORMAT_CSV || format == SW_FORMAT_JSONL,
          "unknown format");
  return format == SW_FORMAT_CSV ? stopwait::LogFormat::Csv
                                 : stopwait::LogFormat::Jsonl;
}

stopwait::SimScenario to_scenario(const sw_scenario& s) {
  stopwait::SimScenario scenario;
  scenario.n_questions = s.n_questions;
  require(s.arrival_kind == SW_ARRIVAL_POISSON ||
              s.arrival_kind == SW_ARRIVAL_LOGNORMAL,
          "unknown arrival kind");
  scenario.arrival.kind = s.arrival_kind == SW_ARRIVAL_POISSON
                              ? stopwait::ArrivalSpec::Kind::Poisson
                              : stopwait::ArrivalSpec::Kind::LognormalRenewal;
  scenario.arrival.rate = s.rate;
  scenario.arrival.meanlog = s.meanlog;
  scenario.arrival.sdlog = s.sdlog;
  scenario.horizon = s.horizon;
  scenario.visit_interval = s.visit_interval;
  require(s.agent_kind == SW_AGENT_LOGIT || s.agent_kind == SW_AGENT_GUMBEL,
          "unknown agent kind");
  scenario.agent.kind = s.agent_kind == SW_AGENT_LOGIT
                            ? stopwait::AgentSpec::Kind::Logit
                            : stopwait::AgentSpec::Kind::Gumbel;
  const stopwait::LogitCoefficients coefficients{s.alpha, s.beta1, s.beta2,
                                                 s.beta3};
  scenario.agent.logit = coefficients;
  const auto [utility, cost] =
      stopwait::split_intercept(coefficients, s.alpha_u, s.u0);
  scenario.agent.utility = utility;
  scenario.agent.cost = cost;
  scenario.seed = s.seed;
  scenario.check_at_arrivals = s.check_at_arrivals != 0;
  return scenario;
}

stopwait::LogitFit to_fit(const sw_logit_fit& f) {
  stopwait::LogitFit fit;
  fit.coefficients = {f.estimate[0], f.estimate[1], f.estimate[2],
                      f.estimate[3]};
  for (int i = 0; i < 4; ++i) fit.standard_errors[i] = f.std_error[i];
  fit.log_likelihood = f.log_likelihood;
  fit.n_observations = f.n_observations;
  fit.iterations = f.iterations;
  fit.converged = f.converged != 0;
  fit.diagnosis = f.diagnosis;
  return fit;
}

stopwait::StepDistribution to_step(int kind, double a, double b) {
  require(kind == SW_STEP_DETERMINISTIC || kind == SW_STEP_NORMAL,
          "unknown step kind");
  return kind == SW_STEP_DETERMINISTIC
             ? stopwait::StepDistribution::deterministic(a)
             : stopwait::StepDistribution::normal(a, b);
}

}  // namespace

extern "C" {

const char* sw_version(void) { return "0.1.0"; }

const char* sw_last_error(void) { return g_last_error.c_str(); }

sw_status sw_dataset_read(const char* path, sw_format format,
                          sw_dataset** out) {
  return guarded([&] {
    require(path && out, "null argument");
    const std::string text = read_file(path);
    auto* d = new sw_dataset{
        stopwait::parse_event_log(text, to_format(format))};
    *out = d;
  });
}

sw_status sw_dataset_parse(const char* text, size_t len, sw_format format,
                           sw_dataset** out) {
  return guarded([&] {
    require(text && out, "null argument");
    auto* d = new sw_dataset{stopwait::parse_event_log(
        std::string(text, len), to_format(format))};
    *out = d;
  });
}

sw_status sw_dataset_write(const sw_dataset* d, const char* path,
                           sw_format format) {
  return guarded([&] {
    require(d && path, "null argument");
    write_file(path,
               stopwait::serialize_event_log(d->records, to_format(format)));
  });
}

sw_status sw_dataset_serialize(const sw_dataset* d, sw_format format,
                               char** out_text, size_t* out_len) {
  return guarded([&] {
    require(d && out_text, "null argument");
    *out_text = copy_to_buffer(
        stopwait::serialize_event_log(d->records, to_format(format)), out_len);
  });
}

void sw_buffer_free(char* text) { delete[] text; }

size_t sw_dataset_size(const sw_dataset* d) {
  return d ? d->records.size() : 0;
}

sw_status sw_dataset_filter_eligible(const sw_dataset* d,
                                     double max_open_hours, sw_dataset** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new sw_dataset{
        stopwait::filter_eligible(d->records, max_open_hours)};
  });
}

sw_status sw_dataset_answer_counts(const sw_dataset* d, double* out,
                                   size_t capacity, size_t* out_n) {
  return guarded([&] {
    require(d && out_n, "null argument");
    *out_n = d->records.size();
    if (!out) return;
    require(capacity >= d->records.size(), "buffer too small");
    for (size_t i = 0; i < d->records.size(); ++i)
      out[i] = static_cast<double>(d->records[i].answer_times.size());
  });
}

sw_status sw_dataset_summaries(const sw_dataset* d, double* total_answers,
                               double* elapsed_time, size_t capacity,
                               size_t* out_n) {
  return guarded([&] {
    require(d && out_n, "null argument");
    *out_n = d->records.size();
    if (!total_answers && !elapsed_time) return;
    require(total_answers && elapsed_time, "null argument");
    require(capacity >= d->records.size(), "buffer too small");
    for (size_t i = 0; i < d->records.size(); ++i) {
      const stopwait::QuestionSummary s = stopwait::summarize(d->records[i]);
      total_answers[i] = static_cast<double>(s.total_answers);
      elapsed_time[i] = s.elapsed_time;
    }
  });
}

sw_status sw_dataset_histogram_write(const sw_dataset* d, double bin_width,
                                     const char* path) {
  return guarded([&] {
    require(d && path, "null argument");
    const stopwait::HistogramReport report =
        stopwait::open_duration_histogram(d->records, bin_width);
    std::ostringstream out;
    stopwait::write_histogram_csv(report, out);
    write_file(path, out.str());
  });
}

void sw_dataset_free(sw_dataset* d) { delete d; }

void sw_scenario_init(sw_scenario* s) {
  if (!s) return;
  *s = sw_scenario{};
  s->n_questions = 100;
  s->arrival_kind = SW_ARRIVAL_POISSON;
  s->rate = 0.2;
  s->meanlog = 1.5;
  s->sdlog = 0.5;
  s->horizon = 96.0;
  s->visit_interval = 1.0;
  s->agent_kind = SW_AGENT_LOGIT;
  s->alpha = -4.408;
  s->beta1 = 0.027;
  s->beta2 = 0.028;
  s->beta3 = 0.021;
  s->alpha_u = 1.0;
  s->u0 = 0.0;
  s->seed = 0;
  s->check_at_arrivals = 1;
}

sw_status sw_simulate(const sw_scenario* s, sw_dataset** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = new sw_dataset{stopwait::generate_dataset(to_scenario(*s))};
  });
}

sw_status sw_expand(const sw_dataset* d, double visit_interval,
                    int snap_close_to_grid, sw_observations** out) {
  return guarded([&] {
    require(d && out, "null argument");
    stopwait::ExpansionOptions opts;
    opts.visit_interval = visit_interval;
    opts.snap_close_to_grid = snap_close_to_grid != 0;
    *out = new sw_observations{stopwait::expand_corpus(d->records, opts)};
  });
}

sw_status sw_observations_read_csv(const char* path, sw_observations** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new sw_observations{
        stopwait::read_observations_csv(read_file(path))};
  });
}

sw_status sw_observations_parse_csv(const char* text, size_t len,
                                    sw_observations** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new sw_observations{
        stopwait::read_observations_csv(std::string(text, len))};
  });
}

sw_status sw_observations_write_csv(const sw_observations* o,
                                    const char* path) {
  return guarded([&] {
    require(o && path, "null argument");
    write_file(path, stopwait::write_observations_csv(o->rows));
  });
}

sw_status sw_observations_serialize_csv(const sw_observations* o,
                                        char** out_text, size_t* out_len) {
  return guarded([&] {
    require(o && out_text, "null argument");
    *out_text =
        copy_to_buffer(stopwait::write_observations_csv(o->rows), out_len);
  });
}

size_t sw_observations_size(const sw_observations* o) {
  return o ? o->rows.size() : 0;
}

void sw_observations_free(sw_observations* o) { delete o; }

sw_status sw_fit_logit(const sw_observations* o, sw_logit_fit* out) {
  return guarded([&] {
    require(o && out, "null argument");
    const stopwait::LogitFit fit = stopwait::fit_logit(o->rows);
    out->estimate[0] = fit.coefficients.alpha;
    out->estimate[1] = fit.coefficients.beta1;
    out->estimate[2] = fit.coefficients.beta2;
    out->estimate[3] = fit.coefficients.beta3;
    for (int i = 0; i < 4; ++i) out->std_error[i] = fit.standard_errors[i];
    out->log_likelihood = fit.log_likelihood;
    out->n_observations = fit.n_observations;
    out->iterations = fit.iterations;
    out->converged = fit.converged ? 1 : 0;
    std::snprintf(out->diagnosis, sizeof(out->diagnosis), "%s",
                  fit.diagnosis.c_str());
  });
}

sw_status sw_logit_report(const sw_logit_fit* fit, int csv_format,
                          char** out_text, size_t* out_len) {
  return guarded([&] {
    require(fit && out_text, "null argument");
    *out_text = copy_to_buffer(
        stopwait::format_logit_report(to_fit(*fit),
                                      csv_format
                                          ? stopwait::ReportFormat::Csv
                                          : stopwait::ReportFormat::KeyValue),
        out_len);
  });
}

sw_status sw_logit_report_write(const sw_logit_fit* fit, const char* path,
                                int csv_format) {
  return guarded([&] {
    require(fit && path, "null argument");
    write_file(path, stopwait::format_logit_report(
                         to_fit(*fit), csv_format
                                           ? stopwait::ReportFormat::Csv
                                           : stopwait::ReportFormat::KeyValue));
  });
}

sw_status sw_pearson(const double* x, const double* y, size_t n,
                     sw_correlation* out) {
  return guarded([&] {
    require(x && y && out, "null argument");
    std::vector<std::pair<double, double>> pairs(n);
    for (size_t i = 0; i < n; ++i) pairs[i] = {x[i], y[i]};
    const stopwait::CorrelationResult r = stopwait::pearson_correlation(pairs);
    out->r = r.r;
    out->ci_low = r.ci_low;
    out->ci_high = r.ci_high;
    out->n = r.n;
  });
}

sw_status sw_correlation_report(const sw_correlation* c, int csv_format,
                                char** out_text, size_t* out_len) {
  return guarded([&] {
    require(c && out_text, "null argument");
    stopwait::CorrelationResult r{c->r, c->ci_low, c->ci_high,
                                  static_cast<size_t>(c->n)};
    *out_text = copy_to_buffer(
        stopwait::format_correlation_report(
            r, csv_format ? stopwait::ReportFormat::Csv
                          : stopwait::ReportFormat::KeyValue),
        out_len);
  });
}

sw_status sw_invgauss_fit(const double* samples, size_t n, sw_invgauss* out) {
  return guarded([&] {
    require(samples && out, "null argument");
    const stopwait::InverseGaussianParams p =
        stopwait::fit_inverse_gaussian(std::vector<double>(samples, samples + n));
    out->mu = p.mu;
    out->lambda = p.lambda;
  });
}

sw_status sw_invgauss_pdf(const sw_invgauss* p, double x, double* out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = stopwait::invgauss_pdf({p->mu, p->lambda}, x);
  });
}

sw_status sw_invgauss_cdf(const sw_invgauss* p, double x, double* out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = stopwait::invgauss_cdf({p->mu, p->lambda}, x);
  });
}

sw_status sw_invgauss_ks(const double* samples, size_t n, const sw_invgauss* p,
                         double* out) {
  return guarded([&] {
    require(samples && p && out, "null argument");
    const stopwait::InverseGaussianParams params{p->mu, p->lambda};
    *out = stopwait::ks_distance(
        std::vector<double>(samples, samples + n),
        [params](double x) { return stopwait::invgauss_cdf(params, x); });
  });
}

sw_status sw_tail_slope(const double* samples, size_t n, double lo, double hi,
                        double* out) {
  return guarded([&] {
    require(samples && out, "null argument");
    *out = stopwait::tail_slope(std::vector<double>(samples, samples + n), lo,
                                hi);
  });
}

sw_status sw_logistic(double z, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = stopwait::logistic(z);
  });
}

sw_status sw_close_probability(double alpha, double beta1, double beta2,
                               double beta3, double n, double l, double w,
                               double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = stopwait::close_probability({alpha, beta1, beta2, beta3}, n, l, w);
  });
}

sw_status sw_utility(double alpha_u, double beta1, double u0, int64_t n,
                     double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = stopwait::utility({alpha_u, beta1, u0}, static_cast<int>(n));
  });
}

sw_status sw_marginal_benefit(double alpha_u, double beta1, int64_t n,
                              double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = stopwait::marginal_benefit({alpha_u, beta1, 0.0},
                                      static_cast<int>(n));
  });
}

sw_status sw_expected_wait_cost(double alpha_c, double beta2, double beta3,
                                double l, double w, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = stopwait::expected_wait_cost({alpha_c, beta2, beta3}, l, w);
  });
}

sw_status sw_myopic_decision(double alpha_u, double beta1, double u0,
                             double alpha_c, double beta2, double beta3,
                             int64_t n, double l, double w, int* out_close) {
  return guarded([&] {
    require(out_close, "null argument");
    const stopwait::Decision d =
        stopwait::myopic_decision({alpha_u, beta1, u0},
                                  {alpha_c, beta2, beta3},
                                  static_cast<int>(n), l, w);
    *out_close = d == stopwait::Decision::Close ? 1 : 0;
  });
}

sw_status sw_utility_peak(double alpha_u, double beta1, int64_t* out_peak,
                          int* out_has_peak) {
  return guarded([&] {
    require(out_peak && out_has_peak, "null argument");
    const auto peak = stopwait::utility_peak({alpha_u, beta1, 0.0});
    *out_has_peak = peak.has_value() ? 1 : 0;
    *out_peak = peak.value_or(0);
  });
}

sw_status sw_threshold_solve(int step_kind, double step_a, double step_b,
                             double delta, double grid_lo, double grid_hi,
                             size_t grid_count, double tol,
                             sw_threshold** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new sw_threshold{stopwait::solve_value_function(
        to_step(step_kind, step_a, step_b), delta,
        {grid_lo, grid_hi, grid_count}, tol)};
  });
}

double sw_threshold_x_star(const sw_threshold* t) {
  return t ? t->solution.x_star : 0.0;
}

uint64_t sw_threshold_iterations(const sw_threshold* t) {
  return t ? t->solution.iterations : 0;
}

double sw_threshold_residual(const sw_threshold* t) {
  return t ? t->solution.sup_norm_residual : 0.0;
}

sw_status sw_threshold_write_csv(const sw_threshold* t, const char* path) {
  return guarded([&] {
    require(t && path, "null argument");
    std::ostringstream out;
    stopwait::write_threshold_csv(t->solution, out);
    write_file(path, out.str());
  });
}

void sw_threshold_free(sw_threshold* t) { delete t; }

sw_status sw_brownian_passage(double distance, double drift, double sigma,
                              double dt, size_t n_paths, uint64_t seed,
                              double* out_times, int* out_censored) {
  return guarded([&] {
    require(out_times, "null argument");
    const stopwait::PassageEnsemble ensemble =
        stopwait::brownian_passage_ensemble(distance, drift, sigma, dt,
                                            n_paths, seed);
    for (size_t i = 0; i < n_paths; ++i) {
      out_times[i] = ensemble.times[i];
      if (out_censored) out_censored[i] = ensemble.censored[i] ? 1 : 0;
    }
  });
}

sw_status sw_brownian_passage_write_csv(double distance, double drift,
                                        double sigma, double dt,
                                        size_t n_paths, uint64_t seed,
                                        const char* path) {
  return guarded([&] {
    require(path, "null argument");
    const stopwait::PassageEnsemble ensemble =
        stopwait::brownian_passage_ensemble(distance, drift, sigma, dt,
                                            n_paths, seed);
    std::ostringstream out;
    stopwait::write_passage_csv(ensemble, out);
    write_file(path, out.str());
  });
}

}  // extern "C"
