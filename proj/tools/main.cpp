// Command-line front end for the stopwait shared library: simulates
// question corpora, expands them into visit observations, runs the logit,
// correlation, and inverse Gaussian fits, and solves the threshold model.
// All outputs are plot-ready CSV or flat key-value reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stopwait/stopwait.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Raised on any sw_status failure; carries the library's message.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(sw_status status) {
  if (status != SW_OK) throw DataError(sw_last_error());
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << text;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Every run with a file output gets a manifest echoing the effective
// parameters next to it.
void write_manifest(const std::string& output_path,
                    const std::string& subcommand, const nlohmann::json& params) {
  if (output_path == "-") return;
  nlohmann::json manifest;
  manifest["subcommand"] = subcommand;
  manifest["parameters"] = params;
  manifest["version"] = sw_version();
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  manifest["generated_at"] = stamp;
  std::ofstream out(output_path + ".manifest.json");
  if (!out) throw DataError("cannot write manifest for '" + output_path + "'");
  out << manifest.dump(2) << '\n';
}

sw_format parse_format(const std::string& name) {
  if (name == "csv") return SW_FORMAT_CSV;
  if (name == "jsonl") return SW_FORMAT_JSONL;
  throw CLI::ValidationError("--format must be csv or jsonl");
}

struct Deleter {
  void operator()(sw_dataset* d) const { sw_dataset_free(d); }
  void operator()(sw_observations* o) const { sw_observations_free(o); }
  void operator()(sw_threshold* t) const { sw_threshold_free(t); }
  void operator()(char* buf) const { sw_buffer_free(buf); }
};
template <typename T>
using Handle = std::unique_ptr<T, Deleter>;

Handle<sw_dataset> load_dataset(const std::string& path, sw_format format) {
  const std::string text = read_input(path);
  sw_dataset* d = nullptr;
  check(sw_dataset_parse(text.data(), text.size(), format, &d));
  return Handle<sw_dataset>(d);
}

Handle<sw_dataset> filter_eligible(const sw_dataset* d, double max_open) {
  sw_dataset* filtered = nullptr;
  check(sw_dataset_filter_eligible(d, max_open, &filtered));
  return Handle<sw_dataset>(filtered);
}

std::string serialize_dataset(const sw_dataset* d, sw_format format) {
  char* text = nullptr;
  size_t len = 0;
  check(sw_dataset_serialize(d, format, &text, &len));
  Handle<char> owner(text);
  return std::string(text, len);
}

std::uint64_t seed_or_env(std::uint64_t seed, bool seed_given) {
  if (seed_given) return seed;
  if (const char* env = std::getenv("STOPWAIT_SEED"))
    return std::strtoull(env, nullptr, 10);
  return seed;
}

bool parse_range(const std::string& s, double& lo, double& hi) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return false;
  try {
    lo = std::stod(s.substr(0, colon));
    hi = std::stod(s.substr(colon + 1));
  } catch (...) {
    return false;
  }
  return lo < hi;
}

bool parse_grid(const std::string& s, double& lo, double& hi, size_t& count) {
  const auto c1 = s.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos
                                          : s.find(':', c1 + 1);
  if (c2 == std::string::npos) return false;
  try {
    lo = std::stod(s.substr(0, c1));
    hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    count = std::stoul(s.substr(c2 + 1));
  } catch (...) {
    return false;
  }
  return lo < hi && count >= 100;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  sw_scenario scenario{};
  std::string arrival = "poisson";
  std::string agent = "logit";
  std::string output = "-";
  std::string format = "csv";
  bool seed_given = false;
  bool check_arrivals = true;
};

void add_simulate(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<SimulateArgs>();
  sw_scenario_init(&args->scenario);
  CLI::App* cmd = app.add_subcommand("simulate",
                                     "Generate a synthetic question corpus");
  cmd->add_option("--questions", args->scenario.n_questions,
                  "Number of questions");
  cmd->add_option("--rate", args->scenario.rate,
                  "Poisson answer arrival rate per hour");
  cmd->add_option("--arrival", args->arrival, "Arrival process")
      ->check(CLI::IsMember({"poisson", "lognormal"}));
  cmd->add_option("--meanlog", args->scenario.meanlog,
                  "Lognormal renewal gap log-mean");
  cmd->add_option("--sdlog", args->scenario.sdlog,
                  "Lognormal renewal gap log-sd");
  cmd->add_option("--horizon", args->scenario.horizon, "Open period in hours");
  cmd->add_option("--delta", args->scenario.visit_interval,
                  "Visit interval in hours");
  cmd->add_option("--agent", args->agent, "Asker agent")
      ->check(CLI::IsMember({"logit", "gumbel"}));
  cmd->add_option("--alpha", args->scenario.alpha, "Index intercept");
  cmd->add_option("--beta1", args->scenario.beta1, "Index weight on n");
  cmd->add_option("--beta2", args->scenario.beta2, "Index weight on l");
  cmd->add_option("--beta3", args->scenario.beta3, "Index weight on w");
  cmd->add_option("--alpha-u", args->scenario.alpha_u,
                  "Marginal benefit at n=0 (gumbel agent)");
  cmd->add_option("--u0", args->scenario.u0, "Utility of zero answers");
  cmd->add_option("--seed", args->scenario.seed, "RNG seed")
      ->trigger_on_parse()
      ->each([args](const std::string&) { args->seed_given = true; });
  cmd->add_flag("--check-at-arrivals,!--no-check-at-arrivals",
                args->check_arrivals,
                "Also check at each answer arrival instant");
  cmd->add_option("--output", args->output, "Event log path ('-' for stdout)");
  cmd->add_option("--format", args->format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  cmd->callback([args, &exit_code] {
    args->scenario.seed = seed_or_env(args->scenario.seed, args->seed_given);
    args->scenario.arrival_kind = args->arrival == "poisson"
                                      ? SW_ARRIVAL_POISSON
                                      : SW_ARRIVAL_LOGNORMAL;
    args->scenario.agent_kind =
        args->agent == "logit" ? SW_AGENT_LOGIT : SW_AGENT_GUMBEL;
    args->scenario.check_at_arrivals = args->check_arrivals ? 1 : 0;
    sw_dataset* d = nullptr;
    check(sw_simulate(&args->scenario, &d));
    Handle<sw_dataset> dataset(d);
    write_output(args->output,
                 serialize_dataset(d, parse_format(args->format)));
    write_manifest(
        args->output, "simulate",
        {{"questions", args->scenario.n_questions},
         {"arrival", args->arrival},
         {"rate", args->scenario.rate},
         {"meanlog", args->scenario.meanlog},
         {"sdlog", args->scenario.sdlog},
         {"horizon", args->scenario.horizon},
         {"delta", args->scenario.visit_interval},
         {"agent", args->agent},
         {"alpha", args->scenario.alpha},
         {"beta1", args->scenario.beta1},
         {"beta2", args->scenario.beta2},
         {"beta3", args->scenario.beta3},
         {"alpha_u", args->scenario.alpha_u},
         {"u0", args->scenario.u0},
         {"seed", args->scenario.seed},
         {"check_at_arrivals", args->scenario.check_at_arrivals != 0},
         {"format", args->format}});
    exit_code = 0;
  });
}

// ------------------------------------------------------------------ expand

struct ExpandArgs {
  std::string input = "-";
  std::string format = "csv";
  std::string output = "-";
  double delta = 1.0;
  double max_open = 100.0;
  bool snap = false;
};

void add_expand(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<ExpandArgs>();
  CLI::App* cmd = app.add_subcommand(
      "expand", "Expand an event log into visit observations");
  cmd->add_option("--input", args->input, "Event log path ('-' for stdin)");
  cmd->add_option("--format", args->format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--delta", args->delta, "Visit interval in hours");
  cmd->add_option("--max-open", args->max_open,
                  "Eligibility cutoff in hours (strict)");
  cmd->add_flag("--snap", args->snap,
                "Snap closing observations to the visit grid");
  cmd->add_option("--output", args->output,
                  "Observations CSV path ('-' for stdout)");

  cmd->callback([args, &exit_code] {
    Handle<sw_dataset> dataset =
        load_dataset(args->input, parse_format(args->format));
    Handle<sw_dataset> eligible =
        filter_eligible(dataset.get(), args->max_open);
    sw_observations* o = nullptr;
    check(sw_expand(eligible.get(), args->delta, args->snap ? 1 : 0, &o));
    Handle<sw_observations> obs(o);
    char* text = nullptr;
    size_t len = 0;
    check(sw_observations_serialize_csv(o, &text, &len));
    Handle<char> owner(text);
    write_output(args->output, std::string(text, len));
    write_manifest(args->output, "expand",
                   {{"input", args->input},
                    {"format", args->format},
                    {"delta", args->delta},
                    {"max_open", args->max_open},
                    {"snap", args->snap}});
    exit_code = 0;
  });
}

// --------------------------------------------------------------- fit-logit

struct FitLogitArgs {
  std::string input = "-";
  std::string output = "-";
  std::string coef_csv;
};

void add_fit_logit(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<FitLogitArgs>();
  CLI::App* cmd = app.add_subcommand(
      "fit-logit", "Fit the close-probability logit to observations");
  cmd->add_option("--input", args->input,
                  "Observations CSV path ('-' for stdin)");
  cmd->add_option("--output", args->output,
                  "Key-value report path ('-' for stdout)");
  cmd->add_option("--coef-csv", args->coef_csv,
                  "Optional CSV coefficient table path");

  cmd->callback([args, &exit_code] {
    const std::string text = read_input(args->input);
    sw_observations* o = nullptr;
    check(sw_observations_parse_csv(text.data(), text.size(), &o));
    Handle<sw_observations> obs(o);
    sw_logit_fit fit{};
    check(sw_fit_logit(o, &fit));
    char* report = nullptr;
    check(sw_logit_report(&fit, 0, &report, nullptr));
    Handle<char> owner(report);
    write_output(args->output, report);
    if (!args->coef_csv.empty())
      check(sw_logit_report_write(&fit, args->coef_csv.c_str(), 1));
    write_manifest(args->output, "fit-logit",
                   {{"input", args->input}, {"coef_csv", args->coef_csv}});
    exit_code = 0;
  });
}

// --------------------------------------------------------------- correlate

struct CorrelateArgs {
  std::string input = "-";
  std::string format = "csv";
  std::string output = "-";
  double max_open = 100.0;
};

void add_correlate(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<CorrelateArgs>();
  CLI::App* cmd = app.add_subcommand(
      "correlate",
      "Correlation between total answers and post-last-answer wait");
  cmd->add_option("--input", args->input, "Event log path ('-' for stdin)");
  cmd->add_option("--format", args->format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--max-open", args->max_open, "Eligibility cutoff in hours");
  cmd->add_option("--output", args->output,
                  "Key-value report path ('-' for stdout)");

  cmd->callback([args, &exit_code] {
    Handle<sw_dataset> dataset =
        load_dataset(args->input, parse_format(args->format));
    Handle<sw_dataset> eligible =
        filter_eligible(dataset.get(), args->max_open);
    size_t n = 0;
    check(sw_dataset_summaries(eligible.get(), nullptr, nullptr, 0, &n));
    std::vector<double> totals(n), elapsed(n);
    check(sw_dataset_summaries(eligible.get(), totals.data(), elapsed.data(),
                               n, &n));
    sw_correlation corr{};
    check(sw_pearson(totals.data(), elapsed.data(), n, &corr));
    char* report = nullptr;
    check(sw_correlation_report(&corr, 0, &report, nullptr));
    Handle<char> owner(report);
    write_output(args->output, report);
    write_manifest(args->output, "correlate",
                   {{"input", args->input},
                    {"format", args->format},
                    {"max_open", args->max_open}});
    exit_code = 0;
  });
}

// ------------------------------------------------------------ fit-invgauss

struct FitInvgaussArgs {
  std::string input = "-";
  std::string format = "csv";
  std::string output = "-";
  std::string tail = "5:50";
  std::string cdf_csv;
  std::string loglog_csv;
  double max_open = 100.0;
};

void add_fit_invgauss(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<FitInvgaussArgs>();
  CLI::App* cmd = app.add_subcommand(
      "fit-invgauss",
      "Inverse Gaussian fit of the answer-count distribution");
  cmd->add_option("--input", args->input, "Event log path ('-' for stdin)");
  cmd->add_option("--format", args->format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--max-open", args->max_open, "Eligibility cutoff in hours");
  cmd->add_option("--tail", args->tail, "Tail range LO:HI for the slope fit");
  cmd->add_option("--cdf-csv", args->cdf_csv,
                  "Optional empirical-vs-fitted CDF data path");
  cmd->add_option("--loglog-csv", args->loglog_csv,
                  "Optional log-log frequency data path");
  cmd->add_option("--output", args->output,
                  "Key-value report path ('-' for stdout)");

  cmd->callback([args, &exit_code] {
    Handle<sw_dataset> dataset =
        load_dataset(args->input, parse_format(args->format));
    Handle<sw_dataset> eligible =
        filter_eligible(dataset.get(), args->max_open);
    size_t n = 0;
    check(sw_dataset_answer_counts(eligible.get(), nullptr, 0, &n));
    std::vector<double> counts(n);
    check(sw_dataset_answer_counts(eligible.get(), counts.data(), n, &n));
    sw_invgauss params{};
    check(sw_invgauss_fit(counts.data(), n, &params));
    double ks = 0.0;
    check(sw_invgauss_ks(counts.data(), n, &params, &ks));

    double lo = 0.0, hi = 0.0;
    if (!parse_range(args->tail, lo, hi))
      throw CLI::ValidationError("--tail must be LO:HI with LO < HI");
    double slope = 0.0;
    std::string slope_error;
    const sw_status slope_status =
        sw_tail_slope(counts.data(), n, lo, hi, &slope);
    if (slope_status != SW_OK) slope_error = sw_last_error();

    std::ostringstream report;
    report << "mu=" << format_double(params.mu) << '\n'
           << "lambda=" << format_double(params.lambda) << '\n'
           << "variance=" << format_double(params.mu * params.mu * params.mu /
                                           params.lambda)
           << '\n'
           << "ks_distance=" << format_double(ks) << '\n';
    if (slope_error.empty())
      report << "tail_slope=" << format_double(slope) << '\n';
    else
      report << "tail_slope_error=" << slope_error << '\n';
    report << "n=" << n << '\n';
    write_output(args->output, report.str());

    if (!args->cdf_csv.empty()) {
      std::vector<double> sorted(counts);
      std::sort(sorted.begin(), sorted.end());
      std::ostringstream out;
      out << "x,empirical_cdf,model_cdf\n";
      for (size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        double model = 0.0;
        check(sw_invgauss_cdf(&params, sorted[i], &model));
        out << format_double(sorted[i]) << ','
            << format_double(static_cast<double>(i + 1) /
                             static_cast<double>(sorted.size()))
            << ',' << format_double(model) << '\n';
      }
      write_output(args->cdf_csv, out.str());
    }
    if (!args->loglog_csv.empty()) {
      std::map<long long, size_t> freq;
      for (double c : counts) ++freq[std::llround(c)];
      std::ostringstream out;
      out << "value,count,log_value,log_count\n";
      for (const auto& [value, count] : freq) {
        if (value <= 0) continue;
        out << value << ',' << count << ','
            << format_double(std::log(static_cast<double>(value))) << ','
            << format_double(std::log(static_cast<double>(count))) << '\n';
      }
      write_output(args->loglog_csv, out.str());
    }
    write_manifest(args->output, "fit-invgauss",
                   {{"input", args->input},
                    {"format", args->format},
                    {"max_open", args->max_open},
                    {"tail", args->tail}});
    exit_code = 0;
  });
}

// --------------------------------------------------------------- threshold

struct ThresholdArgs {
  double discount = 0.95;
  double step_mean = -0.4;
  double step_sd = 1.0;
  double step_det = 0.0;
  bool det_given = false;
  std::string grid = "-5:20:1001";
  double tol = 1e-9;
  std::string output;
};

void add_threshold(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<ThresholdArgs>();
  CLI::App* cmd = app.add_subcommand(
      "threshold", "Solve the answer-value stopping threshold");
  cmd->add_option("--discount", args->discount, "Discount factor in (0,1)");
  cmd->add_option("--step-mean", args->step_mean, "Normal step mean");
  cmd->add_option("--step-sd", args->step_sd, "Normal step sd");
  cmd->add_option("--step-det", args->step_det,
                  "Deterministic (signed) step; overrides the normal step")
      ->trigger_on_parse()
      ->each([args](const std::string&) { args->det_given = true; });
  cmd->add_option("--grid", args->grid, "Value grid LO:HI:N");
  cmd->add_option("--tol", args->tol, "Sup-norm convergence tolerance");
  cmd->add_option("--output", args->output, "Solution CSV path")->required();

  cmd->callback([args, &exit_code] {
    double lo = 0.0, hi = 0.0;
    size_t count = 0;
    if (!parse_grid(args->grid, lo, hi, count))
      throw CLI::ValidationError("--grid must be LO:HI:N with N >= 100");
    sw_threshold* t = nullptr;
    if (args->det_given)
      check(sw_threshold_solve(SW_STEP_DETERMINISTIC, args->step_det, 0.0,
                               args->discount, lo, hi, count, args->tol, &t));
    else
      check(sw_threshold_solve(SW_STEP_NORMAL, args->step_mean, args->step_sd,
                               args->discount, lo, hi, count, args->tol, &t));
    Handle<sw_threshold> solution(t);
    check(sw_threshold_write_csv(t, args->output.c_str()));
    write_manifest(args->output, "threshold",
                   {{"discount", args->discount},
                    {"step_mean", args->step_mean},
                    {"step_sd", args->step_sd},
                    {"step_det", args->step_det},
                    {"deterministic", args->det_given},
                    {"grid", args->grid},
                    {"tol", args->tol}});
    exit_code = 0;
  });
}

// ----------------------------------------------------------------- passage

struct PassageArgs {
  double distance = 2.408319;
  double drift = -0.394807;
  double sigma = 1.0;
  double dt = 1e-3;
  size_t paths = 1000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string output;
};

void add_passage(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<PassageArgs>();
  CLI::App* cmd = app.add_subcommand(
      "passage", "Brownian first-passage ensemble");
  cmd->add_option("--distance", args->distance, "Start above the barrier");
  cmd->add_option("--drift", args->drift, "Drift per hour (negative)");
  cmd->add_option("--sigma", args->sigma, "Diffusion coefficient");
  cmd->add_option("--dt", args->dt, "Euler step");
  cmd->add_option("--paths", args->paths, "Number of paths");
  cmd->add_option("--seed", args->seed, "RNG seed")
      ->trigger_on_parse()
      ->each([args](const std::string&) { args->seed_given = true; });
  cmd->add_option("--output", args->output, "Passage-time CSV path")
      ->required();

  cmd->callback([args, &exit_code] {
    const std::uint64_t seed = seed_or_env(args->seed, args->seed_given);
    check(sw_brownian_passage_write_csv(args->distance, args->drift,
                                        args->sigma, args->dt, args->paths,
                                        seed, args->output.c_str()));
    write_manifest(args->output, "passage",
                   {{"distance", args->distance},
                    {"drift", args->drift},
                    {"sigma", args->sigma},
                    {"dt", args->dt},
                    {"paths", args->paths},
                    {"seed", seed}});
    exit_code = 0;
  });
}

// ------------------------------------------------------------------ report

struct ReportArgs {
  bool utility = false;
  std::string input;
  std::string format = "csv";
  std::string output = "-";
  double bin_width = 1.0;
  double max_open = 100.0;
  double beta1 = 0.027;
  int n_max = 50;
};

void add_report(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<ReportArgs>();
  CLI::App* cmd = app.add_subcommand(
      "report", "Open-duration histogram or utility curve data");
  cmd->add_flag("--utility", args->utility,
                "Emit utility curves for alpha_u in {1,2,3,4}");
  cmd->add_option("--input", args->input,
                  "Event log path for the histogram ('-' for stdin)");
  cmd->add_option("--format", args->format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--bin-width", args->bin_width, "Histogram bin width");
  cmd->add_option("--max-open", args->max_open, "Eligibility cutoff in hours");
  cmd->add_option("--beta1", args->beta1, "Utility curvature");
  cmd->add_option("--n-max", args->n_max, "Largest n in the utility curves");
  cmd->add_option("--output", args->output, "Output CSV path");

  cmd->callback([args, &exit_code] {
    if (args->utility) {
      std::ostringstream out;
      out << "alpha_u,n,utility\n";
      for (double alpha_u : {1.0, 2.0, 3.0, 4.0}) {
        for (int n = 0; n <= args->n_max; ++n) {
          double u = 0.0;
          check(sw_utility(alpha_u, args->beta1, 0.0, n, &u));
          out << format_double(alpha_u) << ',' << n << ',' << format_double(u)
              << '\n';
        }
      }
      write_output(args->output, out.str());
      write_manifest(args->output, "report",
                     {{"mode", "utility"},
                      {"beta1", args->beta1},
                      {"n_max", args->n_max}});
    } else {
      if (args->input.empty())
        throw CLI::ValidationError("report needs --input or --utility");
      Handle<sw_dataset> dataset =
          load_dataset(args->input, parse_format(args->format));
      Handle<sw_dataset> eligible =
          filter_eligible(dataset.get(), args->max_open);
      if (args->output == "-")
        throw CLI::ValidationError("histogram report needs a file --output");
      check(sw_dataset_histogram_write(eligible.get(), args->bin_width,
                                       args->output.c_str()));
      write_manifest(args->output, "report",
                     {{"mode", "histogram"},
                      {"input", args->input},
                      {"format", args->format},
                      {"bin_width", args->bin_width},
                      {"max_open", args->max_open}});
    }
    exit_code = 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stopwait: stopping behavior of question askers"};
  app.require_subcommand(1);
  int exit_code = 0;

  add_simulate(app, exit_code);
  add_expand(app, exit_code);
  add_fit_logit(app, exit_code);
  add_correlate(app, exit_code);
  add_fit_invgauss(app, exit_code);
  add_threshold(app, exit_code);
  add_passage(app, exit_code);
  add_report(app, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return exit_code;
}
