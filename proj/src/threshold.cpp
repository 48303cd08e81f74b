#include "stopwait/threshold.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "stopwait/errors.hpp"
#include "stopwait/records.hpp"

namespace stopwait {

StepDistribution StepDistribution::deterministic(double step) {
  StepDistribution d;
  d.kind_ = Kind::Deterministic;
  d.value_ = step;
  return d;
}

StepDistribution StepDistribution::normal(double mean, double sd) {
  if (!(sd > 0.0))
    throw std::invalid_argument("StepDistribution: sd must be > 0");
  StepDistribution d;
  d.kind_ = Kind::Normal;
  d.mean_ = mean;
  d.sd_ = sd;
  return d;
}

StepDistribution StepDistribution::discrete(
    std::vector<std::pair<double, double>> points) {
  if (points.empty())
    throw std::invalid_argument("StepDistribution: empty discrete support");
  double total = 0.0;
  for (const auto& [value, prob] : points) {
    if (prob < 0.0)
      throw std::invalid_argument("StepDistribution: negative probability");
    total += prob;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument(
        "StepDistribution: probabilities must sum to 1");
  StepDistribution d;
  d.kind_ = Kind::Discrete;
  d.points_ = std::move(points);
  return d;
}

double StepDistribution::mean() const {
  switch (kind_) {
    case Kind::Deterministic:
      return value_;
    case Kind::Normal:
      return mean_;
    case Kind::Discrete: {
      double m = 0.0;
      for (const auto& [value, prob] : points_) m += value * prob;
      return m;
    }
  }
  return 0.0;
}

double StepDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::Deterministic:
      return value_;
    case Kind::Normal:
      return rng.normal(mean_, sd_);
    case Kind::Discrete: {
      const double u = rng.uniform();
      double acc = 0.0;
      for (const auto& [value, prob] : points_) {
        acc += prob;
        if (u < acc) return value;
      }
      return points_.back().first;
    }
  }
  return 0.0;
}

namespace {

// Nodes and weights for integrating against exp(-t^2) (Numerical Recipes
// style Newton iteration on the Hermite recurrence).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussHermite(int n) : nodes(n), weights(n) {
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
      if (i == 0) {
        z = std::sqrt(2.0 * n + 1.0) -
            1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
      } else if (i == 1) {
        z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
      } else if (i == 2) {
        z = 1.86 * z - 0.86 * nodes[0];
      } else if (i == 3) {
        z = 1.91 * z - 0.91 * nodes[1];
      } else {
        z = 2.0 * z - nodes[i - 2];
      }
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = pim4;
        double p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(2.0 / j) * p2 -
               std::sqrt(static_cast<double>(j - 1) / j) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        const double dz = p1 / pp;
        z -= dz;
        if (std::fabs(dz) < 1e-14) break;
      }
      nodes[i] = z;
      nodes[n - 1 - i] = -z;
      weights[i] = 2.0 / (pp * pp);
      weights[n - 1 - i] = weights[i];
    }
  }
};

constexpr int kQuadratureOrder = 31;

class ValueFunction {
 public:
  ValueFunction(const std::vector<double>& grid, double delta, double step_mean)
      : grid_(grid),
        lo_(grid.front()),
        hi_(grid.back()),
        spacing_((grid.back() - grid.front()) /
                 static_cast<double>(grid.size() - 1)),
        slope_(1.0 / (1.0 - delta)),
        intercept_(delta * step_mean / ((1.0 - delta) * (1.0 - delta))) {}

  double eval(const std::vector<double>& values, double x) const {
    if (x <= lo_) return x;                          // stop region
    if (x >= hi_) return slope_ * x + intercept_;    // always-continue asymptote
    const double pos = (x - lo_) / spacing_;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return values[i] + frac * (values[i + 1] - values[i]);
  }

 private:
  const std::vector<double>& grid_;
  double lo_, hi_, spacing_, slope_, intercept_;
};

}  // namespace

ThresholdSolution solve_value_function(const StepDistribution& step,
                                       double delta, const GridSpec& grid,
                                       double tol) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("solve_value_function: delta must be in (0,1)");
  if (!(grid.hi > grid.lo))
    throw std::invalid_argument("solve_value_function: grid hi must exceed lo");
  if (grid.count < 100)
    throw std::invalid_argument("solve_value_function: grid count must be >= 100");
  if (!(tol > 0.0))
    throw std::invalid_argument("solve_value_function: tol must be > 0");

  ThresholdSolution sol;
  sol.delta = delta;
  sol.grid.resize(grid.count);
  const double spacing =
      (grid.hi - grid.lo) / static_cast<double>(grid.count - 1);
  for (std::size_t i = 0; i < grid.count; ++i)
    sol.grid[i] = grid.lo + static_cast<double>(i) * spacing;

  const ValueFunction vf(sol.grid, delta, step.mean());

  // Offsets and weights of the expectation E[V(x + Z)].
  std::vector<std::pair<double, double>> mixture;  // (offset, weight)
  switch (step.kind()) {
    case StepDistribution::Kind::Deterministic:
      mixture.emplace_back(step.deterministic_step(), 1.0);
      break;
    case StepDistribution::Kind::Discrete:
      for (const auto& [value, prob] : step.points())
        mixture.emplace_back(value, prob);
      break;
    case StepDistribution::Kind::Normal: {
      static const GaussHermite gh(kQuadratureOrder);
      const double inv_sqrt_pi = 1.0 / std::sqrt(Rng::pi());
      for (int i = 0; i < kQuadratureOrder; ++i)
        mixture.emplace_back(
            step.normal_mean() + std::sqrt(2.0) * step.normal_sd() * gh.nodes[i],
            gh.weights[i] * inv_sqrt_pi);
      break;
    }
  }

  auto expectation = [&](const std::vector<double>& values, double x) {
    double e = 0.0;
    for (const auto& [offset, weight] : mixture)
      e += weight * vf.eval(values, x + offset);
    return e;
  };

  sol.values = sol.grid;  // V_0(x) = x
  std::vector<double> next(grid.count);
  constexpr std::size_t kIterationCap = 10000;
  for (sol.iterations = 1; sol.iterations <= kIterationCap; ++sol.iterations) {
    double residual = 0.0;
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double cont = delta * expectation(sol.values, sol.grid[i]);
      next[i] = sol.grid[i] + std::max(0.0, cont);
      residual = std::max(residual, std::fabs(next[i] - sol.values[i]));
    }
    sol.values.swap(next);
    sol.sup_norm_residual = residual;
    sol.residual_trace.push_back(residual);
    if (residual < tol) break;
  }
  if (sol.sup_norm_residual >= tol)
    throw NumericError("solve_value_function: no convergence within 10000 iterations");

  sol.continuation.resize(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i)
    sol.continuation[i] = delta * expectation(sol.values, sol.grid[i]);

  sol.x_star = find_threshold(sol);
  return sol;
}

double find_threshold(const ThresholdSolution& sol) {
  const auto& c = sol.continuation;
  if (c.size() < 2)
    throw std::invalid_argument("find_threshold: empty solution");
  std::size_t crossing = 0;
  std::size_t n_crossings = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const bool neg_i = c[i] < 0.0;
    const bool neg_j = c[i + 1] < 0.0;
    if (neg_i != neg_j) {
      crossing = i;
      ++n_crossings;
    }
  }
  if (n_crossings == 0) {
    if (c.front() >= 0.0)
      throw NumericError("find_threshold: threshold below grid");
    throw NumericError("find_threshold: threshold above grid");
  }
  if (n_crossings > 1)
    throw NumericError("find_threshold: multiple sign changes in continuation");
  const double c0 = c[crossing];
  const double c1 = c[crossing + 1];
  const double x0 = sol.grid[crossing];
  const double x1 = sol.grid[crossing + 1];
  if (c1 == c0) return 0.5 * (x0 + x1);
  return x0 - c0 * (x1 - x0) / (c1 - c0);
}

PassageSample simulate_first_passage(double start, double threshold,
                                     const StepDistribution& step,
                                     std::uint64_t seed,
                                     std::size_t max_steps) {
  if (!(start > threshold))
    throw std::invalid_argument("simulate_first_passage: start must exceed threshold");
  if (max_steps < 1)
    throw std::invalid_argument("simulate_first_passage: max_steps must be >= 1");
  Rng rng(seed);
  double x = start;
  for (std::size_t n = 1; n <= max_steps; ++n) {
    x += step.sample(rng);
    if (x <= threshold) return {n, x, false};
  }
  return {max_steps, x, true};
}

PassageEnsemble brownian_passage_ensemble(double distance, double drift,
                                          double sigma, double dt,
                                          std::size_t n_paths,
                                          std::uint64_t seed, double max_time) {
  if (!(distance > 0.0))
    throw std::invalid_argument("brownian_passage_ensemble: distance must be > 0");
  if (!(drift < 0.0))
    throw std::invalid_argument(
        "brownian_passage_ensemble: drift must be negative");
  if (!(sigma > 0.0))
    throw std::invalid_argument("brownian_passage_ensemble: sigma must be > 0");
  if (!(dt > 0.0))
    throw std::invalid_argument("brownian_passage_ensemble: dt must be > 0");
  if (n_paths < 1)
    throw std::invalid_argument("brownian_passage_ensemble: n_paths must be >= 1");

  PassageEnsemble ensemble;
  ensemble.times.resize(n_paths);
  ensemble.censored.resize(n_paths);
  const double mean = drift * dt;
  const double sd = sigma * std::sqrt(dt);
  const auto max_steps = static_cast<std::size_t>(std::ceil(max_time / dt));
  for (std::size_t path = 0; path < n_paths; ++path) {
    Rng rng(seed, path);
    double x = distance;
    std::size_t n = 0;
    while (n < max_steps) {
      x += rng.normal(mean, sd);
      ++n;
      if (x <= 0.0) break;
    }
    ensemble.times[path] = static_cast<double>(n) * dt;
    ensemble.censored[path] = x > 0.0;
  }
  return ensemble;
}

void write_threshold_csv(const ThresholdSolution& sol, std::ostream& out) {
  out << "# x_star=" << format_double(sol.x_star)
      << ",delta=" << format_double(sol.delta)
      << ",iterations=" << sol.iterations << '\n';
  out << "x,V,continuation\n";
  for (std::size_t i = 0; i < sol.grid.size(); ++i)
    out << format_double(sol.grid[i]) << ',' << format_double(sol.values[i])
        << ',' << format_double(sol.continuation[i]) << '\n';
}

void write_passage_csv(const PassageEnsemble& ensemble, std::ostream& out) {
  out << "path_index,passage_time,censored\n";
  for (std::size_t i = 0; i < ensemble.times.size(); ++i)
    out << i << ',' << format_double(ensemble.times[i]) << ','
        << (ensemble.censored[i] ? '1' : '0') << '\n';
}

}  // namespace stopwait
