#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stopwait/rng.hpp"

namespace stopwait {

// Distribution of the per-answer value increment Z.
class StepDistribution {
 public:
  enum class Kind { Deterministic, Normal, Discrete };

  static StepDistribution deterministic(double step);
  static StepDistribution normal(double mean, double sd);
  // Probabilities must sum to 1 within 1e-12.
  static StepDistribution discrete(
      std::vector<std::pair<double, double>> points);

  Kind kind() const { return kind_; }
  double mean() const;
  double sample(Rng& rng) const;

  double deterministic_step() const { return value_; }
  double normal_mean() const { return mean_; }
  double normal_sd() const { return sd_; }
  const std::vector<std::pair<double, double>>& points() const {
    return points_;
  }

 private:
  StepDistribution() = default;
  Kind kind_ = Kind::Deterministic;
  double value_ = 0.0;
  double mean_ = 0.0;
  double sd_ = 1.0;
  std::vector<std::pair<double, double>> points_;
};

struct GridSpec {
  double lo;
  double hi;
  std::size_t count;  // >= 100
};

struct ThresholdSolution {
  double x_star = 0.0;
  double delta = 0.0;
  std::vector<double> grid;
  std::vector<double> values;        // V(x) per grid point
  std::vector<double> continuation;  // delta * E[V(x + Z)] per grid point
  std::size_t iterations = 0;
  double sup_norm_residual = 0.0;
  std::vector<double> residual_trace;  // sup-norm change per sweep
};

// Fixed-point iteration of V(x) = x + max{0, delta * E[V(x+Z)]} on the grid.
// Linear interpolation inside; V(x) = x below the lower edge; affine
// always-continue asymptote x/(1-delta) + delta*E[Z]/(1-delta)^2 above the
// upper edge.  Expectations for normal steps use 31-node Gauss-Hermite
// quadrature.  Populates x_star via find_threshold.
ThresholdSolution solve_value_function(const StepDistribution& step,
                                       double delta, const GridSpec& grid,
                                       double tol);

// Linear-interpolated root of the continuation values; requires exactly one
// sign change.  Stop iff the last answer's value is at or below the root.
double find_threshold(const ThresholdSolution& sol);

struct PassageSample {
  std::size_t steps = 0;
  double terminal_value = 0.0;
  bool censored = false;
};

// Iterates X += Z until X <= threshold or max_steps is reached.
PassageSample simulate_first_passage(double start, double threshold,
                                     const StepDistribution& step,
                                     std::uint64_t seed,
                                     std::size_t max_steps);

struct PassageEnsemble {
  std::vector<double> times;
  std::vector<bool> censored;
};

// Euler-discretized Brownian paths started `distance` above an absorbing
// barrier; increments are normal(drift*dt, sigma*sqrt(dt)).  Passage times
// follow IG(mu = distance/|drift|, lambda = distance^2/sigma^2) in the
// dt -> 0 limit.  Path i draws from stream (seed, i).
PassageEnsemble brownian_passage_ensemble(double distance, double drift,
                                          double sigma, double dt,
                                          std::size_t n_paths,
                                          std::uint64_t seed,
                                          double max_time = 1e4);

// CSV `x,V,continuation` preceded by a `# x_star=...,delta=...,iterations=...`
// summary line.
void write_threshold_csv(const ThresholdSolution& sol, std::ostream& out);

// CSV `path_index,passage_time,censored`.
void write_passage_csv(const PassageEnsemble& ensemble, std::ostream& out);

}  // namespace stopwait
