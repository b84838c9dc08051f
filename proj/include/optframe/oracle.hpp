#pragma once

// Randomized and exhaustive checks of optimality and monotonicity.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "optframe/partition.hpp"
#include "optframe/potentials.hpp"
#include "optframe/synth.hpp"

namespace optframe {

/// mt19937_64 with hand-rolled uniform and normal draws, so the stream is the
/// same on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seed of the independent stream `index` derived from `base` (splitmix64).
  static std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  double normal();
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct TrialConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  std::vector<Potential> potentials = {frame_potential(), mean_squared_error(), power_potential(3.0)};
  /// Absolute slack added to relative tolerances in every comparison.
  double tol = 1e-9;
  /// Worker threads; 0 picks the hardware concurrency. Reports do not depend on it.
  std::size_t threads = 0;

  void validate() const;
};

/// Each row i split by normalized exponential weights; rows sum to alpha_i.
WeightPartition random_partition(std::span<const double> alpha, std::size_t m, Rng& rng);

/// Vector i of group j is a uniform random direction in R^{d_j} with squared
/// norm A_ij.
std::vector<FrameFamily> random_design(const WeightPartition& a, std::span<const std::size_t> dims, Rng& rng);

struct PotentialTally {
  std::string name;
  double optimal = 0.0;
  /// Smallest value over the trials (inf if every trial left the domain).
  double min_trial = 0.0;
  std::size_t violations = 0;
};

struct OptimalityReport {
  std::size_t trials = 0;
  std::size_t majorization_violations = 0;
  std::vector<PotentialTally> potentials;

  std::size_t violations() const;
  bool passed() const { return violations() == 0; }
};

/// Compares the optimal design against cfg.trials random members of D(alpha, d).
OptimalityReport optimality_trial(const ProblemInput& input, const TrialConfig& cfg);

/// Water-filling computed as c = min_k (sum_{i>k} a_i) / (d - k); shares no
/// code with `water_fill`.
std::vector<double> reference_water_fill(std::span<const double> a, std::size_t d);

/// Minimum joint potential over the grid of row splits A_i1 = (s/g) alpha_i,
/// each column replaced by its water-filling. Requires n <= 3 and m = 2.
double brute_force_small(const ProblemInput& input, std::size_t grid_steps, const Potential& pot = frame_potential());

struct MonotonicityReport {
  std::size_t compared = 0;
  std::size_t violations = 0;
  /// max over entries of delta_ij - gamma_ij (negative when dominance is strict).
  double max_excess = 0.0;
  std::vector<SortedVector> upper;
  std::vector<SortedVector> lower;

  bool passed() const { return violations == 0; }
};

/// Checks that the optimal spectra for alpha dominate those for beta entrywise.
/// Throws InvalidInput unless 0 < beta_i <= alpha_i for every i.
MonotonicityReport monotonicity_trial(std::span<const double> alpha, std::span<const double> beta,
                                      std::span<const std::size_t> dims, double tol = 1e-9);

/// Random sorted weights in (0, 10] and dimensions with d_1 <= n.
struct RandomInstance {
  std::vector<double> alpha;
  std::vector<std::size_t> dims;
};
RandomInstance random_instance(Rng& rng, std::size_t max_n, std::size_t max_m);

}  // namespace optframe
