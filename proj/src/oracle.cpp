#include "optframe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "optframe/error.hpp"

namespace optframe {

std::uint64_t Rng::stream_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

void TrialConfig::validate() const {
  if (trials < 1) throw InvalidInput("trials must be at least 1");
  if (!(tol >= 0.0)) throw InvalidInput("tolerance must be non-negative");
}

WeightPartition random_partition(std::span<const double> alpha, std::size_t m, Rng& rng) {
  if (m == 0) throw DimensionError("random_partition: m must be positive");
  WeightPartition a(alpha.size(), m);
  std::vector<double> w(m);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) throw InvalidInput("random_partition: weights must be positive");
    for (double& x : w) x = -std::log(rng.uniform_pos());
    const double total = compensated_sum(w);
    double used = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      a(i, j) = alpha[i] * (w[j] / total);
      used += a(i, j);
    }
    a(i, m - 1) = std::max(0.0, alpha[i] - used);
  }
  return a;
}

std::vector<FrameFamily> random_design(const WeightPartition& a, std::span<const std::size_t> dims, Rng& rng) {
  if (dims.size() != a.cols()) throw DimensionError("random_design: one dimension per column required");
  std::vector<FrameFamily> design;
  design.reserve(dims.size());
  std::vector<double> v;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    const std::size_t d = dims[j];
    FrameFamily f{Matrix(d, a.rows())};
    v.resize(d);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double norm = 0.0;
      while (norm == 0.0) {
        for (double& x : v) x = rng.normal();
        norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
      }
      const double scale = std::sqrt(std::max(0.0, a(i, j))) / norm;
      for (std::size_t r = 0; r < d; ++r) f.synthesis(r, i) = v[r] * scale;
    }
    design.push_back(std::move(f));
  }
  return design;
}

std::size_t OptimalityReport::violations() const {
  std::size_t total = majorization_violations;
  for (const auto& p : potentials) total += p.violations;
  return total;
}

namespace {

double safe_potential(std::span<const double> spectrum, const Potential& pot) {
  try {
    return potential_of(spectrum, pot);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

OptimalityReport run_trials(const ProblemInput& input, const TrialConfig& cfg, const SortedVector& lambda_op,
                            std::size_t first, std::size_t last) {
  OptimalityReport rep;
  for (const auto& pot : cfg.potentials) {
    rep.potentials.push_back({pot.name, potential_of(lambda_op.view(), pot), std::numeric_limits<double>::infinity(), 0});
  }
  for (std::size_t t = first; t < last; ++t) {
    Rng rng(Rng::stream_seed(cfg.seed, t));
    const auto a = random_partition(input.alpha().view(), input.m(), rng);
    const auto design = random_design(a, input.dims(), rng);
    const auto lambda = lambda_vector(design);
    ++rep.trials;
    const double mtol = default_tolerance(lambda.concatenated) + cfg.tol;
    if (!majorizes(lambda.concatenated, lambda_op.view(), mtol)) ++rep.majorization_violations;
    for (std::size_t k = 0; k < cfg.potentials.size(); ++k) {
      auto& tally = rep.potentials[k];
      const double value = safe_potential(lambda.concatenated, cfg.potentials[k]);
      tally.min_trial = std::min(tally.min_trial, value);
      if (tally.optimal > value + cfg.tol * std::max(1.0, std::abs(value))) ++tally.violations;
    }
  }
  return rep;
}

}  // namespace

OptimalityReport optimality_trial(const ProblemInput& input, const TrialConfig& cfg) {
  cfg.validate();
  const auto solution = solve(input);
  std::size_t threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  threads = std::min(threads, cfg.trials);

  std::vector<OptimalityReport> parts(threads);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (cfg.trials + threads - 1) / threads;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = std::min(cfg.trials, w * chunk);
        parts[w] = run_trials(input, cfg, solution.lambda, lo, std::min(cfg.trials, lo + chunk));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  OptimalityReport total = parts.front();
  for (std::size_t w = 1; w < parts.size(); ++w) {
    total.trials += parts[w].trials;
    total.majorization_violations += parts[w].majorization_violations;
    for (std::size_t k = 0; k < total.potentials.size(); ++k) {
      total.potentials[k].violations += parts[w].potentials[k].violations;
      total.potentials[k].min_trial = std::min(total.potentials[k].min_trial, parts[w].potentials[k].min_trial);
    }
  }
  return total;
}

std::vector<double> reference_water_fill(std::span<const double> a, std::size_t d) {
  if (d == 0 || d > a.size()) throw DimensionError("reference_water_fill: need 1 <= d <= n");
  std::vector<double> s(a.begin(), a.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d; ++k) {
    double tail = 0.0;
    for (std::size_t i = k; i < s.size(); ++i) tail += s[i];
    c = std::min(c, tail / static_cast<double>(d - k));
  }
  std::vector<double> g(d);
  for (std::size_t i = 0; i < d; ++i) g[i] = std::max(s[i], c);
  return g;
}

double brute_force_small(const ProblemInput& input, std::size_t grid_steps, const Potential& pot) {
  const std::size_t n = input.n();
  if (n > 3 || input.m() != 2) throw InvalidInput("brute_force_small: needs n <= 3 and m = 2");
  if (grid_steps == 0) throw InvalidInput("brute_force_small: grid_steps must be positive");
  const auto& alpha = input.alpha();
  const auto& dims = input.dims();

  std::vector<std::size_t> idx(n, 0);
  std::vector<double> c1(n), c2(n);
  double best = std::numeric_limits<double>::infinity();
  const double g = static_cast<double>(grid_steps);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      c1[i] = alpha[i] * (static_cast<double>(idx[i]) / g);
      c2[i] = alpha[i] - c1[i];
    }
    double value = 0.0;
    for (double x : reference_water_fill(c1, dims[0])) value += pot.phi(x);
    for (double x : reference_water_fill(c2, dims[1])) value += pot.phi(x);
    best = std::min(best, value);

    std::size_t pos = 0;
    while (pos < n && idx[pos] == grid_steps) idx[pos++] = 0;
    if (pos == n) break;
    ++idx[pos];
  }
  return best;
}

MonotonicityReport monotonicity_trial(std::span<const double> alpha, std::span<const double> beta,
                                      std::span<const std::size_t> dims, double tol) {
  if (alpha.size() != beta.size()) throw DimensionError("monotonicity: alpha and beta differ in length");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(beta[i] > 0.0) || beta[i] > alpha[i]) {
      throw InvalidInput("monotonicity: need 0 < beta_i <= alpha_i (index " + std::to_string(i) + ")");
    }
  }
  const auto up = solve(ProblemInput::create(alpha, dims));
  const auto low = solve(ProblemInput::create(beta, dims));
  MonotonicityReport rep;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < up.spectra.size(); ++j) {
    for (std::size_t i = 0; i < up.spectra[j].size(); ++i) {
      const double excess = low.spectra[j][i] - up.spectra[j][i];
      rep.max_excess = std::max(rep.max_excess, excess);
      ++rep.compared;
      if (excess > tol * std::max(1.0, up.spectra[j][i])) ++rep.violations;
    }
  }
  rep.upper = up.spectra;
  rep.lower = low.spectra;
  return rep;
}

RandomInstance random_instance(Rng& rng, std::size_t max_n, std::size_t max_m) {
  RandomInstance inst;
  const std::size_t n = 1 + rng.below(max_n);
  const std::size_t m = 1 + rng.below(max_m);
  inst.alpha.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Repeated weights exercise the block merging.
    if (i > 0 && rng.uniform() < 0.2) {
      inst.alpha[i] = inst.alpha[i - 1];
    } else {
      inst.alpha[i] = 0.05 + 9.95 * rng.uniform();
    }
  }
  std::sort(inst.alpha.begin(), inst.alpha.end(), std::greater<>());
  inst.dims.resize(m);
  for (auto& d : inst.dims) d = 1 + rng.below(n);
  std::sort(inst.dims.begin(), inst.dims.end(), std::greater<>());
  return inst;
}

}  // namespace optframe
