#include "optframe/potentials.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "optframe/error.hpp"

namespace optframe {

namespace {

constexpr double kZeroBand = 1e-12;

}  // namespace

Potential frame_potential() { return {"fp", [](double x) { return x * x; }, 0.0, true}; }

Potential mean_squared_error() { return {"mse", [](double x) { return 1.0 / x; }, 1e-12, true}; }

Potential power_potential(double p) {
  if (!(p > 1.0)) throw InvalidInput("power_potential: exponent must exceed 1");
  char name[32];
  std::snprintf(name, sizeof name, "pow%g", p);
  return {name, [p](double x) { return std::pow(x, p); }, 0.0, true};
}

bool convexity_probe(const Potential& pot, std::size_t samples, double upper, unsigned long long seed) {
  std::mt19937_64 gen(seed);
  const double lo = pot.domain_min;
  for (std::size_t s = 0; s < samples; ++s) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const double v = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const double x = lo + (upper - lo) * u;
    const double y = lo + (upper - lo) * v;
    const double mid = pot.phi(0.5 * (x + y));
    const double chord = 0.5 * (pot.phi(x) + pot.phi(y));
    if (mid > chord + 1e-12 * std::max(1.0, std::abs(chord))) return false;
  }
  return true;
}

SpectrumVector lambda_vector(std::span<const FrameFamily> design) {
  SpectrumVector out;
  for (const auto& f : design) {
    out.per_group.push_back(sym_eigenvalues(frame_operator(f)));
    const auto& g = out.per_group.back();
    out.concatenated.insert(out.concatenated.end(), g.begin(), g.end());
  }
  return out;
}

double potential_of(std::span<const double> spectrum, const Potential& pot) {
  std::vector<double> x(spectrum.begin(), spectrum.end());
  for (double& v : x) {
    if (std::abs(v) <= kZeroBand) v = 0.0;
    if (v < pot.domain_min) {
      throw DomainError(pot.name + ": eigenvalue " + std::to_string(v) + " below the domain (" +
                        (pot.domain_min > 0.0 ? "not a frame" : "negative") + ")");
    }
  }
  return trace_phi(x, pot.phi);
}

double potential_of(const FrameFamily& frame, const Potential& pot) {
  return potential_of(sym_eigenvalues(frame_operator(frame)).view(), pot);
}

double joint_potential(std::span<const FrameFamily> design, const Potential& pot) {
  double total = 0.0;
  for (const auto& f : design) total += potential_of(f, pot);
  return total;
}

double joint_potential(const SpectrumVector& lambda, const Potential& pot) {
  return potential_of(lambda.concatenated, pot);
}

std::vector<FrameFamily> project_blocks(const Matrix& global, std::span<const std::size_t> dims) {
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{0});
  if (global.rows() != total) throw InvalidInput("pinching: row count differs from the sum of the dimensions");
  std::vector<FrameFamily> blocks;
  std::size_t offset = 0;
  for (std::size_t d : dims) {
    FrameFamily f{Matrix(d, global.cols())};
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < global.cols(); ++c) f.synthesis(r, c) = global(offset + r, c);
    }
    blocks.push_back(std::move(f));
    offset += d;
  }
  return blocks;
}

double pinched_potential(const Matrix& global, std::span<const std::size_t> dims, const Potential& pot) {
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{0});
  if (global.rows() != total) throw InvalidInput("pinching: row count differs from the sum of the dimensions");
  const Matrix s = frame_operator(FrameFamily{global});
  double value = 0.0;
  std::size_t offset = 0;
  for (std::size_t d : dims) {
    Matrix block(d, d);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) block(a, b) = s(offset + a, offset + b);
    }
    value += potential_of(sym_eigenvalues(block).view(), pot);
    offset += d;
  }
  return value;
}

}  // namespace optframe
