#pragma once

// Convex potentials tr phi(S) of frames, designs and pinched global sequences.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "optframe/matrix.hpp"
#include "optframe/synth.hpp"
#include "optframe/vecmaj.hpp"

namespace optframe {

struct Potential {
  std::string name;
  std::function<double(double)> phi;
  /// Eigenvalues below this raise DomainError (after rounding |x| <= 1e-12 to 0).
  double domain_min = 0.0;
  bool strictly_convex = true;
};

/// phi(x) = x^2, the frame potential.
Potential frame_potential();
/// phi(x) = 1/x, the mean squared error; defined on [1e-12, inf).
Potential mean_squared_error();
/// phi(x) = x^p for p > 1.
Potential power_potential(double p);

/// Midpoint convexity on `samples` random triples in [domain_min, upper].
bool convexity_probe(const Potential& pot, std::size_t samples = 1000, double upper = 100.0,
                     unsigned long long seed = 1);

/// Per-group spectra and their concatenation Lambda.
struct SpectrumVector {
  std::vector<SortedVector> per_group;
  std::vector<double> concatenated;

  SortedVector sorted() const { return SortedVector::sorting(concatenated); }
};

SpectrumVector lambda_vector(std::span<const FrameFamily> design);

double potential_of(std::span<const double> spectrum, const Potential& pot);
double potential_of(const FrameFamily& frame, const Potential& pot);

/// Sum over groups of tr phi(S_j).
double joint_potential(std::span<const FrameFamily> design, const Potential& pot);
double joint_potential(const SpectrumVector& lambda, const Potential& pot);

/// tr phi(C_d(S_G)) for n vectors in R^{|d|} (columns of `global`, |d| x n),
/// where C_d keeps only the diagonal blocks of sizes `dims`.
double pinched_potential(const Matrix& global, std::span<const std::size_t> dims, const Potential& pot);

/// Splits the rows of a |d| x n matrix into one family per block.
std::vector<FrameFamily> project_blocks(const Matrix& global, std::span<const std::size_t> dims);

}  // namespace optframe
