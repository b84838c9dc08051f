#pragma once

// Frame families with prescribed squared norms and frame-operator spectrum,
// and the symmetric eigensolver used to check them.

#include <cstddef>
#include <span>
#include <vector>

#include "optframe/matrix.hpp"
#include "optframe/partition.hpp"
#include "optframe/vecmaj.hpp"

namespace optframe {

/// n vectors in R^d stored as the columns of the d x n synthesis matrix.
struct FrameFamily {
  Matrix synthesis;

  std::size_t dim() const noexcept { return synthesis.rows(); }
  std::size_t count() const noexcept { return synthesis.cols(); }
  std::vector<double> vector(std::size_t i) const { return synthesis.column(i); }
  std::vector<double> squared_norms() const;
};

/// S = T T^t.
Matrix frame_operator(const FrameFamily& frame);

struct SymmetricEigen {
  SortedVector values;
  /// Orthonormal eigenvectors as columns, in the order of `values`.
  Matrix vectors;
};

/// Cyclic Jacobi sweeps. Throws InvalidInput if `s` is not square or not
/// symmetric within tol * max(1, max|s_ij|).
SymmetricEigen sym_eigen(const Matrix& s, double tol = 1e-12);
SortedVector sym_eigenvalues(const Matrix& s, double tol = 1e-12);

/// A family whose i-th squared norm is norms_sq[i] and whose frame operator
/// has eigenvalues `spectrum` (any order accepted for both).
///
/// Starts from the orthogonal family sqrt(lambda_i) e_i padded with zero
/// vectors and fixes the largest remaining norm at each step with one plane
/// rotation of two adjacent active vectors. Right rotations leave T T^t
/// unchanged and the still-active vectors stay mutually orthogonal, so each
/// step is a closed-form 2 x 2 problem.
///
/// Throws InfeasibleDesign unless norms_sq is majorized by the zero-padded
/// spectrum within `tol` (negative tol selects the default relative one).
FrameFamily schur_horn_vectors(std::span<const double> norms_sq, std::span<const double> spectrum, double tol = -1.0);

/// One family per group: norms from column j of the partition, spectrum
/// gamma_j^op. The result is an (alpha, d)-design.
std::vector<FrameFamily> synthesize_design(const PartitionSolution& solution);

}  // namespace optframe
