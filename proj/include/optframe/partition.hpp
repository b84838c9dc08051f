#pragma once

// Optimal (alpha, m)-weight partitions by recursive multi-water-filling.
//
// Given weights alpha_1 >= ... >= alpha_n > 0 and dimensions d_1 >= ... >= d_m
// with d_1 <= n, `solve` computes the n x m partition A^op (rows summing to
// alpha) whose column water-fillings gamma_j^op are jointly minimal in
// majorization. Level j of the recursion consumes the columns produced for
// the first j-1 dimensions; inside a level rows are fixed one at a time from
// the level-one deformation family only.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optframe/vecmaj.hpp"
#include "optframe/waterfill.hpp"

namespace optframe {

struct ToleranceConfig {
  /// Bisection stops once the bracket is below t_rel * max(1, gamma'_11).
  double t_rel = 1e-12;
  /// A spectrum is flat when max - min <= flat_rel * max(1, max).
  double flat_rel = 1e-9;
  std::size_t max_bisections = 200;
  /// Adjacent spectral levels closer than this (relative) are one block.
  double merge_rel = 1e-7;
  /// Residual entries in [-clamp_rel * max(1, alpha_1), 0) are rounded to 0.
  double clamp_rel = 1e-12;
  /// Tolerance for the block identities and the consistency checks.
  double identity_rel = 1e-8;
};

/// Validated problem data in canonical (descending) order, with the
/// permutations back to the caller's order.
class ProblemInput {
 public:
  /// Throws InvalidInput for non-positive or non-finite weights, DimensionError
  /// for empty data, zero dimensions or max(dims) > n.
  static ProblemInput create(std::span<const double> alpha, std::span<const std::size_t> dims);

  const SortedVector& alpha() const noexcept { return alpha_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t n() const noexcept { return alpha_.size(); }
  std::size_t m() const noexcept { return dims_.size(); }
  /// Sum of all dimensions, |d|.
  std::size_t total_dim() const noexcept;

  /// alpha_perm()[i] is the canonical row of the caller's weight i.
  const std::vector<std::size_t>& alpha_perm() const noexcept { return alpha_perm_; }
  /// dims_perm()[j] is the canonical column of the caller's group j.
  const std::vector<std::size_t>& dims_perm() const noexcept { return dims_perm_; }

 private:
  SortedVector alpha_;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> alpha_perm_;
  std::vector<std::size_t> dims_perm_;
};

/// Non-negative n x m matrix whose rows split the weights among m groups.
class WeightPartition {
 public:
  WeightPartition() = default;
  WeightPartition(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  /// Row-major entries.
  const std::vector<double>& data() const noexcept { return data_; }

  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);
  std::vector<double> row_sums() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Sorted concatenated spectrum written as levels gamma_1 > ... > gamma_p with
/// multiplicities r_l, cut at indices 0 = g_0 < g_1 < ... < g_p = d_1.
struct BlockSpectrum {
  std::size_t p = 0;
  std::vector<double> levels;
  std::vector<std::size_t> mults;
  /// g_0, ..., g_p (p + 1 entries).
  std::vector<std::size_t> cuts;
  /// h_i = #{ j : d_j >= i } for i = 1..d_1.
  std::vector<std::size_t> h;

  BlockVector as_block_vector() const { return {levels, mults}; }
};

struct PartitionSolution {
  WeightPartition partition;
  /// gamma_j^op, the water-filling of column j in dimension d_j.
  std::vector<SortedVector> spectra;
  /// t_1 >= ... >= t_k of the last recursion level (empty when m = 1).
  std::vector<double> t_seq;
  /// Iteration k at which the last level stopped (0 when m = 1).
  std::size_t stop_iteration = 0;
  /// Concatenated spectra sorted non-increasingly.
  SortedVector lambda;
  BlockSpectrum blocks;
};

/// h_i = #{ j : d_j >= i }, i = 1..max(d).
std::vector<std::size_t> dimension_profile(std::span<const std::size_t> dims);

/// r_l = sum_j (min(g_l, d_j) - g_{l-1})^+ for cuts g_0 < ... < g_p.
std::vector<std::size_t> block_multiplicities(std::span<const std::size_t> dims, std::span<const std::size_t> cuts);

/// alpha_i - sum_j a_ij(t) over the deformation families of the previous
/// level. Entries slightly below zero are clamped; larger negatives throw
/// InternalInvariantViolation.
std::vector<double> residual_column(std::span<const DeformationFamily> families, std::span<const double> alpha,
                                    double t, const ToleranceConfig& cfg = {});

/// Unique t in [0, gamma'_{row,1}] where the top of the water-filling of the
/// residual rows row..n-1 in dimension d_m - row equals t.
double find_t(std::span<const DeformationFamily> families, std::span<const double> alpha, std::size_t dm,
              std::size_t row, const ToleranceConfig& cfg = {});

bool is_flat(std::span<const double> gamma, const ToleranceConfig& cfg = {});

/// Block decomposition of the concatenated spectra. Throws StructureError if
/// the multiplicities admit no cuts or the trace identities fail.
BlockSpectrum extract_blocks(std::span<const SortedVector> spectra, std::span<const std::size_t> dims,
                             std::span<const double> alpha, const ToleranceConfig& cfg = {});

PartitionSolution solve(const ProblemInput& input, const ToleranceConfig& cfg = {});

/// Concatenates and sorts the group spectra.
SortedVector concatenated_spectrum(std::span<const SortedVector> spectra);

struct Check {
  std::string name;
  bool passed = true;
  double max_deviation = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;

  bool passed() const;
  /// Throws std::out_of_range for unknown names.
  const Check& at(std::string_view name) const;
};

/// Recomputes every structural property of `solution` from its partition:
/// row_sums, nonnegative, column_waterfill, interleaving, t_sequence,
/// top_rows, block_identities, lambda_positive.
VerificationReport verify_solution(const ProblemInput& input, const PartitionSolution& solution,
                                   const ToleranceConfig& cfg = {});

/// Partition with rows and columns permuted back to the caller's order.
WeightPartition to_user_order(const ProblemInput& input, const WeightPartition& canonical);

}  // namespace optframe
