#pragma once

// Sorted-vector arithmetic and (sub)majorization predicates.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace optframe {

/// Finite real entries arranged in non-increasing order.
class SortedVector {
 public:
  SortedVector() = default;

  /// Throws InvalidInput unless `entries` is finite and non-increasing.
  explicit SortedVector(std::vector<double> entries);

  /// Sorts a copy of `x` (stable, descending).
  static SortedVector sorting(std::span<const double> x);

  const std::vector<double>& entries() const noexcept { return entries_; }
  std::span<const double> view() const noexcept { return entries_; }
  operator std::span<const double>() const noexcept { return entries_; }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  double front() const { return entries_.front(); }
  double back() const { return entries_.back(); }
  double sum() const;

  friend bool operator==(const SortedVector&, const SortedVector&) = default;

 private:
  std::vector<double> entries_;
};

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> x);

struct SortResult {
  SortedVector sorted;
  /// perm[i] is the position of original entry i in `sorted`.
  std::vector<std::size_t> perm;
};

/// Stable descending sort. Throws InvalidInput on NaN or infinite entries.
SortResult sort_desc(std::span<const double> x);

/// 1e-9 * max(1, |tr y|).
double default_tolerance(std::span<const double> y);

/// True iff x is majorized by y (x ≺ y). Lengths may differ: partial sums are
/// compared up to min(len) and the full traces must agree.
bool majorizes(std::span<const double> y, std::span<const double> x, double tol);
bool majorizes(std::span<const double> y, std::span<const double> x);

/// True iff x is submajorized by y (x ≺_w y).
bool submajorizes(std::span<const double> y, std::span<const double> x, double tol);
bool submajorizes(std::span<const double> y, std::span<const double> x);

/// (γ_1 𝟙_{r_1}, ..., γ_p 𝟙_{r_p}) with γ_1 > ... > γ_p.
struct BlockVector {
  std::vector<double> levels;
  std::vector<std::size_t> multiplicities;

  /// Throws InvalidInput on size mismatch, zero multiplicity or non-decreasing levels.
  void validate() const;
  std::size_t size() const;
  std::vector<double> expand() const;
  double trace() const;
};

/// Tests a ≺ b using only the partial sums at the block boundaries, which is
/// sufficient for block vectors. `b` must be sorted non-increasing and have
/// the same trace as `a` (TraceMismatch otherwise).
bool block_majorizes(const BlockVector& a, std::span<const double> b, double tol);
bool block_majorizes(const BlockVector& a, std::span<const double> b);

/// Σ φ(x_i). Throws DomainError if φ returns a non-finite value.
double trace_phi(std::span<const double> x, const std::function<double(double)>& phi);

/// Copy of `x` padded with zeros up to length `n` (no truncation).
std::vector<double> zero_pad(std::span<const double> x, std::size_t n);

}  // namespace optframe
