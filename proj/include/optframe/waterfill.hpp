#pragma once

// Water-filling of a non-increasing vector and the parametric deformation
// family built on top of it.

#include <cstddef>
#include <span>
#include <vector>

#include "optframe/vecmaj.hpp"

namespace optframe {

struct WaterFillResult {
  /// gamma_i = max(alpha_i, level) for the first d entries.
  SortedVector gamma;
  /// Water level c, with c >= alpha_d.
  double level = 0.0;
  /// 0-based index of the first flooded entry, i.e. min{ j : level >= alpha_j }.
  std::size_t split_index = 0;
};

/// Water-filling of `alpha` (non-negative, non-increasing) in dimension `d`.
///
/// The level solves sum_{i<d} (c - alpha_i)^+ = sum_{i>=d} alpha_i. The flood
/// equation is piecewise linear in c, so it is solved exactly by scanning the
/// segments from i = d downwards instead of iterating.
///
/// Inversions of order 1e-12 * max(1, alpha_1) are tolerated so that columns
/// produced by floating-point subtraction can be fed back in.
WaterFillResult water_fill(std::span<const double> alpha, std::size_t d);

/// The family t -> a(t) with
///   a_i(t) = min(t, c') / c' * min(a'_i, max(t, c'))
/// for t in [0, gamma'_1], where gamma' and c' are the water-filling of the
/// source a' in dimension `dim`.
class DeformationFamily {
 public:
  DeformationFamily(std::span<const double> source, std::size_t dim);

  const std::vector<double>& source() const noexcept { return source_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return source_.size(); }
  const WaterFillResult& source_fill() const noexcept { return fill_; }
  double level() const noexcept { return fill_.level; }
  /// Upper end gamma'_1 of the parameter range.
  double t_max() const { return fill_.gamma.empty() ? 0.0 : fill_.gamma.front(); }

  /// a_i(t); no range check.
  double value(std::size_t i, double t) const;

  /// a(t). Throws RangeError outside [0, gamma'_1].
  std::vector<double> at(double t) const;

  /// Water-filling of a(t) in dimension `dim`, in closed form min(gamma'_i, t).
  SortedVector spectrum_at(double t) const;

 private:
  void check_range(double t) const;

  std::vector<double> source_;
  std::size_t dim_;
  WaterFillResult fill_;
};

inline std::vector<double> deform_at(const DeformationFamily& fam, double t) { return fam.at(t); }
inline SortedVector deformed_spectrum(const DeformationFamily& fam, double t) { return fam.spectrum_at(t); }

}  // namespace optframe
