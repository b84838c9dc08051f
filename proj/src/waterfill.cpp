#include "optframe/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optframe/error.hpp"

namespace optframe {

WaterFillResult water_fill(std::span<const double> alpha, std::size_t d) {
  const std::size_t n = alpha.size();
  if (d < 1 || d > n) {
    throw DimensionError("water_fill: dimension " + std::to_string(d) + " outside [1, " + std::to_string(n) + "]");
  }
  const double slack = 1e-12 * std::max(1.0, std::abs(alpha[0]));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(alpha[i])) throw InvalidInput("water_fill: non-finite entry");
    if (alpha[i] < 0.0) throw InvalidInput("water_fill: negative entry at index " + std::to_string(i));
    if (i > 0 && alpha[i] > alpha[i - 1] + slack) {
      throw InvalidInput("water_fill: input is not non-increasing at index " + std::to_string(i));
    }
  }

  // On segment k the flooded entries are k..d-1 and c = (sum_{i>=k} alpha_i) / (d - k).
  auto segment_level = [&](std::size_t k) {
    return compensated_sum(alpha.subspan(k)) / static_cast<double>(d - k);
  };
  std::size_t k = d - 1;
  double level = segment_level(k);
  while (k > 0 && alpha[k - 1] <= level) {
    --k;
    level = segment_level(k);
  }

  std::vector<double> gamma(d);
  for (std::size_t i = 0; i < d; ++i) gamma[i] = std::max(alpha[i], level);
  // Guard the sorted invariant against the tolerated input inversions.
  for (std::size_t i = 1; i < d; ++i) gamma[i] = std::min(gamma[i], gamma[i - 1]);
  return {SortedVector(std::move(gamma)), level, k};
}

DeformationFamily::DeformationFamily(std::span<const double> source, std::size_t dim)
    : source_(source.begin(), source.end()), dim_(dim), fill_(water_fill(source, dim)) {}

double DeformationFamily::value(std::size_t i, double t) const {
  const double c = fill_.level;
  // Zero level: the limit c -> 0+ of the formula (zero for an all-zero source).
  if (c <= 0.0) return t > 0.0 ? std::min(source_[i], t) : 0.0;
  return std::min(t, c) / c * std::min(source_[i], std::max(t, c));
}

void DeformationFamily::check_range(double t) const {
  if (!(t >= 0.0 && t <= t_max())) {
    throw RangeError("deformation parameter " + std::to_string(t) + " outside [0, " + std::to_string(t_max()) + "]");
  }
}

std::vector<double> DeformationFamily::at(double t) const {
  check_range(t);
  std::vector<double> out(source_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(i, t);
  return out;
}

SortedVector DeformationFamily::spectrum_at(double t) const {
  check_range(t);
  std::vector<double> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = std::min(fill_.gamma[i], t);
  return SortedVector(std::move(out));
}

}  // namespace optframe
