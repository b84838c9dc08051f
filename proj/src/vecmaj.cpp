#include "optframe/vecmaj.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "optframe/error.hpp"

namespace optframe {

namespace {

void require_finite(std::span<const double> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw InvalidInput(std::string(what) + ": entry " + std::to_string(i) + " is not finite");
    }
  }
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// Running compensated partial sums, used so that equal-trace comparisons
// do not drift on long vectors.
class PartialSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

bool partial_sums_dominate(const std::vector<double>& ys, const std::vector<double>& xs, double tol) {
  const std::size_t k = std::min(ys.size(), xs.size());
  PartialSum sy, sx;
  for (std::size_t j = 0; j < k; ++j) {
    sy.add(ys[j]);
    sx.add(xs[j]);
    if (sx.value() > sy.value() + tol) return false;
  }
  return true;
}

}  // namespace

SortedVector::SortedVector(std::vector<double> entries) : entries_(std::move(entries)) {
  require_finite(entries_, "SortedVector");
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i] > entries_[i - 1]) {
      throw InvalidInput("SortedVector: entries are not non-increasing at index " + std::to_string(i));
    }
  }
}

SortedVector SortedVector::sorting(std::span<const double> x) {
  require_finite(x, "SortedVector::sorting");
  return SortedVector(sorted_copy(x));
}

double SortedVector::sum() const { return compensated_sum(entries_); }

double compensated_sum(std::span<const double> x) {
  PartialSum s;
  for (double v : x) s.add(v);
  return s.value();
}

SortResult sort_desc(std::span<const double> x) {
  require_finite(x, "sort_desc");
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });

  std::vector<double> sorted(x.size());
  std::vector<std::size_t> perm(x.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    sorted[pos] = x[order[pos]];
    perm[order[pos]] = pos;
  }
  return {SortedVector(std::move(sorted)), std::move(perm)};
}

double default_tolerance(std::span<const double> y) {
  return 1e-9 * std::max(1.0, std::abs(compensated_sum(y)));
}

bool submajorizes(std::span<const double> y, std::span<const double> x, double tol) {
  require_finite(y, "submajorizes");
  require_finite(x, "submajorizes");
  return partial_sums_dominate(sorted_copy(y), sorted_copy(x), tol);
}

bool submajorizes(std::span<const double> y, std::span<const double> x) {
  return submajorizes(y, x, default_tolerance(y));
}

bool majorizes(std::span<const double> y, std::span<const double> x, double tol) {
  if (!submajorizes(y, x, tol)) return false;
  return std::abs(compensated_sum(x) - compensated_sum(y)) <= tol;
}

bool majorizes(std::span<const double> y, std::span<const double> x) {
  return majorizes(y, x, default_tolerance(y));
}

void BlockVector::validate() const {
  if (levels.size() != multiplicities.size()) {
    throw InvalidInput("BlockVector: levels and multiplicities differ in length");
  }
  require_finite(levels, "BlockVector");
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (multiplicities[l] == 0) throw InvalidInput("BlockVector: zero multiplicity");
    if (l > 0 && !(levels[l] < levels[l - 1])) {
      throw InvalidInput("BlockVector: levels must be strictly decreasing");
    }
  }
}

std::size_t BlockVector::size() const {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), std::size_t{0});
}

std::vector<double> BlockVector::expand() const {
  std::vector<double> out;
  out.reserve(size());
  for (std::size_t l = 0; l < levels.size(); ++l) out.insert(out.end(), multiplicities[l], levels[l]);
  return out;
}

double BlockVector::trace() const { return compensated_sum(expand()); }

bool block_majorizes(const BlockVector& a, std::span<const double> b, double tol) {
  a.validate();
  require_finite(b, "block_majorizes");
  if (a.size() != b.size()) throw DimensionError("block_majorizes: length mismatch");
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (b[i] > b[i - 1]) throw InvalidInput("block_majorizes: b must be sorted non-increasing");
  }
  if (std::abs(a.trace() - compensated_sum(b)) > tol) {
    throw TraceMismatch("block_majorizes: traces differ");
  }

  PartialSum sa, sb;
  std::size_t pos = 0;
  for (std::size_t k = 0; k + 1 < a.levels.size(); ++k) {
    for (std::size_t r = 0; r < a.multiplicities[k]; ++r) {
      sa.add(a.levels[k]);
      sb.add(b[pos++]);
    }
    if (sa.value() > sb.value() + tol) return false;
  }
  return true;
}

bool block_majorizes(const BlockVector& a, std::span<const double> b) {
  return block_majorizes(a, b, default_tolerance(b));
}

double trace_phi(std::span<const double> x, const std::function<double(double)>& phi) {
  PartialSum s;
  for (double v : x) {
    const double f = phi(v);
    if (!std::isfinite(f)) {
      throw DomainError("trace_phi: function undefined at " + std::to_string(v));
    }
    s.add(f);
  }
  return s.value();
}

std::vector<double> zero_pad(std::span<const double> x, std::size_t n) {
  std::vector<double> out(x.begin(), x.end());
  if (out.size() < n) out.resize(n, 0.0);
  return out;
}

}  // namespace optframe
