#include "optframe/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "optframe/error.hpp"

namespace optframe {

namespace {

double scale_of(std::span<const double> alpha) { return std::max(1.0, alpha.empty() ? 0.0 : alpha.front()); }

struct LevelResult {
  std::vector<std::vector<double>> columns;
  std::vector<double> t_seq;
  std::size_t stop = 0;
};

// One recursion level: given the columns for dims[0..L-2], produce the
// columns for dims[0..L-1].
LevelResult extend_level(const std::vector<std::vector<double>>& previous, std::span<const double> alpha,
                         std::span<const std::size_t> dims, const ToleranceConfig& cfg) {
  const std::size_t n = alpha.size();
  const std::size_t groups = dims.size();
  const std::size_t dm = dims.back();

  std::vector<DeformationFamily> families;
  families.reserve(groups - 1);
  for (std::size_t j = 0; j + 1 < groups; ++j) families.emplace_back(previous[j], dims[j]);

  LevelResult out;
  out.columns.assign(groups, std::vector<double>(n, 0.0));

  auto assign_row = [&](std::size_t i, double t, std::span<const double> residual) {
    for (std::size_t j = 0; j + 1 < groups; ++j) out.columns[j][i] = families[j].value(i, t);
    out.columns[groups - 1][i] = residual[i];
  };

  for (std::size_t row = 0; row < dm; ++row) {
    const double t = find_t(families, alpha, dm, row, cfg);
    out.t_seq.push_back(t);
    const auto residual = residual_column(families, alpha, t, cfg);
    const auto tail = water_fill(std::span<const double>(residual).subspan(row), dm - row);

    if (is_flat(tail.gamma, cfg)) {
      for (std::size_t i = row; i < n; ++i) assign_row(i, t, residual);
      out.stop = row + 1;
      return out;
    }
    assign_row(row, t, residual);
  }
  // A one-dimensional water-filling is always flat, so the loop returns.
  throw InternalInvariantViolation("solve: recursion level did not stop within d_m iterations");
}

}  // namespace

std::size_t ProblemInput::total_dim() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0});
}

ProblemInput ProblemInput::create(std::span<const double> alpha, std::span<const std::size_t> dims) {
  if (alpha.empty()) throw DimensionError("no weights given");
  if (dims.empty()) throw DimensionError("no dimensions given");
  for (double a : alpha) {
    if (!std::isfinite(a) || a <= 0.0) throw InvalidInput("weights must be finite and strictly positive");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw DimensionError("dimensions must be at least 1");
  }

  ProblemInput in;
  auto sorted = sort_desc(alpha);
  in.alpha_ = std::move(sorted.sorted);
  in.alpha_perm_ = std::move(sorted.perm);

  std::vector<std::size_t> order(dims.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dims[a] > dims[b]; });
  in.dims_.resize(dims.size());
  in.dims_perm_.resize(dims.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    in.dims_[pos] = dims[order[pos]];
    in.dims_perm_[order[pos]] = pos;
  }

  if (in.dims_.front() > in.n()) {
    throw DimensionError("largest dimension " + std::to_string(in.dims_.front()) + " exceeds the number of weights " +
                         std::to_string(in.n()));
  }
  return in;
}

std::vector<double> WeightPartition::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void WeightPartition::set_column(std::size_t j, std::span<const double> values) {
  if (values.size() != rows_) throw DimensionError("set_column: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

std::vector<double> WeightPartition::row_sums() const {
  std::vector<double> s(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    s[i] = compensated_sum(std::span<const double>(data_).subspan(i * cols_, cols_));
  }
  return s;
}

std::vector<std::size_t> dimension_profile(std::span<const std::size_t> dims) {
  const std::size_t top = dims.empty() ? 0 : *std::max_element(dims.begin(), dims.end());
  std::vector<std::size_t> h(top, 0);
  for (std::size_t i = 1; i <= top; ++i) {
    h[i - 1] = static_cast<std::size_t>(std::count_if(dims.begin(), dims.end(), [i](std::size_t d) { return d >= i; }));
  }
  return h;
}

std::vector<std::size_t> block_multiplicities(std::span<const std::size_t> dims, std::span<const std::size_t> cuts) {
  std::vector<std::size_t> r;
  for (std::size_t l = 1; l < cuts.size(); ++l) {
    std::size_t sum = 0;
    for (std::size_t d : dims) {
      const std::size_t upper = std::min(cuts[l], d);
      if (upper > cuts[l - 1]) sum += upper - cuts[l - 1];
    }
    r.push_back(sum);
  }
  return r;
}

std::vector<double> residual_column(std::span<const DeformationFamily> families, std::span<const double> alpha,
                                    double t, const ToleranceConfig& cfg) {
  const double floor = -cfg.clamp_rel * scale_of(alpha);
  std::vector<double> out(alpha.begin(), alpha.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double taken = 0.0;
    for (const auto& fam : families) taken += fam.value(i, t);
    out[i] -= taken;
    if (out[i] < 0.0) {
      if (out[i] < floor) {
        throw InternalInvariantViolation("residual_column: entry " + std::to_string(i) + " is negative (" +
                                         std::to_string(out[i]) + ")");
      }
      out[i] = 0.0;
    }
  }
  return out;
}

double find_t(std::span<const DeformationFamily> families, std::span<const double> alpha, std::size_t dm,
              std::size_t row, const ToleranceConfig& cfg) {
  if (families.empty()) throw InvalidInput("find_t: needs at least one deformation family");
  if (row >= dm) throw DimensionError("find_t: row beyond the last dimension");
  const auto& top_fill = families.front().source_fill().gamma;
  const double tol = cfg.t_rel * std::max(1.0, top_fill.front());

  auto gap = [&](double t) {
    const auto residual = residual_column(families, alpha, t, cfg);
    const auto fill = water_fill(std::span<const double>(residual).subspan(row), dm - row);
    return fill.gamma.front() - t;
  };

  double lo = 0.0;
  double hi = top_fill[row];
  double g_lo = gap(lo);
  double g_hi = gap(hi);
  if (g_lo < -tol || g_hi > tol) {
    throw InternalInvariantViolation("find_t: root not bracketed on [0, " + std::to_string(hi) + "]");
  }
  if (g_lo <= 0.0) return lo;
  if (g_hi >= 0.0) return hi;

  std::size_t iter = 0;
  while (hi - lo > tol) {
    if (++iter > cfg.max_bisections) throw ConvergenceError("find_t: bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    const double g_mid = gap(mid);
    if (g_mid == 0.0) return mid;
    if (g_mid > 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  // The gap is piecewise linear; interpolating inside the final bracket lands
  // on the root exactly whenever the bracket sits on a single piece.
  const double t = lo + g_lo * (hi - lo) / (g_lo - g_hi);
  return std::clamp(t, lo, hi);
}

bool is_flat(std::span<const double> gamma, const ToleranceConfig& cfg) {
  if (gamma.empty()) return true;
  const auto [mn, mx] = std::minmax_element(gamma.begin(), gamma.end());
  return (*mx - *mn) <= cfg.flat_rel * std::max(1.0, *mx);
}

SortedVector concatenated_spectrum(std::span<const SortedVector> spectra) {
  std::vector<double> all;
  for (const auto& s : spectra) all.insert(all.end(), s.begin(), s.end());
  return SortedVector::sorting(all);
}

BlockSpectrum extract_blocks(std::span<const SortedVector> spectra, std::span<const std::size_t> dims,
                             std::span<const double> alpha, const ToleranceConfig& cfg) {
  if (spectra.size() != dims.size()) throw DimensionError("extract_blocks: one spectrum per dimension required");
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (spectra[j].size() != dims[j]) throw DimensionError("extract_blocks: spectrum length differs from dimension");
  }
  const auto lambda = concatenated_spectrum(spectra);

  BlockSpectrum b;
  std::vector<std::vector<double>> groups;
  for (double x : lambda) {
    if (!groups.empty()) {
      const double ref = groups.back().front();
      if (ref - x <= cfg.merge_rel * std::max(1.0, std::abs(ref))) {
        groups.back().push_back(x);
        continue;
      }
    }
    groups.push_back({x});
  }
  for (const auto& g : groups) {
    b.levels.push_back(compensated_sum(g) / static_cast<double>(g.size()));
    b.mults.push_back(g.size());
  }
  b.p = groups.size();
  b.h = dimension_profile(dims);

  // sum_{l' <= l} r_l' = sum_{i <= g_l} h_i, and the right side is strictly
  // increasing in g, so each cut is determined by the multiplicities.
  b.cuts.push_back(0);
  std::size_t cumulative_r = 0;
  std::size_t g = 0;
  std::size_t cumulative_h = 0;
  for (std::size_t l = 0; l < b.p; ++l) {
    cumulative_r += b.mults[l];
    while (g < b.h.size() && cumulative_h < cumulative_r) cumulative_h += b.h[g++];
    if (cumulative_h != cumulative_r) {
      throw StructureError("extract_blocks: multiplicity " + std::to_string(b.mults[l]) + " of level " +
                           std::to_string(l + 1) + " matches no cut of the dimension profile");
    }
    b.cuts.push_back(g);
  }
  if (b.cuts.back() != b.h.size()) throw StructureError("extract_blocks: last cut differs from d_1");

  for (std::size_t l = 0; l < b.p; ++l) {
    const std::size_t from = b.cuts[l];
    const std::size_t to = (l + 1 == b.p) ? alpha.size() : b.cuts[l + 1];
    if (to > alpha.size()) throw StructureError("extract_blocks: cut beyond the number of weights");
    const double mass = compensated_sum(alpha.subspan(from, to - from));
    const double lhs = static_cast<double>(b.mults[l]) * b.levels[l];
    if (std::abs(lhs - mass) > cfg.identity_rel * std::max(1.0, mass)) {
      throw StructureError("extract_blocks: r_l * gamma_l = " + std::to_string(lhs) + " but the weights in block " +
                           std::to_string(l + 1) + " sum to " + std::to_string(mass));
    }
  }
  return b;
}

PartitionSolution solve(const ProblemInput& input, const ToleranceConfig& cfg) {
  const auto alpha = input.alpha().view();
  const auto& dims = input.dims();
  const std::size_t n = input.n();
  const std::size_t m = input.m();

  PartitionSolution sol;
  std::vector<std::vector<double>> columns{std::vector<double>(alpha.begin(), alpha.end())};
  for (std::size_t level = 2; level <= m; ++level) {
    auto next = extend_level(columns, alpha, std::span<const std::size_t>(dims).first(level), cfg);
    columns = std::move(next.columns);
    sol.t_seq = std::move(next.t_seq);
    sol.stop_iteration = next.stop;
  }

  sol.partition = WeightPartition(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    sol.partition.set_column(j, columns[j]);
    sol.spectra.push_back(water_fill(columns[j], dims[j]).gamma);
  }
  sol.lambda = concatenated_spectrum(sol.spectra);
  sol.blocks = extract_blocks(sol.spectra, dims, alpha, cfg);
  return sol;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check& VerificationReport::at(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named " + std::string(name));
}

VerificationReport verify_solution(const ProblemInput& input, const PartitionSolution& solution,
                                   const ToleranceConfig& cfg) {
  VerificationReport report;
  const auto alpha = input.alpha().view();
  const auto& dims = input.dims();
  const auto& A = solution.partition;
  const double scale = scale_of(alpha);
  const double tol = cfg.identity_rel * scale;

  if (A.rows() != input.n() || A.cols() != input.m()) {
    report.checks.push_back({"shape", false, 0.0, "partition is not n x m"});
    return report;
  }

  {
    Check c;
    c.name = "row_sums";
    const auto sums = A.row_sums();
    for (std::size_t i = 0; i < sums.size(); ++i) c.max_deviation = std::max(c.max_deviation, std::abs(sums[i] - alpha[i]));
    c.passed = c.max_deviation <= tol;
    report.checks.push_back(c);
  }
  {
    Check c;
    c.name = "nonnegative";
    for (double v : A.data()) c.max_deviation = std::max(c.max_deviation, -v);
    c.passed = c.max_deviation <= cfg.clamp_rel * scale;
    report.checks.push_back(c);
  }

  // Spectra recomputed from the partition are what every later check uses.
  std::vector<SortedVector> spectra;
  bool columns_usable = true;
  for (std::size_t j = 0; j < A.cols() && columns_usable; ++j) {
    auto col = A.column(j);
    for (double& v : col) v = std::max(v, 0.0);
    std::sort(col.begin(), col.end(), std::greater<>());
    try {
      spectra.push_back(water_fill(col, dims[j]).gamma);
    } catch (const Error&) {
      columns_usable = false;
    }
  }
  {
    Check c;
    c.name = "column_waterfill";
    if (!columns_usable || solution.spectra.size() != spectra.size()) {
      c.passed = false;
      c.detail = "stored spectra do not match the partition's shape";
    } else {
      for (std::size_t j = 0; j < spectra.size(); ++j) {
        if (solution.spectra[j].size() != spectra[j].size()) {
          c.passed = false;
          c.detail = "group " + std::to_string(j + 1) + " has the wrong length";
          continue;
        }
        for (std::size_t i = 0; i < spectra[j].size(); ++i) {
          c.max_deviation = std::max(c.max_deviation, std::abs(solution.spectra[j][i] - spectra[j][i]));
        }
      }
      if (solution.lambda.size() == input.total_dim()) {
        const auto lam = concatenated_spectrum(solution.spectra);
        for (std::size_t i = 0; i < lam.size(); ++i) {
          c.max_deviation = std::max(c.max_deviation, std::abs(lam[i] - solution.lambda[i]));
        }
      } else {
        c.passed = false;
        c.detail = "lambda has the wrong length";
      }
      c.passed = c.passed && c.max_deviation <= tol;
    }
    report.checks.push_back(c);
  }
  if (!columns_usable) spectra.clear();

  {
    Check c;
    c.name = "interleaving";
    for (std::size_t r = 0; r < spectra.size(); ++r) {
      for (std::size_t s = r + 1; s < spectra.size(); ++s) {
        for (std::size_t i = 0; i < dims[s]; ++i) {
          c.max_deviation = std::max(c.max_deviation, std::abs(spectra[r][i] - spectra[s][i]));
        }
      }
    }
    c.passed = columns_usable && c.max_deviation <= tol;
    report.checks.push_back(c);
  }
  {
    Check c;
    c.name = "t_sequence";
    const auto& t = solution.t_seq;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < 0.0) c.max_deviation = std::max(c.max_deviation, -t[i]);
      if (i > 0) c.max_deviation = std::max(c.max_deviation, t[i] - t[i - 1]);
    }
    c.passed = c.max_deviation <= tol && (input.m() == 1 || solution.stop_iteration == t.size());
    if (input.m() > 1 && solution.stop_iteration != t.size()) c.detail = "stop iteration differs from the t count";
    report.checks.push_back(c);
  }
  {
    Check c;
    c.name = "top_rows";
    const double m = static_cast<double>(input.m());
    const std::size_t fixed = solution.stop_iteration > 0 ? solution.stop_iteration - 1 : 0;
    for (std::size_t i = 0; i < fixed && i < A.rows(); ++i) {
      for (std::size_t j = 0; j < A.cols(); ++j) {
        c.max_deviation = std::max(c.max_deviation, std::abs(A(i, j) - alpha[i] / m));
      }
    }
    c.passed = c.max_deviation <= tol;
    report.checks.push_back(c);
  }
  {
    Check c;
    c.name = "block_identities";
    if (!columns_usable) {
      c.passed = false;
      c.detail = "partition columns could not be water-filled";
    } else {
      try {
        const auto blocks = extract_blocks(spectra, dims, alpha, cfg);
        if (solution.blocks.p != 0 &&
            (blocks.p != solution.blocks.p || blocks.mults != solution.blocks.mults || blocks.cuts != solution.blocks.cuts)) {
          c.passed = false;
          c.detail = "stored block structure differs from the recomputed one";
        }
        if (c.passed && solution.blocks.p != 0) {
          for (std::size_t l = 0; l < blocks.p; ++l) {
            c.max_deviation = std::max(c.max_deviation, std::abs(blocks.levels[l] - solution.blocks.levels[l]));
          }
          c.passed = c.max_deviation <= tol;
        }
      } catch (const StructureError& e) {
        c.passed = false;
        c.detail = e.what();
      }
    }
    report.checks.push_back(c);
  }
  {
    Check c;
    c.name = "lambda_positive";
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& s : spectra) {
      if (!s.empty()) smallest = std::min(smallest, s.back());
    }
    c.passed = columns_usable && smallest > 0.0;
    c.max_deviation = smallest > 0.0 ? 0.0 : -smallest;
    report.checks.push_back(c);
  }
  return report;
}

WeightPartition to_user_order(const ProblemInput& input, const WeightPartition& canonical) {
  WeightPartition out(canonical.rows(), canonical.cols());
  const auto& rp = input.alpha_perm();
  const auto& cp = input.dims_perm();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = canonical(rp[i], cp[j]);
  }
  return out;
}

}  // namespace optframe
