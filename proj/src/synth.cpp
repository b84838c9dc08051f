#include "optframe/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "optframe/error.hpp"

namespace optframe {

std::vector<double> FrameFamily::squared_norms() const {
  std::vector<double> out(count(), 0.0);
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t i = 0; i < count(); ++i) out[i] += synthesis(r, i) * synthesis(r, i);
  }
  return out;
}

Matrix frame_operator(const FrameFamily& frame) {
  const auto& t = frame.synthesis;
  const std::size_t d = t.rows();
  Matrix s(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      double v = 0.0;
      for (std::size_t i = 0; i < t.cols(); ++i) v += t(a, i) * t(b, i);
      s(a, b) = v;
      s(b, a) = v;
    }
  }
  return s;
}

SymmetricEigen sym_eigen(const Matrix& s, double tol) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw InvalidInput("sym_eigen: matrix is not square");
  const double bound = tol * std::max(1.0, s.max_abs());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(s(i, j) - s(j, i)) > bound) throw InvalidInput("sym_eigen: matrix is not symmetric");
    }
  }

  Matrix a = s;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (s(i, j) + s(j, i));
  }
  Matrix v = Matrix::identity(n);

  auto off_norm = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) sum += 2.0 * a(i, j) * a(i, j);
    }
    return std::sqrt(sum);
  };

  const double target = 1e-15 * a.frobenius_norm();
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  while (off_norm() > target) {
    if (++sweep > kMaxSweeps) throw ConvergenceError("sym_eigen: Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double x = a(k, p), y = a(k, q);
          a(k, p) = c * x - sn * y;
          a(k, q) = sn * x + c * y;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double x = a(p, k), y = a(q, k);
          a(p, k) = c * x - sn * y;
          a(q, k) = sn * x + c * y;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double x = v(k, p), y = v(k, q);
          v(k, p) = c * x - sn * y;
          v(k, q) = sn * x + c * y;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  std::vector<double> values(n);
  Matrix vectors(n, n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    values[pos] = a(order[pos], order[pos]);
    for (std::size_t k = 0; k < n; ++k) vectors(k, pos) = v(k, order[pos]);
  }
  return {SortedVector(std::move(values)), std::move(vectors)};
}

SortedVector sym_eigenvalues(const Matrix& s, double tol) { return sym_eigen(s, tol).values; }

FrameFamily schur_horn_vectors(std::span<const double> norms_sq, std::span<const double> spectrum, double tol) {
  const std::size_t n = norms_sq.size();
  const std::size_t d = spectrum.size();
  if (n == 0 || d == 0) throw DimensionError("schur_horn_vectors: empty norms or spectrum");
  for (double v : norms_sq) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("schur_horn_vectors: norms must be finite and non-negative");
  }
  for (double v : spectrum) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("schur_horn_vectors: spectrum must be finite and non-negative");
  }

  const std::size_t total = std::max(n, d);
  const auto lambda = SortedVector::sorting(spectrum);
  const auto sorted_norms = sort_desc(norms_sq);
  const auto targets = zero_pad(sorted_norms.sorted.view(), total);
  const auto padded = zero_pad(lambda.view(), total);
  if (tol < 0.0) tol = default_tolerance(padded);
  if (!majorizes(padded, targets, tol)) {
    throw InfeasibleDesign("prescribed norms are not majorized by the prescribed spectrum");
  }

  // Active vectors, kept sorted by squared norm and mutually orthogonal.
  struct Active {
    std::vector<double> vec;
    double norm_sq;
  };
  std::vector<Active> active;
  active.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<double> v(d, 0.0);
    if (i < d) v[i] = std::sqrt(padded[i]);
    active.push_back({std::move(v), padded[i]});
  }

  auto fix_norm = [](std::vector<double>& v, double norm_sq) {
    double current = 0.0;
    for (double x : v) current += x * x;
    if (current > 0.0) {
      const double f = std::sqrt(norm_sq / current);
      for (double& x : v) x *= f;
    }
  };

  std::vector<std::vector<double>> placed(total);
  for (std::size_t k = 0; k < total; ++k) {
    const double a = targets[k];
    if (active.size() == 1) {
      placed[k] = std::move(active.front().vec);
      fix_norm(placed[k], a);
      active.clear();
      break;
    }
    // Largest j with w_j >= a; then w_{j+1} < a.
    std::size_t j = 0;
    while (j + 1 < active.size() && active[j + 1].norm_sq >= a) ++j;
    const double wj = active[j].norm_sq;
    const bool direct = (j + 1 == active.size()) || wj < a || wj - a <= 1e-15 * std::max(1.0, wj);
    if (direct) {
      placed[k] = std::move(active[j].vec);
      fix_norm(placed[k], a);
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(j));
      continue;
    }

    const double wn = active[j + 1].norm_sq;
    const double c2 = std::clamp((a - wn) / (wj - wn), 0.0, 1.0);
    const double c = std::sqrt(c2);
    const double s = std::sqrt(1.0 - c2);
    const auto& x = active[j].vec;
    const auto& y = active[j + 1].vec;
    std::vector<double> fixed(d), rest(d);
    for (std::size_t r = 0; r < d; ++r) {
      fixed[r] = c * x[r] + s * y[r];
      rest[r] = -s * x[r] + c * y[r];
    }
    fix_norm(fixed, a);
    placed[k] = std::move(fixed);
    active[j] = {std::move(rest), std::max(0.0, wj + wn - a)};
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(j + 1));
  }

  FrameFamily out{Matrix(d, n)};
  for (std::size_t i = 0; i < n; ++i) out.synthesis.set_column(i, placed[sorted_norms.perm[i]]);
  return out;
}

std::vector<FrameFamily> synthesize_design(const PartitionSolution& solution) {
  std::vector<FrameFamily> design;
  design.reserve(solution.spectra.size());
  for (std::size_t j = 0; j < solution.spectra.size(); ++j) {
    design.push_back(schur_horn_vectors(solution.partition.column(j), solution.spectra[j].view()));
  }
  return design;
}

}  // namespace optframe
