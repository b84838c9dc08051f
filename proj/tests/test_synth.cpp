#include <doctest.h>

#include <cmath>

#include "optframe/error.hpp"
#include "optframe/oracle.hpp"
#include "optframe/synth.hpp"
#include "support.hpp"

using namespace optframe;

namespace {

Matrix random_orthogonal(Rng& rng, std::size_t n) {
  // Gram-Schmidt on Gaussian columns.
  Matrix q(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    for (std::size_t p = 0; p < c; ++p) {
      double dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += v[r] * q(r, p);
      for (std::size_t r = 0; r < n; ++r) v[r] -= dot * q(r, p);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) q(r, c) = v[r] / norm;
  }
  return q;
}

// Random spectrum (length d) and norms majorized by it (length n).
std::pair<std::vector<double>, std::vector<double>> feasible_pair(Rng& rng) {
  const std::size_t d = 1 + rng.below(8);
  const std::size_t n = d + rng.below(8);
  std::vector<double> lam(d);
  for (double& x : lam) x = rng.uniform() < 0.2 && d > 1 ? 0.0 : 0.1 + 10 * rng.uniform();
  auto norms = zero_pad(lam, n);
  for (int s = 0; s < 40; ++s) {
    std::size_t i = rng.below(n);
    std::size_t j = rng.below(n);
    if (norms[i] < norms[j]) std::swap(i, j);
    const double amount = 0.5 * (norms[i] - norms[j]) * rng.uniform();
    norms[i] -= amount;
    norms[j] += amount;
  }
  // Shuffle so the construction sees unsorted input.
  for (std::size_t i = n; i > 1; --i) std::swap(norms[i - 1], norms[rng.below(i)]);
  return {norms, lam};
}

}  // namespace

TEST_CASE("frame operator examples") {
  FrameFamily basis{Matrix::identity(3)};
  CHECK((frame_operator(basis) - Matrix::identity(3)).max_abs() == 0.0);

  FrameFamily f{Matrix::from_rows(2, 2, {std::sqrt(2.0), 0, 0, 1})};
  const auto s = frame_operator(f);
  CHECK(s(0, 0) == doctest::Approx(2).epsilon(1e-15));
  CHECK(s(1, 1) == 1);
  CHECK(s(0, 1) == 0);

  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    FrameFamily g{Matrix(1 + rng.below(5), 1 + rng.below(8))};
    for (std::size_t r = 0; r < g.dim(); ++r) {
      for (std::size_t c = 0; c < g.count(); ++c) g.synthesis(r, c) = rng.normal();
    }
    const auto sg = frame_operator(g);
    double norms = 0.0;
    for (double x : g.squared_norms()) norms += x;
    CHECK(std::abs(sg.trace() - norms) <= 1e-12 * std::max(1.0, norms));
    CHECK((sg - sg.transpose()).max_abs() <= 1e-14 * std::max(1.0, sg.max_abs()));
  }
}

TEST_CASE("symmetric eigenvalues") {
  CHECK(sym_eigenvalues(Matrix::diagonal(std::vector<double>{3, 1, 2})).entries() == std::vector<double>{3, 2, 1});
  const auto two = sym_eigenvalues(Matrix::from_rows(2, 2, {2, 1, 1, 2}));
  CHECK(two[0] == doctest::Approx(3).epsilon(1e-15));
  CHECK(two[1] == doctest::Approx(1).epsilon(1e-15));
  CHECK_THROWS_AS(sym_eigenvalues(Matrix::from_rows(2, 2, {1, 2, 0, 1})), InvalidInput);
  CHECK_THROWS_AS(sym_eigenvalues(Matrix(2, 3)), InvalidInput);

  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(9);
    const auto q = random_orthogonal(rng, n);
    std::vector<double> d(n);
    for (double& x : d) x = 20 * rng.uniform() - 10;
    const Matrix s = q * Matrix::diagonal(d) * q.transpose();
    // Symmetrize the roundoff so the input check sees an exactly symmetric matrix.
    Matrix sym = s;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (s(i, j) + s(j, i));
    }
    const auto eig = sym_eigen(sym);
    const auto want = SortedVector::sorting(d);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(eig.values[i] - want[i]) <= 1e-10);
    const Matrix back = eig.vectors * Matrix::diagonal(eig.values.view()) * eig.vectors.transpose();
    CHECK((back - sym).frobenius_norm() <= 1e-10 * std::max(1.0, sym.frobenius_norm()));
  }
}

TEST_CASE("Schur-Horn vectors: orthonormal basis plus zero vectors") {
  const auto f = schur_horn_vectors(std::vector<double>{1, 1, 1, 1, 0, 0}, std::vector<double>{1, 1, 1, 1});
  CHECK(f.dim() == 4);
  CHECK(f.count() == 6);
  CHECK((frame_operator(f) - Matrix::identity(4)).max_abs() <= 1e-10);
  const auto norms = f.squared_norms();
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(norms[i] - 1) <= 1e-10);
  CHECK(norms[4] == 0.0);
  CHECK(norms[5] == 0.0);

  const auto onb = schur_horn_vectors(std::vector<double>(3, 1.0), std::vector<double>(3, 1.0));
  const Matrix gram = onb.synthesis.transpose() * onb.synthesis;
  CHECK((gram - Matrix::identity(3)).max_abs() <= 1e-12);
}

TEST_CASE("Schur-Horn vectors on the first optimal column") {
  const std::vector<double> norms{6, 6, 6, 1, 1};
  const std::vector<double> spec{6, 6, 6, 2};
  const auto f = schur_horn_vectors(norms, spec);
  CHECK(fixtures::max_abs_diff(f.squared_norms(), norms) <= 1e-10);
  CHECK(fixtures::max_abs_diff(sym_eigenvalues(frame_operator(f)).view(), spec) <= 1e-8);
}

TEST_CASE("infeasible targets are rejected") {
  CHECK_THROWS_AS(schur_horn_vectors(std::vector<double>{3, 0}, std::vector<double>{2, 1}), InfeasibleDesign);
  CHECK_THROWS_AS(schur_horn_vectors(std::vector<double>{1, 1}, std::vector<double>{3}), InfeasibleDesign);
  CHECK_THROWS_AS(schur_horn_vectors(std::vector<double>{1, -1}, std::vector<double>{0}), InvalidInput);
}

TEST_CASE("round trip on random feasible pairs") {
  Rng rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    const auto [norms, lam] = feasible_pair(rng);
    const auto f = schur_horn_vectors(norms, lam);
    REQUIRE(f.dim() == lam.size());
    const auto got = f.squared_norms();
    for (std::size_t i = 0; i < norms.size(); ++i) CHECK(std::abs(got[i] - norms[i]) <= 1e-10 * std::max(1.0, norms[i]));
    const auto spec = sym_eigenvalues(frame_operator(f));
    const auto want = SortedVector::sorting(lam);
    for (std::size_t i = 0; i < lam.size(); ++i) CHECK(std::abs(spec[i] - want[i]) <= 1e-8 * std::max(1.0, want[0]));
  }
}

TEST_CASE("Gram matrix carries the norms and the nonzero spectrum") {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    auto [norms, lam] = feasible_pair(rng);
    if (lam.size() > 3) continue;
    const auto f = schur_horn_vectors(norms, lam);
    const Matrix gram = f.synthesis.transpose() * f.synthesis;
    for (std::size_t i = 0; i < norms.size(); ++i) CHECK(std::abs(gram(i, i) - norms[i]) <= 1e-10 * std::max(1.0, norms[i]));
    const auto ev = sym_eigenvalues(gram);
    const auto want = zero_pad(SortedVector::sorting(lam).view(), norms.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(ev[i] - want[i]) <= 1e-8 * std::max(1.0, want[0]));
  }
}

TEST_CASE("synthesized designs realize the optimal partitions") {
  for (const auto* inst : {&fixtures::kTwoGroups, &fixtures::kElevenHigh, &fixtures::kElevenLow, &fixtures::kFiveGroups}) {
    const auto sol = fixtures::solve(*inst);
    const auto design = synthesize_design(sol);
    REQUIRE(design.size() == inst->dims.size());
    std::vector<double> rows(inst->alpha.size(), 0.0);
    for (std::size_t j = 0; j < design.size(); ++j) {
      CHECK(design[j].dim() == inst->dims[j]);
      const auto norms = design[j].squared_norms();
      for (std::size_t i = 0; i < norms.size(); ++i) rows[i] += norms[i];
      CHECK(fixtures::max_abs_diff(norms, sol.partition.column(j)) <= 1e-10 * inst->alpha[0]);
      CHECK(fixtures::max_abs_diff(sym_eigenvalues(frame_operator(design[j])).view(), sol.spectra[j].view()) <= 1e-8);
    }
    CHECK(fixtures::max_abs_diff(rows, inst->alpha) <= 1e-10 * inst->alpha[0]);
  }

  // One group with equal weights gives a tight frame.
  const auto tight = optframe::solve(ProblemInput::create(std::vector<double>(7, 1.0), std::vector<std::size_t>{3}));
  const auto f = synthesize_design(tight).front();
  const auto s = frame_operator(f);
  Matrix expect = Matrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i) expect(i, i) = 7.0 / 3;
  CHECK((s - expect).max_abs() <= 1e-10);
}
