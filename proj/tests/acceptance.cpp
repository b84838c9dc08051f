// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "optframe/oracle.hpp"
#include "optframe/partition.hpp"
#include "optframe/potentials.hpp"
#include "optframe/synth.hpp"
#include "support.hpp"

using namespace optframe;
using fixtures::max_abs_diff;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed;
  std::string detail;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<double> group_spectrum(std::size_t d, std::initializer_list<double> head, double tail) {
  std::vector<double> v(d, tail);
  std::size_t i = 0;
  for (double h : head) {
    if (i < d) v[i++] = h;
  }
  return v;
}

double spectra_deviation(const PartitionSolution& sol, const std::vector<std::vector<double>>& want) {
  double dev = 0.0;
  for (std::size_t j = 0; j < want.size(); ++j) dev = std::max(dev, max_abs_diff(sol.spectra[j].view(), want[j]));
  return dev;
}

Outcome c1() {
  const auto in = ProblemInput::create(fixtures::kTwoGroups.alpha, fixtures::kTwoGroups.dims);
  const auto t0 = Clock::now();
  const auto sol = solve(in);
  const double ms = ms_since(t0);
  const double dev = max_abs_diff(sol.lambda.view(), std::vector<double>{6, 6, 6, 6, 6, 2});
  return {dev <= 1e-9 && ms < 10.0, fmt("lambda deviation %.2e, %.3f ms", dev, ms)};
}

Outcome c2() {
  const auto& inst = fixtures::kElevenHigh;
  const auto in = ProblemInput::create(inst.alpha, inst.dims);
  const auto t0 = Clock::now();
  const auto sol = solve(in);
  const double ms = ms_since(t0);
  const double table = fixtures::table_deviation(sol.partition, fixtures::kElevenHighTable);
  std::vector<std::vector<double>> want;
  for (auto d : inst.dims) want.push_back(group_spectrum(d, {3.0}, 33.1 / 12));
  const double spec = spectra_deviation(sol, want);
  const bool verified = verify_solution(in, sol).passed();
  // Partitions are not unique; spectra plus the structural checks are the fallback.
  const bool match = (table <= 1e-3 || verified) && spec <= 1e-4;
  return {match && ms < 50.0,
          fmt("table deviation %.2e, spectra deviation %.2e, %.3f ms", table, spec, ms)};
}

Outcome c3() {
  const auto& inst = fixtures::kElevenLow;
  const auto sol = fixtures::solve(inst);
  std::vector<std::vector<double>> want;
  for (auto d : inst.dims) want.push_back(group_spectrum(d, {8.5 / 3, 7.0 / 3}, 20.7 / 9));
  const double spec = spectra_deviation(sol, want);
  return {spec <= 1e-4, fmt("spectra deviation %.2e", spec)};
}

Outcome c4() {
  const auto& inst = fixtures::kFiveGroups;
  const auto sol = fixtures::solve(inst);
  const double table = fixtures::table_deviation(sol.partition, fixtures::kFiveGroupsTable);
  std::vector<std::vector<double>> want;
  for (auto d : inst.dims) want.push_back(group_spectrum(d, {4.0, 3.9}, 26.9 / 8));
  const double spec = spectra_deviation(sol, want);
  return {table <= 1e-3 && spec <= 1e-4, fmt("table deviation %.2e, spectra deviation %.2e", table, spec)};
}

Outcome c5() {
  const auto worked = monotonicity_trial(fixtures::kElevenHigh.alpha, fixtures::kElevenLow.alpha, fixtures::kElevenHigh.dims);
  Rng rng(5005);
  std::size_t violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_instance(rng, 10, 4);
    std::vector<double> beta(inst.alpha);
    for (double& b : beta) b = std::max(1e-3 * b, b - b * rng.uniform());
    violations += monotonicity_trial(inst.alpha, beta, inst.dims).violations;
  }
  return {worked.passed() && violations == 0,
          fmt("reference pair max excess %.4f, random violations %.0f", worked.max_excess, static_cast<double>(violations))};
}

Outcome c6() {
  const std::vector<std::size_t> profile{6, 5, 4, 2};
  const bool cuts_ok = block_multiplicities(profile, std::vector<std::size_t>{0, 3, 5, 6}) == std::vector<std::size_t>{11, 5, 1};
  Rng rng(6006);
  std::size_t failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(rng, 12, 5);
    const auto in = ProblemInput::create(inst.alpha, inst.dims);
    const auto sol = solve(in);
    const auto& b = sol.blocks;
    bool ok = b.cuts.front() == 0 && b.cuts.back() == in.dims().front() && b.cuts.size() == b.p + 1;
    // (a) strictly decreasing levels and increasing cuts.
    for (std::size_t l = 1; l < b.p; ++l) ok = ok && b.levels[l] < b.levels[l - 1] && b.cuts[l] > b.cuts[l - 1];
    // (b) multiplicities from the cuts.
    ok = ok && block_multiplicities(in.dims(), b.cuts) == b.mults;
    // (c), (d) block traces.
    for (std::size_t l = 0; l < b.p; ++l) {
      const std::size_t hi = l + 1 == b.p ? in.n() : b.cuts[l + 1];
      double mass = 0.0;
      for (std::size_t i = b.cuts[l]; i < hi; ++i) mass += in.alpha()[i];
      const double rel = std::abs(static_cast<double>(b.mults[l]) * b.levels[l] - mass) / std::max(1.0, mass);
      worst = std::max(worst, rel);
      ok = ok && rel <= 1e-8;
    }
    // The blocks reproduce the sorted spectrum.
    const auto expanded = b.as_block_vector().expand();
    ok = ok && max_abs_diff(expanded, sol.lambda.view()) <= 1e-7 * std::max(1.0, sol.lambda.front());
    if (!ok) ++failures;
  }
  return {cuts_ok && failures == 0,
          fmt("(6,5,4,2) cuts ok=%.0f, failing instances %.0f, worst relative trace gap %.2e", cuts_ok ? 1.0 : 0.0,
              static_cast<double>(failures), worst)};
}

Outcome c7() {
  const std::vector<const fixtures::Instance*> cases{&fixtures::kTwoGroups, &fixtures::kElevenHigh, &fixtures::kElevenLow,
                                                     &fixtures::kFiveGroups, &fixtures::kUniformSix};
  TrialConfig cfg;
  cfg.seed = 7007;
  cfg.trials = 1000;
  const auto t0 = Clock::now();
  std::size_t violations = 0;
  for (const auto* inst : cases) violations += optimality_trial(ProblemInput::create(inst->alpha, inst->dims), cfg).violations();
  const double s = ms_since(t0) / 1000.0;
  return {violations == 0 && s < 30.0,
          fmt("%.0f violations over 5 x 1000 designs x 3 potentials, %.2f s", static_cast<double>(violations), s)};
}

Outcome c8() {
  const std::vector<fixtures::Instance> cases{{{2, 1}, {1, 1}},         {{1, 1}, {1, 1}},      {{10, 10, 10}, {1, 1}},
                                              {{10, 10, 10}, {2, 1}},   {{10, 10, 10}, {2, 2}}, {{3, 2, 1}, {2, 1}},
                                              {{5, 1, 0.5}, {2, 2}},    {{4, 4, 1}, {1, 1}}};
  double worst = INFINITY;
  for (const auto& inst : cases) {
    const auto in = ProblemInput::create(inst.alpha, inst.dims);
    const double algo = potential_of(solve(in).lambda.view(), frame_potential());
    worst = std::min(worst, brute_force_small(in, 200) - algo);
  }
  return {worst >= -1e-3, fmt("smallest grid minus algorithm gap %.3e", worst)};
}

Outcome c9() {
  Rng rng(9009);
  double norm_dev = 0.0;
  double spec_dev = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + rng.below(8);
    const std::size_t n = d + rng.below(8);
    std::vector<double> lam(d);
    for (double& x : lam) x = 0.1 + 10 * rng.uniform();
    auto norms = zero_pad(lam, n);
    for (int s = 0; s < 40; ++s) {
      std::size_t i = rng.below(n);
      std::size_t j = rng.below(n);
      if (norms[i] < norms[j]) std::swap(i, j);
      const double amount = 0.5 * (norms[i] - norms[j]) * rng.uniform();
      norms[i] -= amount;
      norms[j] += amount;
    }
    const auto f = schur_horn_vectors(norms, lam);
    const auto got = f.squared_norms();
    for (std::size_t i = 0; i < n; ++i) norm_dev = std::max(norm_dev, std::abs(got[i] - norms[i]) / std::max(1.0, norms[i]));
    const auto spec = sym_eigenvalues(frame_operator(f));
    const auto want = SortedVector::sorting(lam);
    spec_dev = std::max(spec_dev, max_abs_diff(spec.view(), want.view()) / std::max(1.0, want[0]));
  }
  const auto parseval = schur_horn_vectors(std::vector<double>{1, 1, 1, 1, 0, 0}, std::vector<double>(4, 1.0));
  const double id_dev = (frame_operator(parseval) - Matrix::identity(4)).max_abs();
  return {norm_dev <= 1e-10 && spec_dev <= 1e-8 && id_dev <= 1e-10,
          fmt("norm deviation %.2e, spectrum deviation %.2e, Parseval deviation %.2e", norm_dev, spec_dev, id_dev)};
}

Outcome c10() {
  const auto fig = water_fill(std::vector<double>{10, 8.5, 7, 5, 3.8, 3.8, 2.4, 2, 1.7, 0.8}, 6);
  const bool exact = fig.level == 6.5;
  Rng rng(10010);
  std::size_t failures = 0;
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(15);
    std::vector<double> a(n);
    for (double& x : a) x = 10 * rng.uniform();
    a = SortedVector::sorting(a).entries();
    const std::size_t d = 1 + rng.below(n);
    const auto g = water_fill(a, d).gamma;
    bool ok = true;

    const double s = 5 * rng.uniform();
    std::vector<double> scaled(a);
    for (double& x : scaled) x *= s;
    const auto gs = water_fill(scaled, d).gamma;
    for (std::size_t i = 0; i < d; ++i) ok = ok && close(gs[i], s * g[i]);

    std::vector<double> smaller(a);
    for (double& x : smaller) x *= rng.uniform();
    const auto gb = water_fill(SortedVector::sorting(smaller).view(), d).gamma;
    for (std::size_t i = 0; i < d; ++i) ok = ok && gb[i] <= g[i] * (1 + 1e-12);

    if (g.front() - g.back() <= 1e-12 * g.front()) {
      for (std::size_t dp = 1; dp <= d; ++dp) {
        const auto h = water_fill(a, dp).gamma;
        ok = ok && h.front() - h.back() <= 1e-12 * std::max(1.0, h.front()) && h.front() >= g.front() * (1 - 1e-12);
      }
    }

    const DeformationFamily fam(a, d);
    const double t = fam.t_max() * rng.uniform();
    const auto direct = water_fill(fam.at(t), d).gamma;
    for (std::size_t i = 0; i < d; ++i) {
      ok = ok && close(direct[i], std::min(fam.source_fill().gamma[i], t));
    }
    if (!ok) ++failures;
  }
  return {exact && failures == 0,
          fmt("flood instance level %.17g, failing samples %.0f", fig.level, static_cast<double>(failures))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"two-group spectrum", c1},
      {"eleven-weight partition table and spectra", c2},
      {"smaller eleven-weight spectra", c3},
      {"five-group partition table and levels", c4},
      {"spectral monotonicity", c5},
      {"block structure identities", c6},
      {"optimality against random designs", c7},
      {"grid oracle agreement", c8},
      {"Schur-Horn synthesis fidelity", c9},
      {"water-filling properties", c10},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o{false, ""};
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu: %s (%s)\n", o.passed ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    if (!o.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
