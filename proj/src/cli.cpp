#include "optframe/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "optframe/error.hpp"
#include "optframe/oracle.hpp"
#include "optframe/potentials.hpp"
#include "optframe/synth.hpp"

namespace optframe::cli {

using nlohmann::json;

namespace {

/// Raised for bad flags or documents; mapped to kUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<std::size_t> dims;
  std::string format = "json";
  std::string out_path;
  std::string in_path;
  std::string plot_path;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 1000;
  std::optional<double> tol_t;
  std::optional<double> tol_flat;
};

std::string fmt6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

json rows_json(const WeightPartition& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

json rows_json(const Matrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

WeightPartition from_user_order(const ProblemInput& input, const WeightPartition& user) {
  WeightPartition out(user.rows(), user.cols());
  const auto& rp = input.alpha_perm();
  const auto& cp = input.dims_perm();
  for (std::size_t i = 0; i < user.rows(); ++i) {
    for (std::size_t j = 0; j < user.cols(); ++j) out(rp[i], cp[j]) = user(i, j);
  }
  return out;
}

/// Inverse of dims_perm: user_group[c] is the caller's index of canonical column c.
std::vector<std::size_t> user_groups(const ProblemInput& input) {
  std::vector<std::size_t> inv(input.m());
  for (std::size_t j = 0; j < input.m(); ++j) inv[input.dims_perm()[j]] = j;
  return inv;
}

double potential_or_null(std::span<const double> lambda, const Potential& pot, bool& ok) {
  try {
    return potential_of(lambda, pot);
  } catch (const DomainError&) {
    ok = false;
    return 0.0;
  }
}

json potentials_json(std::span<const double> lambda) {
  json p = json::object();
  bool ok = true;
  p["fp"] = potential_or_null(lambda, frame_potential(), ok);
  ok = true;
  const double mse = potential_or_null(lambda, mean_squared_error(), ok);
  p["mse"] = ok ? json(mse) : json(nullptr);
  return p;
}

std::vector<double> user_alpha(const ProblemInput& input) {
  std::vector<double> a(input.n());
  for (std::size_t i = 0; i < input.n(); ++i) a[i] = input.alpha()[input.alpha_perm()[i]];
  return a;
}

std::vector<std::size_t> user_dims(const ProblemInput& input) {
  std::vector<std::size_t> d(input.m());
  for (std::size_t j = 0; j < input.m(); ++j) d[j] = input.dims()[input.dims_perm()[j]];
  return d;
}

template <class T>
std::vector<T> read_array(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) throw UsageError(std::string("document lacks array \"") + key + "\"");
  try {
    return doc.at(key).get<std::vector<T>>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad \"") + key + "\": " + e.what());
  }
}

void write_output(const Options& opt, const std::string& text, std::ostream& out) {
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(opt.out_path);
  if (!f) throw UsageError("cannot open output file " + opt.out_path);
  f << text;
}

json read_document(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open input file " + path);
    buf << f.rdbuf();
  }
  try {
    return json::parse(buf.str());
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

void check_schema(const json& doc) {
  if (doc.contains("schema") && doc.at("schema") != kSchemaVersion) {
    throw UsageError("unsupported schema version " + doc.at("schema").dump());
  }
}

ToleranceConfig tolerances(const Options& opt) {
  ToleranceConfig cfg;
  if (opt.tol_t) cfg.t_rel = *opt.tol_t;
  if (opt.tol_flat) cfg.flat_rel = *opt.tol_flat;
  if (!(cfg.t_rel > 0.0) || !(cfg.flat_rel > 0.0)) throw UsageError("tolerances must be positive");
  return cfg;
}

ProblemInput inline_input(const Options& opt) {
  if (opt.alpha.empty() || opt.dims.empty()) throw UsageError("--alpha and --dims are required");
  return ProblemInput::create(opt.alpha, opt.dims);
}

std::uint64_t resolve_seed(const Options& opt) {
  if (opt.seed) return *opt.seed;
  if (const char* env = std::getenv("OPTFRAME_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw UsageError(std::string("OPTFRAME_SEED is not an integer: ") + env);
    return v;
  }
  return 1;
}

std::string partition_csv(const WeightPartition& a) {
  std::string s;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j > 0) s += ',';
      s += fmt6(a(i, j));
    }
    s += '\n';
  }
  return s;
}

void write_plot_data(const std::string& path, const ProblemInput& input, const PartitionSolution& sol) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open plot file " + path);
  f << "group,index,weight,filled,level\n";
  const auto groups = user_groups(input);
  for (std::size_t c = 0; c < input.m(); ++c) {
    const auto col = sol.partition.column(c);
    const auto wf = water_fill(col, input.dims()[c]);
    for (std::size_t i = 0; i < col.size(); ++i) {
      const double filled = i < wf.gamma.size() ? wf.gamma[i] : 0.0;
      f << groups[c] << ',' << i + 1 << ',' << col[i] << ',' << filled << ',' << wf.level << '\n';
    }
  }
}

int cmd_solve(const Options& opt, std::ostream& out) {
  const auto input = inline_input(opt);
  const auto sol = solve(input, tolerances(opt));
  if (!opt.plot_path.empty()) write_plot_data(opt.plot_path, input, sol);
  if (opt.format == "csv") {
    write_output(opt, partition_csv(to_user_order(input, sol.partition)), out);
  } else {
    write_output(opt, solution_to_json(input, sol).dump(2) + "\n", out);
  }
  return kOk;
}

int cmd_synth(const Options& opt, std::ostream& out) {
  std::optional<LoadedSolution> loaded;
  if (!opt.in_path.empty()) {
    loaded.emplace(solution_from_json(read_document(opt.in_path)));
  } else {
    auto input = inline_input(opt);
    auto sol = solve(input, tolerances(opt));
    loaded.emplace(LoadedSolution{std::move(input), std::move(sol)});
  }
  const auto& input = loaded->input;
  const auto& sol = loaded->solution;
  const auto design = synthesize_design(sol);
  const auto groups = user_groups(input);

  // Canonical column c is the caller's group groups[c]; vector k of the caller
  // is canonical row alpha_perm[k].
  std::vector<Matrix> user_frames(input.m());
  double norm_dev = 0.0;
  double spec_dev = 0.0;
  json checks = json::array();
  for (std::size_t c = 0; c < input.m(); ++c) {
    const auto& f = design[c];
    Matrix t(f.dim(), input.n());
    for (std::size_t k = 0; k < input.n(); ++k) {
      const std::size_t src = input.alpha_perm()[k];
      for (std::size_t r = 0; r < f.dim(); ++r) t(r, k) = f.synthesis(r, src);
    }
    const auto norms = f.squared_norms();
    double nd = 0.0;
    for (std::size_t i = 0; i < norms.size(); ++i) nd = std::max(nd, std::abs(norms[i] - sol.partition(i, c)));
    const auto spec = sym_eigenvalues(frame_operator(f));
    double sd = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) sd = std::max(sd, std::abs(spec[i] - sol.spectra[c][i]));
    norm_dev = std::max(norm_dev, nd);
    spec_dev = std::max(spec_dev, sd);

    std::vector<double> user_norms(input.n());
    for (std::size_t k = 0; k < input.n(); ++k) user_norms[k] = norms[input.alpha_perm()[k]];
    checks.push_back({{"group", groups[c]},
                      {"achieved_norms", user_norms},
                      {"achieved_spectrum", vector_json(spec.view())},
                      {"norm_deviation", nd},
                      {"spectrum_deviation", sd}});
    user_frames[groups[c]] = std::move(t);
  }
  const double scale = std::max(1.0, input.alpha()[0]);
  const bool ok = norm_dev <= 1e-8 * scale && spec_dev <= 1e-8 * scale;

  if (opt.format == "csv") {
    std::string s;
    for (std::size_t j = 0; j < user_frames.size(); ++j) {
      s += "# group " + std::to_string(j) + " (" + std::to_string(user_frames[j].rows()) + "x" +
           std::to_string(user_frames[j].cols()) + ")\n";
      for (std::size_t r = 0; r < user_frames[j].rows(); ++r) {
        for (std::size_t k = 0; k < user_frames[j].cols(); ++k) {
          if (k > 0) s += ',';
          s += fmt6(user_frames[j](r, k));
        }
        s += '\n';
      }
    }
    write_output(opt, s, out);
  } else {
    json frames = json::array();
    for (std::size_t j = 0; j < user_frames.size(); ++j) {
      frames.push_back({{"group", j}, {"dim", user_frames[j].rows()}, {"synthesis", rows_json(user_frames[j])}});
    }
    std::sort(checks.begin(), checks.end(),
              [](const json& a, const json& b) { return a.at("group").get<std::size_t>() < b.at("group").get<std::size_t>(); });
    json doc = {{"schema", kSchemaVersion},
                {"frames", frames},
                {"verification",
                 {{"passed", ok}, {"max_norm_deviation", norm_dev}, {"max_spectrum_deviation", spec_dev}, {"groups", checks}}}};
    write_output(opt, doc.dump(2) + "\n", out);
  }
  return ok ? kOk : kInternal;
}

int cmd_verify(const Options& opt, std::ostream& out) {
  if (opt.in_path.empty()) throw UsageError("verify needs --in PATH");
  const json doc = read_document(opt.in_path);
  const auto loaded = solution_from_json(doc);
  auto report = verify_solution(loaded.input, loaded.solution, tolerances(opt));

  if (doc.contains("potentials") && doc.at("potentials").is_object()) {
    Check c;
    c.name = "potentials";
    const auto lam = loaded.solution.lambda.view();
    const json fresh = potentials_json(lam);
    for (const char* key : {"fp", "mse"}) {
      const auto& given = doc.at("potentials").value(key, json(nullptr));
      if (given.is_number() && fresh.at(key).is_number()) {
        const double a = given.get<double>();
        const double b = fresh.at(key).get<double>();
        c.max_deviation = std::max(c.max_deviation, std::abs(a - b) / std::max(1.0, std::abs(b)));
      }
    }
    c.passed = c.max_deviation <= 1e-8;
    report.checks.push_back(c);
  }

  json checks = json::array();
  std::vector<std::string> failed;
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"max_deviation", c.max_deviation}, {"detail", c.detail}});
    if (!c.passed) failed.push_back(c.name);
  }
  json doc_out = {{"schema", kSchemaVersion}, {"passed", report.passed()}, {"failed", failed}, {"checks", checks}};
  write_output(opt, doc_out.dump(2) + "\n", out);
  return report.passed() ? kOk : kVerifyFailed;
}

int cmd_sample(const Options& opt, std::ostream& out) {
  const auto input = inline_input(opt);
  TrialConfig cfg;
  cfg.seed = resolve_seed(opt);
  cfg.trials = opt.trials;
  if (cfg.trials < 1) throw UsageError("--trials must be at least 1");
  const auto rep = optimality_trial(input, cfg);
  json pots = json::array();
  for (const auto& p : rep.potentials) {
    pots.push_back({{"name", p.name},
                    {"optimal", p.optimal},
                    {"min_trial", std::isfinite(p.min_trial) ? json(p.min_trial) : json(nullptr)},
                    {"violations", p.violations}});
  }
  json doc = {{"schema", kSchemaVersion},
              {"seed", cfg.seed},
              {"trials", rep.trials},
              {"majorization_violations", rep.majorization_violations},
              {"potentials", pots},
              {"violations", rep.violations()},
              {"passed", rep.passed()}};
  write_output(opt, doc.dump(2) + "\n", out);
  return rep.passed() ? kOk : kVerifyFailed;
}

int cmd_mono(const Options& opt, std::ostream& out) {
  if (opt.alpha.empty() || opt.beta.empty() || opt.dims.empty()) throw UsageError("mono needs --alpha, --beta and --dims");
  const auto rep = monotonicity_trial(opt.alpha, opt.beta, opt.dims);
  json up = json::array();
  json low = json::array();
  for (const auto& g : rep.upper) up.push_back(vector_json(g.view()));
  for (const auto& g : rep.lower) low.push_back(vector_json(g.view()));
  json doc = {{"schema", kSchemaVersion},
              {"compared", rep.compared},
              {"violations", rep.violations},
              {"max_excess", rep.max_excess},
              {"spectra_alpha", up},
              {"spectra_beta", low},
              {"passed", rep.passed()}};
  write_output(opt, doc.dump(2) + "\n", out);
  return rep.passed() ? kOk : kVerifyFailed;
}

}  // namespace

json solution_to_json(const ProblemInput& input, const PartitionSolution& sol) {
  json spectra_user = json::array();
  for (std::size_t j = 0; j < input.m(); ++j) {
    spectra_user.push_back(vector_json(sol.spectra[input.dims_perm()[j]].view()));
  }
  json spectra_canon = json::array();
  for (const auto& g : sol.spectra) spectra_canon.push_back(vector_json(g.view()));

  return {{"schema", kSchemaVersion},
          {"alpha", user_alpha(input)},
          {"dims", user_dims(input)},
          {"partition", rows_json(to_user_order(input, sol.partition))},
          {"spectra", spectra_user},
          {"lambda_sorted", vector_json(sol.lambda.view())},
          {"blocks",
           {{"p", sol.blocks.p}, {"levels", sol.blocks.levels}, {"mults", sol.blocks.mults}, {"cuts", sol.blocks.cuts}}},
          {"t_seq", sol.t_seq},
          {"stop_iteration", sol.stop_iteration},
          {"potentials", potentials_json(sol.lambda.view())},
          {"canonical",
           {{"alpha", vector_json(input.alpha().view())},
            {"dims", input.dims()},
            {"alpha_perm", input.alpha_perm()},
            {"dims_perm", input.dims_perm()},
            {"partition", rows_json(sol.partition)},
            {"spectra", spectra_canon}}}};
}

LoadedSolution solution_from_json(const json& doc) {
  if (!doc.is_object()) throw UsageError("solution document must be a JSON object");
  check_schema(doc);
  const auto alpha = read_array<double>(doc, "alpha");
  const auto dims = read_array<std::size_t>(doc, "dims");
  auto input = ProblemInput::create(alpha, dims);
  const std::size_t n = input.n();
  const std::size_t m = input.m();

  const auto rows = read_array<std::vector<double>>(doc, "partition");
  if (rows.size() != n) throw DimensionError("partition must have one row per weight");
  WeightPartition user(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != m) throw DimensionError("partition must have one column per dimension");
    for (std::size_t j = 0; j < m; ++j) user(i, j) = rows[i][j];
  }

  PartitionSolution sol;
  sol.partition = from_user_order(input, user);
  sol.spectra.resize(m);
  if (doc.contains("spectra")) {
    const auto sp = read_array<std::vector<double>>(doc, "spectra");
    if (sp.size() != m) throw DimensionError("spectra must have one entry per group");
    for (std::size_t j = 0; j < m; ++j) sol.spectra[input.dims_perm()[j]] = SortedVector(sp[j]);
  } else {
    for (std::size_t c = 0; c < m; ++c) {
      const auto col = SortedVector::sorting(sol.partition.column(c));
      sol.spectra[c] = water_fill(col, input.dims()[c]).gamma;
    }
  }
  if (doc.contains("lambda_sorted")) {
    sol.lambda = SortedVector(read_array<double>(doc, "lambda_sorted"));
  } else {
    sol.lambda = concatenated_spectrum(sol.spectra);
  }
  if (doc.contains("t_seq")) sol.t_seq = read_array<double>(doc, "t_seq");
  if (doc.contains("stop_iteration")) sol.stop_iteration = doc.at("stop_iteration").get<std::size_t>();
  if (doc.contains("blocks") && doc.at("blocks").is_object()) {
    const auto& b = doc.at("blocks");
    sol.blocks.p = b.value("p", std::size_t{0});
    sol.blocks.levels = read_array<double>(b, "levels");
    sol.blocks.mults = read_array<std::size_t>(b, "mults");
    sol.blocks.cuts = read_array<std::size_t>(b, "cuts");
  }
  return {std::move(input), std::move(sol)};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal frame designs for multiple subspaces"};
  app.require_subcommand(1);
  Options opt;

  auto add_problem = [&opt](CLI::App* sub) {
    sub->add_option("--alpha", opt.alpha, "weights, comma separated")->delimiter(',');
    sub->add_option("--dims", opt.dims, "dimensions, comma separated")->delimiter(',');
    sub->add_option("--tol-t", opt.tol_t, "relative bisection tolerance");
    sub->add_option("--tol-flat", opt.tol_flat, "relative flatness tolerance");
  };
  auto add_out = [&opt](CLI::App* sub) { sub->add_option("--out", opt.out_path, "write output to PATH"); };
  auto add_format = [&opt](CLI::App* sub) {
    sub->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* solve_cmd = app.add_subcommand("solve", "optimal partition and spectra");
  add_problem(solve_cmd);
  add_format(solve_cmd);
  add_out(solve_cmd);
  solve_cmd->add_option("--plot-data", opt.plot_path, "CSV of water-filling profiles");

  auto* synth_cmd = app.add_subcommand("synth", "frame matrices for the optimal design");
  add_problem(synth_cmd);
  add_format(synth_cmd);
  add_out(synth_cmd);
  synth_cmd->add_option("--in", opt.in_path, "solution JSON (- for stdin)");

  auto* verify_cmd = app.add_subcommand("verify", "recheck a solution document");
  verify_cmd->add_option("--in", opt.in_path, "solution JSON (- for stdin)")->required();
  verify_cmd->add_option("--tol-t", opt.tol_t, "relative bisection tolerance");
  verify_cmd->add_option("--tol-flat", opt.tol_flat, "relative flatness tolerance");
  add_out(verify_cmd);

  auto* sample_cmd = app.add_subcommand("sample", "compare against random designs");
  add_problem(sample_cmd);
  add_out(sample_cmd);
  sample_cmd->add_option("--seed", opt.seed, "RNG seed (default $OPTFRAME_SEED, then 1)");
  sample_cmd->add_option("--trials", opt.trials, "number of random designs");

  auto* mono_cmd = app.add_subcommand("mono", "spectral monotonicity for beta <= alpha");
  add_problem(mono_cmd);
  add_out(mono_cmd);
  mono_cmd->add_option("--beta", opt.beta, "smaller weights, comma separated")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(opt, out);
    if (*synth_cmd) return cmd_synth(opt, out);
    if (*verify_cmd) return cmd_verify(opt, out);
    if (*sample_cmd) return cmd_sample(opt, out);
    if (*mono_cmd) return cmd_mono(opt, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InternalInvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"optframe"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace optframe::cli
