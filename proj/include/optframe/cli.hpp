#pragma once

// Command-line front end: solve, synth, verify, sample, mono.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or input error,
// 3 internal error.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "optframe/partition.hpp"

namespace optframe::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kInternal = 3 };

inline constexpr int kSchemaVersion = 1;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Solution document in the caller's index order, with a "canonical" section
/// holding the sorted data and the permutations.
nlohmann::json solution_to_json(const ProblemInput& input, const PartitionSolution& solution);

struct LoadedSolution {
  ProblemInput input;
  PartitionSolution solution;
};

/// Reads alpha, dims and partition (required) plus spectra, lambda_sorted,
/// blocks, t_seq and stop_iteration when present. Missing spectra are
/// recomputed from the partition columns. Throws InvalidInput on malformed
/// documents.
LoadedSolution solution_from_json(const nlohmann::json& doc);

}  // namespace optframe::cli
