#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "optframe/partition.hpp"

namespace fixtures {

struct Instance {
  std::vector<double> alpha;
  std::vector<std::size_t> dims;
};

inline const Instance kTwoGroups{{10, 10, 10, 1, 1}, {4, 2}};
inline const Instance kElevenHigh{{9, 8, 7, 5, 4, 2.5, 2, 2, 1.5, 0.6, 0.5}, {7, 5, 3}};
inline const Instance kElevenLow{{8.5, 7, 6, 4, 3.8, 2, 1.6, 1.4, 1, 0.5, 0.4}, {7, 5, 3}};
inline const Instance kFiveGroups{{20, 19.5, 10, 5, 4.5, 3, 2.4, 2}, {5, 4, 4, 3, 2}};
inline const Instance kUniformSix{{1, 1, 1, 1, 1, 1}, {4, 2}};

// Reference optimal partitions, four decimals.
inline const std::vector<std::vector<double>> kElevenHighTable{
    {3, 3, 3},
    {2.7583, 2.7583, 2.4833},
    {2.7583, 2.7583, 1.4833},
    {2.7583, 1.8135, 0.4282},
    {2.5267, 1.1307, 0.3425},
    {1.5792, 0.7067, 0.2141},
    {1.2634, 0.5654, 0.1713},
    {1.2634, 0.5654, 0.1713},
    {0.9475, 0.4240, 0.1285},
    {0.3790, 0.1696, 0.0514},
    {0.3158, 0.1413, 0.0428},
};

inline const std::vector<std::vector<double>> kFiveGroupsTable{
    {4, 4, 4, 4, 4},
    {3.9, 3.9, 3.9, 3.9, 3.9},
    {3.3625, 2.8875, 2.5, 1.25, 0},
    {1.9896, 1.1354, 1.25, 0.625, 0},
    {1.7907, 1.0218, 1.125, 0.5625, 0},
    {1.1938, 0.6812, 0.75, 0.375, 0},
    {0.955, 0.545, 0.6, 0.3, 0},
    {0.7959, 0.4541, 0.5, 0.25, 0},
};

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double table_deviation(const optframe::WeightPartition& a, const std::vector<std::vector<double>>& t) {
  if (a.rows() != t.size()) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (a.cols() != t[i].size()) return INFINITY;
    for (std::size_t j = 0; j < t[i].size(); ++j) d = std::max(d, std::abs(a(i, j) - t[i][j]));
  }
  return d;
}

inline optframe::PartitionSolution solve(const Instance& inst) {
  return optframe::solve(optframe::ProblemInput::create(inst.alpha, inst.dims));
}

}  // namespace fixtures
