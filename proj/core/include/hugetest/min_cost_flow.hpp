#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hugetest/wide_int.hpp"

namespace hugetest {

// Balanced transportation problem with integer supplies, demands and costs.
// Solved by successive shortest paths with Johnson potentials.
struct TransportProblem {
  std::vector<std::int64_t> supply;
  std::vector<std::int64_t> demand;
  std::vector<std::int64_t> cost;  // row-major supply.size() x demand.size(), non-negative
};

struct TransportSolution {
  std::vector<std::int64_t> flow;  // row-major, same shape as cost
  Int128 objective = 0;
};

TransportSolution solve_transport(const TransportProblem& problem);

// Minimum-cost perfect matching on a square cost matrix. Returns, for each
// row i, the assigned column.
std::vector<std::size_t> solve_assignment(const std::vector<std::int64_t>& cost, std::size_t size);

}  // namespace hugetest
