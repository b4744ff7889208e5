#include "hugetest/min_cost_flow.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hugetest/error.hpp"

namespace hugetest {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

}  // namespace

TransportSolution solve_transport(const TransportProblem& problem) {
  const std::size_t s = problem.supply.size();
  const std::size_t t = problem.demand.size();
  if (s == 0 || t == 0) throw InvalidArgument("transport problem with an empty side");
  if (problem.cost.size() != s * t) throw InvalidArgument("transport cost matrix has the wrong shape");
  const std::int64_t total_supply = std::accumulate(problem.supply.begin(), problem.supply.end(), std::int64_t{0});
  const std::int64_t total_demand = std::accumulate(problem.demand.begin(), problem.demand.end(), std::int64_t{0});
  if (total_supply != total_demand) throw InvalidArgument("transport problem is unbalanced");
  for (auto c : problem.cost) {
    if (c < 0) throw InvalidArgument("transport costs must be non-negative");
  }

  // Nodes: supplies [0, s), demands [s, s+t), source s+t, sink s+t+1.
  const std::size_t source = s + t;
  const std::size_t sink = s + t + 1;
  const std::size_t v_count = s + t + 2;
  std::vector<std::int64_t> rem_supply = problem.supply;
  std::vector<std::int64_t> rem_demand = problem.demand;
  std::vector<std::int64_t> flow(s * t, 0);
  std::vector<std::int64_t> potential(v_count, 0);
  std::vector<std::int64_t> dist(v_count);
  std::vector<std::size_t> prev(v_count);
  std::vector<bool> done(v_count);

  std::int64_t remaining = total_supply;
  while (remaining > 0) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), false);
    dist[source] = 0;
    for (;;) {
      std::size_t u = v_count;
      for (std::size_t v = 0; v < v_count; ++v) {
        if (!done[v] && dist[v] < kInf && (u == v_count || dist[v] < dist[u])) u = v;
      }
      if (u == v_count) break;
      done[u] = true;
      auto relax = [&](std::size_t v, std::int64_t cost) {
        const std::int64_t nd = dist[u] + cost + potential[u] - potential[v];
        if (nd < dist[v]) {
          dist[v] = nd;
          prev[v] = u;
        }
      };
      if (u == source) {
        for (std::size_t i = 0; i < s; ++i) {
          if (rem_supply[i] > 0) relax(i, 0);
        }
      } else if (u < s) {
        for (std::size_t j = 0; j < t; ++j) relax(s + j, problem.cost[u * t + j]);
      } else if (u < s + t) {
        const std::size_t j = u - s;
        for (std::size_t i = 0; i < s; ++i) {
          if (flow[i * t + j] > 0) relax(i, -problem.cost[i * t + j]);
        }
        if (rem_demand[j] > 0) relax(sink, 0);
      }
    }
    if (dist[sink] >= kInf) throw std::logic_error("transport problem has no augmenting path");
    for (std::size_t v = 0; v < v_count; ++v) potential[v] += std::min(dist[v], dist[sink]);

    std::int64_t push = kInf;
    for (std::size_t v = sink; v != source; v = prev[v]) {
      const std::size_t u = prev[v];
      if (u == source) {
        push = std::min(push, rem_supply[v]);
      } else if (v == sink) {
        push = std::min(push, rem_demand[u - s]);
      } else if (u >= s) {
        push = std::min(push, flow[v * t + (u - s)]);
      }
    }
    for (std::size_t v = sink; v != source; v = prev[v]) {
      const std::size_t u = prev[v];
      if (u == source) {
        rem_supply[v] -= push;
      } else if (v == sink) {
        rem_demand[u - s] -= push;
      } else if (u < s) {
        flow[u * t + (v - s)] += push;
      } else {
        flow[v * t + (u - s)] -= push;
      }
    }
    remaining -= push;
  }

  TransportSolution out;
  out.flow = std::move(flow);
  for (std::size_t k = 0; k < out.flow.size(); ++k) {
    out.objective += static_cast<Int128>(out.flow[k]) * problem.cost[k];
  }
  return out;
}

std::vector<std::size_t> solve_assignment(const std::vector<std::int64_t>& cost, std::size_t size) {
  if (size == 0) return {};
  if (cost.size() != size * size) throw InvalidArgument("assignment cost matrix is not square");
  // Shortest augmenting path with row/column potentials, 1-indexed internally.
  const std::size_t n = size;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace hugetest
