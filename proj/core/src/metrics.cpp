#include "hugetest/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "hugetest/error.hpp"
#include "hugetest/min_cost_flow.hpp"

namespace hugetest {

namespace {

constexpr double kMassScale = 1099511627776.0;  // 2^40

std::vector<std::int64_t> integer_masses(const ExplicitDistribution& d) {
  std::vector<std::int64_t> units;
  units.reserve(d.support_size());
  const auto target = static_cast<std::int64_t>(kMassScale);
  std::int64_t total = 0;
  std::size_t heaviest = 0;
  for (std::size_t i = 0; i < d.support_size(); ++i) {
    units.push_back(std::max<std::int64_t>(1, std::llround(d.atom(i).mass * kMassScale)));
    total += units.back();
    if (units[i] > units[heaviest]) heaviest = i;
  }
  units[heaviest] += target - total;
  if (units[heaviest] <= 0) throw std::logic_error("mass integerisation produced a non-positive unit count");
  return units;
}

void require_same_dimension(const ExplicitDistribution& a, const ExplicitDistribution& b) {
  if (a.dimension() != b.dimension()) throw InvalidArgument("distributions have different dimensions");
}

}  // namespace

double hamming_norm(const BitVector& u, const BitVector& v) {
  if (u.size() != v.size()) throw InvalidArgument("hamming distance of vectors with different lengths");
  if (u.empty()) throw InvalidArgument("hamming distance of empty vectors");
  return static_cast<double>(hamming_abs(u, v)) / static_cast<double>(u.size());
}

double projected_distance(const BitVector& u, const BitVector& v, std::span<const std::size_t> indices) {
  if (indices.empty()) throw InvalidArgument("projected distance over an empty index set");
  if (u.size() != v.size()) throw InvalidArgument("projected distance of vectors with different lengths");
  std::size_t differ = 0;
  for (auto j : indices) {
    if (j >= u.size()) throw InvalidArgument("projection index out of range");
    differ += u[j] != v[j] ? 1 : 0;
  }
  return static_cast<double>(differ) / static_cast<double>(indices.size());
}

CorrespondingMatrix::CorrespondingMatrix(std::vector<BitVector> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw InvalidArgument("corresponding matrix needs at least one row");
  for (const auto& r : rows_) {
    if (r.size() != rows_.front().size() || r.empty()) throw InvalidArgument("matrix rows differ in length");
  }
}

CorrespondingMatrix CorrespondingMatrix::from_distribution(const ExplicitDistribution& d, std::size_t rows) {
  std::vector<BitVector> out;
  out.reserve(rows);
  for (const auto& a : d.atoms()) {
    const double copies = a.mass * static_cast<double>(rows);
    const auto rounded = static_cast<std::size_t>(std::llround(copies));
    if (std::fabs(copies - static_cast<double>(rounded)) > 1e-9) {
      throw InvalidArgument("distribution masses are not multiples of 1/rows");
    }
    for (std::size_t c = 0; c < rounded; ++c) out.push_back(a.point);
  }
  if (out.size() != rows) throw InvalidArgument("row count does not match distribution masses");
  return CorrespondingMatrix(std::move(out));
}

ExplicitDistribution CorrespondingMatrix::to_distribution() const { return ExplicitDistribution::uniform(rows_); }

BitVector CorrespondingMatrix::column(std::size_t j) const {
  if (j >= cols()) throw InvalidArgument("column index out of range");
  BitVector c(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i][j]) c.set(i, true);
  }
  return c;
}

EmdResult emd_exact(const ExplicitDistribution& d1, const ExplicitDistribution& d2) {
  require_same_dimension(d1, d2);
  TransportProblem problem;
  problem.supply = integer_masses(d1);
  problem.demand = integer_masses(d2);
  const std::size_t s = d1.support_size();
  const std::size_t t = d2.support_size();
  problem.cost.resize(s * t);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      problem.cost[i * t + j] = static_cast<std::int64_t>(hamming_abs(d1.atom(i).point, d2.atom(j).point));
    }
  }
  const TransportSolution solved = solve_transport(problem);
  EmdResult out;
  const long double denom = static_cast<long double>(kMassScale) * static_cast<long double>(d1.dimension());
  out.value = static_cast<double>(static_cast<long double>(solved.objective) / denom);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      const std::int64_t f = solved.flow[i * t + j];
      if (f > 0) out.flow.pairs.push_back({i, j, static_cast<double>(f) / kMassScale});
    }
  }
  out.flow.objective = out.value;
  return out;
}

double emd(const ExplicitDistribution& d1, const ExplicitDistribution& d2) { return emd_exact(d1, d2).value; }

double verify_flow(const ExplicitDistribution& d1, const ExplicitDistribution& d2, const FlowSolution& flow,
                   double tolerance) {
  require_same_dimension(d1, d2);
  std::vector<long double> out_mass(d1.support_size(), 0.0L);
  std::vector<long double> in_mass(d2.support_size(), 0.0L);
  long double objective = 0.0L;
  for (const auto& p : flow.pairs) {
    if (p.source >= out_mass.size() || p.target >= in_mass.size()) throw std::logic_error("flow pair out of range");
    if (p.mass < 0.0) throw std::logic_error("negative flow");
    out_mass[p.source] += p.mass;
    in_mass[p.target] += p.mass;
    objective += p.mass * static_cast<long double>(hamming_norm(d1.atom(p.source).point, d2.atom(p.target).point));
  }
  for (std::size_t i = 0; i < out_mass.size(); ++i) {
    if (std::fabs(static_cast<double>(out_mass[i]) - d1.atom(i).mass) > tolerance) {
      throw std::logic_error("flow source marginal mismatch");
    }
  }
  for (std::size_t j = 0; j < in_mass.size(); ++j) {
    if (std::fabs(static_cast<double>(in_mass[j]) - d2.atom(j).mass) > tolerance) {
      throw std::logic_error("flow target marginal mismatch");
    }
  }
  return static_cast<double>(objective);
}

double l1_distance(const ExplicitDistribution& d1, const ExplicitDistribution& d2) {
  require_same_dimension(d1, d2);
  std::map<BitVector, double> diff;
  for (const auto& a : d1.atoms()) diff[a.point] += a.mass;
  for (const auto& a : d2.atoms()) diff[a.point] -= a.mass;
  double total = 0.0;
  for (const auto& [v, m] : diff) total += std::fabs(m);
  return total;
}

double min_perm_matrix_distance(const CorrespondingMatrix& l, const CorrespondingMatrix& m) {
  if (l.rows() != m.rows() || l.cols() != m.cols()) throw InvalidArgument("matrices have different shapes");
  const std::size_t s = l.rows();
  std::vector<std::int64_t> cost(s * s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) cost[i * s + j] = static_cast<std::int64_t>(hamming_abs(l.row(i), m.row(j)));
  }
  const auto match = solve_assignment(cost, s);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < s; ++i) total += cost[i * s + match[i]];
  return static_cast<double>(total) / (static_cast<double>(s) * static_cast<double>(l.cols()));
}

namespace {

PermutedEmd exact_permuted_emd(const ExplicitDistribution& d1, const ExplicitDistribution& d2) {
  const std::size_t n = d1.dimension();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  PermutedEmd best{2.0, Permutation::identity(n)};
  do {
    Permutation sigma(perm);
    const double value = emd(d1, permute_distribution(d2, sigma));
    if (value < best.value) best = {value, sigma};
    if (best.value <= 0.0) break;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Couples d1 and d2 by mass rank (heaviest with heaviest), splitting atoms as
// needed, like aligning two sorted corresponding matrices row by row.
std::vector<FlowPair> rank_coupling(const ExplicitDistribution& d1, const ExplicitDistribution& d2) {
  auto order = [](const ExplicitDistribution& d) {
    std::vector<std::size_t> idx(d.support_size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d.atom(a).mass > d.atom(b).mass; });
    return idx;
  };
  const auto o1 = order(d1);
  const auto o2 = order(d2);
  std::vector<FlowPair> pairs;
  std::size_t a = 0;
  std::size_t b = 0;
  double left1 = d1.atom(o1[0]).mass;
  double left2 = d2.atom(o2[0]).mass;
  while (a < o1.size() && b < o2.size()) {
    const double moved = std::min(left1, left2);
    if (moved > 0.0) pairs.push_back({o1[a], o2[b], moved});
    left1 -= moved;
    left2 -= moved;
    if (left1 <= 1e-15 && ++a < o1.size()) left1 = d1.atom(o1[a]).mass;
    if (left2 <= 1e-15 && ++b < o2.size()) left2 = d2.atom(o2[b]).mass;
  }
  return pairs;
}

// Given a row coupling, groups columns of each side by their pattern over the
// coupled rows and matches the column types by a small transport problem.
Permutation sigma_from_coupling(const ExplicitDistribution& d1, const ExplicitDistribution& d2,
                                const std::vector<FlowPair>& pairs) {
  const std::size_t n = d1.dimension();
  const std::size_t p_count = pairs.size();
  std::map<BitVector, std::vector<std::size_t>> types1;
  std::map<BitVector, std::vector<std::size_t>> types2;
  for (std::size_t j = 0; j < n; ++j) {
    BitVector c1(p_count);
    BitVector c2(p_count);
    for (std::size_t p = 0; p < p_count; ++p) {
      if (d1.atom(pairs[p].source).point[j]) c1.set(p, true);
      if (d2.atom(pairs[p].target).point[j]) c2.set(p, true);
    }
    types1[c1].push_back(j);
    types2[c2].push_back(j);
  }
  std::vector<std::pair<const BitVector*, const std::vector<std::size_t>*>> t1;
  std::vector<std::pair<const BitVector*, const std::vector<std::size_t>*>> t2;
  for (const auto& [k, v] : types1) t1.emplace_back(&k, &v);
  for (const auto& [k, v] : types2) t2.emplace_back(&k, &v);

  TransportProblem problem;
  for (const auto& t : t1) problem.supply.push_back(static_cast<std::int64_t>(t.second->size()));
  for (const auto& t : t2) problem.demand.push_back(static_cast<std::int64_t>(t.second->size()));
  problem.cost.resize(t1.size() * t2.size());
  for (std::size_t a = 0; a < t1.size(); ++a) {
    for (std::size_t b = 0; b < t2.size(); ++b) {
      double c = 0.0;
      for (std::size_t p = 0; p < p_count; ++p) {
        if ((*t1[a].first)[p] != (*t2[b].first)[p]) c += pairs[p].mass;
      }
      problem.cost[a * t2.size() + b] = std::llround(c * 1073741824.0);
    }
  }
  const auto solved = solve_transport(problem);
  std::vector<std::size_t> sigma(n);
  std::vector<std::size_t> used2(t2.size(), 0);
  for (std::size_t a = 0; a < t1.size(); ++a) {
    std::size_t used1 = 0;
    for (std::size_t b = 0; b < t2.size(); ++b) {
      for (std::int64_t f = 0; f < solved.flow[a * t2.size() + b]; ++f) {
        sigma[(*t1[a].second)[used1++]] = (*t2[b].second)[used2[b]++];
      }
    }
  }
  return Permutation(std::move(sigma));
}

PermutedEmd heuristic_permuted_emd(const ExplicitDistribution& d1, const ExplicitDistribution& d2) {
  const std::size_t n = d1.dimension();
  PermutedEmd best{emd(d1, d2), Permutation::identity(n)};
  const std::vector<std::vector<FlowPair>> starts = {rank_coupling(d1, d2), emd_exact(d1, d2).flow.pairs};
  for (const auto& start : starts) {
    std::vector<FlowPair> pairs = start;
    double previous = 2.0;
    for (int round = 0; round < 8 && best.value > 0.0; ++round) {
      Permutation sigma = sigma_from_coupling(d1, d2, pairs);
      EmdResult r = emd_exact(d1, permute_distribution(d2, sigma));
      if (r.value < best.value) best = {r.value, sigma};
      if (r.value >= previous - 1e-15) break;
      previous = r.value;
      // Re-express the coupling against the original d2 atoms; permuting
      // preserves atom order, so target indices carry over unchanged.
      pairs = std::move(r.flow.pairs);
    }
  }
  return best;
}

}  // namespace

PermutedEmd emd_up_to_index_permutation_detail(const ExplicitDistribution& d1, const ExplicitDistribution& d2,
                                               PermutationSearch mode) {
  require_same_dimension(d1, d2);
  if (mode == PermutationSearch::Exact) {
    if (d1.dimension() > kExactPermutationMaxDimension) {
      throw InvalidArgument("exact permutation search supports dimension at most 8");
    }
    return exact_permuted_emd(d1, d2);
  }
  return heuristic_permuted_emd(d1, d2);
}

double emd_up_to_index_permutation(const ExplicitDistribution& d1, const ExplicitDistribution& d2,
                                   PermutationSearch mode) {
  return emd_up_to_index_permutation_detail(d1, d2, mode).value;
}

}  // namespace hugetest
