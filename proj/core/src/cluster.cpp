#include "hugetest/cluster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "hugetest/error.hpp"
#include "hugetest/rng.hpp"

namespace hugetest {

namespace {

constexpr double kDistanceSlack = 1e-9;

std::size_t ceil_positive(double x) {
  if (!(x < 9.0e18)) throw InvalidArgument("derived size does not fit in an integer");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(x - 1e-9)));
}

}  // namespace

void ClusterLearnParams::validate() const {
  if (!(zeta > 0.0 && zeta < 1.0)) throw InvalidArgument("zeta must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
  if (r == 0) throw InvalidArgument("r must be positive");
  if (!(epsilon_out() < 1.0)) throw InvalidArgument("17*(delta+zeta) must be below 1");
  if (!(sizing.c_t1 > 0.0 && sizing.c_t2 > 0.0 && sizing.c_r > 0.0)) {
    throw InvalidArgument("size multipliers must be positive");
  }
  if (sizing_zeta && !(*sizing_zeta > 0.0 && *sizing_zeta < 1.0)) throw InvalidArgument("sizing zeta must lie in (0,1)");
}

std::size_t ClusterLearnParams::t1() const {
  if (sizing.t1) {
    if (*sizing.t1 == 0) throw InvalidArgument("t1 override must be positive");
    return *sizing.t1;
  }
  const double z = sizing_zeta.value_or(zeta);
  const double ratio = static_cast<double>(r) / z;
  return std::max(r, ceil_positive(sizing.c_t1 * ratio * std::log(ratio)));
}

std::size_t ClusterLearnParams::t2() const {
  if (sizing.t2) {
    if (*sizing.t2 == 0) throw InvalidArgument("t2 override must be positive");
    return *sizing.t2;
  }
  const double z = sizing_zeta.value_or(zeta);
  const double t = static_cast<double>(t1());
  return ceil_positive(sizing.c_t2 * (t * t) / (z * z) * std::log(std::max(t, 2.0)));
}

std::size_t ClusterLearnParams::r_size(std::size_t n) const {
  if (sizing.r_size) {
    if (*sizing.r_size == 0) throw InvalidArgument("R size override must be positive");
    return std::min(*sizing.r_size, n);
  }
  const double z = sizing_zeta.value_or(zeta);
  const double inner = std::log(static_cast<double>(r) / (delta * z));
  const double log_size = static_cast<double>(t1()) * std::log(4.0) - 2.0 * std::log(delta) - std::log(z) +
                          std::log(std::max(inner, 1e-300)) + std::log(sizing.c_r);
  if (log_size >= std::log(static_cast<double>(n))) return n;
  return std::min(n, ceil_positive(std::exp(log_size)));
}

void VcLearnParams::validate() const {
  if (!(vc_alpha > 0.0 && vc_alpha < 1.0)) throw InvalidArgument("vc_alpha must lie in (0,1)");
  if (!(beta >= 0.0 && beta < vc_alpha)) throw InvalidArgument("beta must lie in [0, vc_alpha)");
  if (!(epsilon_out() < 1.0)) throw InvalidArgument("17*(3*vc_alpha + beta/vc_alpha) must be below 1");
}

double VcLearnParams::epsilon_out() const { return 17.0 * (3.0 * vc_alpha + beta / vc_alpha); }

std::vector<std::size_t> round_counts(std::span<const double> alphas, std::size_t n) {
  long double total = 0.0L;
  for (double a : alphas) {
    if (!(a >= 0.0)) throw InvalidArgument("round_counts needs non-negative inputs");
    total += a;
  }
  if (std::fabs(static_cast<double>(total) - static_cast<double>(n)) > 1e-9) {
    throw InvalidArgument("round_counts inputs do not sum to n");
  }
  std::vector<std::size_t> out(alphas.size());
  std::vector<double> frac(alphas.size());
  std::size_t floor_sum = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double f = std::floor(alphas[i]);
    out[i] = static_cast<std::size_t>(f);
    frac[i] = alphas[i] - f;
    floor_sum += out[i];
  }
  std::size_t remaining = n >= floor_sum ? n - floor_sum : 0;
  std::vector<std::size_t> order(alphas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; k < order.size() && remaining > 0; ++k) {
    if (frac[order[k]] > 0.0) {
      ++out[order[k]];
      --remaining;
    }
  }
  if (remaining != 0) throw InvalidArgument("round_counts could not reach n with floor/ceiling choices");
  return out;
}

CenterAssignment assign_to_centers(std::span<const BitVector> center_projs, std::span<const BitVector> sample_projs,
                                   double delta) {
  CenterAssignment out;
  out.assigned.resize(sample_projs.size());
  out.weights.assign(center_projs.size(), 0.0);
  std::vector<std::size_t> counts(center_projs.size(), 0);
  for (std::size_t j = 0; j < sample_projs.size(); ++j) {
    const BitVector& y = sample_projs[j];
    const double limit = 2.0 * delta * static_cast<double>(y.size()) + kDistanceSlack;
    for (std::size_t i = 0; i < center_projs.size(); ++i) {
      if (static_cast<double>(hamming_abs(center_projs[i], y)) <= limit) {
        out.assigned[j] = i;
        ++counts[i];
        break;
      }
    }
    if (!out.assigned[j]) ++out.unassigned_count;
  }
  if (!sample_projs.empty()) {
    const double t2 = static_cast<double>(sample_projs.size());
    for (std::size_t i = 0; i < counts.size(); ++i) out.weights[i] = static_cast<double>(counts[i]) / t2;
    out.unassigned_fraction = static_cast<double>(out.unassigned_count) / t2;
  }
  return out;
}

std::vector<BitVector> approx_centers(std::span<const std::size_t> r_indices, std::span<const BitVector> center_projs,
                                      std::size_t n) {
  if (r_indices.empty()) throw InvalidArgument("Approx-Centers needs a non-empty index set");
  if (center_projs.empty()) throw InvalidArgument("Approx-Centers needs at least one center");
  const std::size_t t1 = center_projs.size();
  const std::size_t width = r_indices.size();
  for (const auto& c : center_projs) {
    if (c.size() != width) throw InvalidArgument("center projection length differs from |R|");
  }
  std::map<BitVector, std::size_t> type_counts;
  for (std::size_t col = 0; col < width; ++col) {
    BitVector type(t1);
    for (std::size_t i = 0; i < t1; ++i) {
      if (center_projs[i][col]) type.set(i, true);
    }
    ++type_counts[type];
  }
  std::vector<double> alphas;
  alphas.reserve(type_counts.size());
  for (const auto& [type, count] : type_counts) {
    alphas.push_back(static_cast<double>(count) / static_cast<double>(width) * static_cast<double>(n));
  }
  // Guard against drift so that the sum is exactly n for round_counts.
  const double drift = static_cast<double>(n) - std::accumulate(alphas.begin(), alphas.end(), 0.0);
  alphas.back() = std::max(0.0, alphas.back() + drift);
  const auto gamma = round_counts(alphas, n);

  std::vector<BitVector> rows(t1, BitVector(n));
  std::size_t col = 0;
  std::size_t type_index = 0;
  for (const auto& [type, count] : type_counts) {
    for (std::size_t copy = 0; copy < gamma[type_index]; ++copy, ++col) {
      for (std::size_t i = 0; i < t1; ++i) {
        if (type[i]) rows[i].set(col, true);
      }
    }
    ++type_index;
  }
  return rows;
}

LearnOutcome test_and_learn(HugeObjectOracle& oracle, const ClusterLearnParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = oracle.dimension();
  LearnOutcome out;
  out.t1 = params.t1();
  out.t2 = params.t2();
  out.r_size = params.r_size(n);
  out.zeta = params.zeta;
  const double log_needed = std::log(20.0) + static_cast<double>(out.t1) * std::log(2.0) - std::log(params.delta);
  out.n_assumption_met = std::log(static_cast<double>(n)) >= log_needed;
  if (params.enforce_n_assumption && !out.n_assumption_met) {
    throw InvalidArgument("precondition n >= 20*2^t1/delta does not hold");
  }

  Rng rng(seed);
  const OracleCounters before = oracle.counters();
  std::vector<SampleId> center_ids;
  std::vector<SampleId> sample_ids;
  center_ids.reserve(out.t1);
  sample_ids.reserve(out.t2);
  for (std::size_t i = 0; i < out.t1; ++i) center_ids.push_back(oracle.draw_sample());
  for (std::size_t j = 0; j < out.t2; ++j) sample_ids.push_back(oracle.draw_sample());
  const auto r_indices = rng.sample_without_replacement(n, out.r_size);

  std::vector<BitVector> center_projs;
  std::vector<BitVector> sample_projs;
  center_projs.reserve(out.t1);
  sample_projs.reserve(out.t2);
  for (auto sid : center_ids) center_projs.push_back(oracle.query_many(sid, r_indices));
  for (auto sid : sample_ids) sample_projs.push_back(oracle.query_many(sid, r_indices));

  const CenterAssignment assignment = assign_to_centers(center_projs, sample_projs, params.delta);
  out.weights = assignment.weights;
  out.unassigned_fraction = assignment.unassigned_fraction;
  out.unassigned_count = assignment.unassigned_count;
  out.counters = {oracle.samples_taken() - before.samples_taken, oracle.queries_made() - before.queries_made};
  if (out.unassigned_fraction > 3.0 * params.zeta) {
    out.tag = LearnTag::Fail;
    return out;
  }

  out.centers = approx_centers(r_indices, center_projs, n);
  DistributionBuilder builder(n);
  for (std::size_t i = 0; i < out.t1; ++i) builder.add(out.centers[i], out.weights[i]);
  builder.add(out.centers.front(), out.unassigned_fraction);
  out.distribution = builder.build_normalized();
  out.tag = LearnTag::Learned;
  return out;
}

bool brute_is_clusterable(const ExplicitDistribution& d, double zeta, double delta, std::size_t r) {
  const std::size_t m = d.support_size();
  if (m > kBruteClusterMaxSupport) throw InvalidArgument("exhaustive clusterability check supports at most 12 points");
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<std::size_t> compatible(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (hamming_norm(d.atom(i).point, d.atom(j).point) <= delta + 1e-12) compatible[i] |= std::size_t{1} << j;
    }
  }
  std::vector<bool> clique(full + 1, false);
  clique[0] = true;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    const std::size_t rest = mask & (mask - 1);
    clique[mask] = clique[rest] && (rest & ~compatible[low]) == 0;
  }
  constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max() / 2;
  std::vector<std::size_t> cover(full + 1, kUnreachable);
  cover[0] = 0;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    const std::size_t low = mask & (~mask + 1);
    const std::size_t others = mask ^ low;
    // Enumerate parts that contain the lowest point of `mask`.
    for (std::size_t sub = others;; sub = (sub - 1) & others) {
      const std::size_t part = sub | low;
      if (clique[part]) cover[mask] = std::min(cover[mask], cover[mask ^ part] + 1);
      if (sub == 0) break;
    }
  }
  for (std::size_t covered = 0; covered <= full; ++covered) {
    if (cover[covered] > r) continue;
    double leftover = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!((covered >> i) & 1u)) leftover += d.atom(i).mass;
    }
    if (leftover <= zeta + 1e-12) return true;
  }
  return false;
}

bool brute_is_clustered_around(const ExplicitDistribution& d, const ClusteredAroundSpec& spec) {
  if (d.support_size() > 64) throw InvalidArgument("clustered-around check supports at most 64 points");
  double inside = 0.0;
  for (const auto& a : d.atoms()) {
    for (const auto& c : spec.centers) {
      if (hamming_norm(a.point, c) <= spec.eta + 1e-12) {
        inside += a.mass;
        break;
      }
    }
  }
  return inside >= 1.0 - spec.xi - 1e-12;
}

std::uint64_t haussler_radius(std::size_t d, double vc_alpha) {
  if (!(vc_alpha > 0.0 && vc_alpha <= 1.0)) throw InvalidArgument("vc_alpha must lie in (0,1]");
  const long double e = std::exp(1.0L);
  const long double log_value = 1.0L + std::log(static_cast<long double>(d) + 1.0L) +
                                static_cast<long double>(d) * std::log(2.0L * e / static_cast<long double>(vc_alpha));
  if (log_value > 62.0L * std::log(2.0L)) throw std::overflow_error("Haussler radius exceeds the integer range");
  const long double value = e * (static_cast<long double>(d) + 1.0L) *
                            std::pow(2.0L * e / static_cast<long double>(vc_alpha), static_cast<long double>(d));
  return static_cast<std::uint64_t>(std::floor(value));
}

ClusterLearnParams cluster_params_for_vc(const VcLearnParams& p) {
  p.validate();
  ClusterLearnParams c;
  c.delta = 3.0 * p.vc_alpha;
  c.r = static_cast<std::size_t>(haussler_radius(p.d, p.vc_alpha));
  c.sizing = p.sizing;
  if (p.beta > 0.0) {
    c.zeta = p.beta / p.vc_alpha;
  } else {
    c.sizing_zeta = c.delta;
    c.zeta = c.delta;  // provisional, only to size t2
    c.zeta = 1.0 / static_cast<double>(c.t2());
  }
  return c;
}

LearnOutcome learn_close_vc(HugeObjectOracle& oracle, const VcLearnParams& p, std::uint64_t seed) {
  return test_and_learn(oracle, cluster_params_for_vc(p), seed);
}

VcTestReport test_vc_property(HugeObjectOracle& oracle, std::span<const ExplicitDistribution> candidates,
                              double epsilon, std::size_t d, std::uint64_t seed, LearnSizing sizing) {
  if (candidates.empty()) throw InvalidArgument("candidate set is empty");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  for (const auto& c : candidates) {
    if (c.dimension() != oracle.dimension()) throw InvalidArgument("candidate dimension differs from the oracle");
  }
  VcLearnParams p{d, epsilon / 102.0, 0.0, sizing};
  VcTestReport report;
  report.learn = learn_close_vc(oracle, p, seed);
  if (report.learn.tag == LearnTag::Fail) return report;
  const PermutationSearch mode = oracle.dimension() <= kExactPermutationMaxDimension ? PermutationSearch::Exact
                                                                                      : PermutationSearch::Heuristic;
  double best = 2.0;
  for (const auto& c : candidates) {
    best = std::min(best, emd_up_to_index_permutation(*report.learn.distribution, c, mode));
    if (best <= epsilon / 2.0) break;
  }
  report.best_distance = best;
  report.verdict = best <= epsilon / 2.0 ? Verdict::Accept : Verdict::Reject;
  return report;
}

}  // namespace hugetest
