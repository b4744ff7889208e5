#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hugetest/bitvector.hpp"
#include "hugetest/distribution.hpp"
#include "hugetest/metrics.hpp"
#include "hugetest/oracle.hpp"
#include "hugetest/verdict.hpp"

namespace hugetest {

// Multipliers for the hidden constants in the sample and query sizes, with
// optional direct overrides.
struct LearnSizing {
  double c_t1 = 3.0;
  double c_t2 = 1.0;
  double c_r = 1.0;
  std::optional<std::size_t> t1;
  std::optional<std::size_t> t2;
  std::optional<std::size_t> r_size;
};

struct ClusterLearnParams {
  double zeta = 0.0;
  double delta = 0.0;
  std::size_t r = 1;
  LearnSizing sizing;
  bool enforce_n_assumption = false;
  // When set, t1 and t2 are derived from this value instead of zeta; the
  // Step (v) threshold still uses zeta.
  std::optional<double> sizing_zeta;

  double epsilon_out() const noexcept { return 17.0 * (delta + zeta); }
  void validate() const;
  std::size_t t1() const;
  std::size_t t2() const;
  std::size_t r_size(std::size_t n) const;
};

enum class LearnTag { Learned, Fail };

struct LearnOutcome {
  LearnTag tag = LearnTag::Fail;
  std::optional<ExplicitDistribution> distribution;
  std::vector<double> weights;  // w_1..w_t1
  double unassigned_fraction = 0.0;  // w_0
  std::size_t unassigned_count = 0;
  std::size_t t1 = 0;
  std::size_t t2 = 0;
  std::size_t r_size = 0;
  double zeta = 0.0;
  std::vector<BitVector> centers;  // S_1..S_t1 (empty on Fail)
  OracleCounters counters;
  bool n_assumption_met = false;
};

struct ClusteredAroundSpec {
  std::vector<BitVector> centers;
  double eta = 0.0;
  double xi = 0.0;
};

struct VcLearnParams {
  std::size_t d = 0;
  double vc_alpha = 0.0;
  double beta = 0.0;
  LearnSizing sizing;

  void validate() const;
  double epsilon_out() const;
};

struct CenterAssignment {
  std::vector<std::optional<std::size_t>> assigned;  // per sample, center index
  std::vector<double> weights;                      // w_1..w_t1
  double unassigned_fraction = 0.0;
  std::size_t unassigned_count = 0;
};

std::vector<std::size_t> round_counts(std::span<const double> alphas, std::size_t n);

CenterAssignment assign_to_centers(std::span<const BitVector> center_projs, std::span<const BitVector> sample_projs,
                                   double delta);

std::vector<BitVector> approx_centers(std::span<const std::size_t> r_indices, std::span<const BitVector> center_projs,
                                      std::size_t n);

LearnOutcome test_and_learn(HugeObjectOracle& oracle, const ClusterLearnParams& params, std::uint64_t seed);

inline constexpr std::size_t kBruteClusterMaxSupport = 12;
bool brute_is_clusterable(const ExplicitDistribution& d, double zeta, double delta, std::size_t r);
bool brute_is_clustered_around(const ExplicitDistribution& d, const ClusteredAroundSpec& spec);

std::uint64_t haussler_radius(std::size_t d, double vc_alpha);

ClusterLearnParams cluster_params_for_vc(const VcLearnParams& p);
LearnOutcome learn_close_vc(HugeObjectOracle& oracle, const VcLearnParams& p, std::uint64_t seed);

struct VcTestReport {
  Verdict verdict = Verdict::Reject;
  LearnOutcome learn;
  std::optional<double> best_distance;  // min EMD over candidates, when learning succeeded
};

VcTestReport test_vc_property(HugeObjectOracle& oracle, std::span<const ExplicitDistribution> candidates,
                              double epsilon, std::size_t d, std::uint64_t seed, LearnSizing sizing = {});

}  // namespace hugetest
