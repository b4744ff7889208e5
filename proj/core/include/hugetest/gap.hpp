#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hugetest/bitvector.hpp"
#include "hugetest/codes.hpp"
#include "hugetest/oracle.hpp"
#include "hugetest/permutation.hpp"
#include "hugetest/verdict.hpp"

namespace hugetest {

// b-bit binary representation of `value`, most significant bit first.
BitVector binary_pattern(std::size_t value, std::size_t width);

struct GapSpecialVectors {
  BitVector u;               // 1 0^{N-1}
  std::vector<BitVector> v;  // V_i = 1^{i+1} 0^{N-1-i}, i = 1..b
  std::vector<BitVector> w;  // W_i = 0 b(i) (0^{2^i} 1^{2^i})..., i = 0..t_count-1
};

GapSpecialVectors special_vectors(const GapGeometry& geo);

struct FindPermutationParams {
  double c_fp = 2.0;
};

// pi maps an observed index to its canonical index, so the canonical form
// of an observed vector X is apply_permutation(X, pi.inverse()).
struct PermutationRecovery {
  std::optional<Permutation> pi;
  int failed_step = 0;  // 0 on success, otherwise the failing step (2..6)
  std::string failure;
  std::size_t i_star = 0;
  std::vector<std::size_t> b_prime;
  std::size_t sample_count = 0;  // |X| = |X'|
  double outside_fraction = 0.0;
  OracleCounters counters;

  bool ok() const noexcept { return pi.has_value(); }
  // Observed positions of canonical chunk j (C'_j), in chunk order.
  std::vector<std::size_t> chunk_positions(const GapGeometry& geo, std::size_t j) const;
};

std::size_t find_permutation_sample_count(const GapGeometry& geo, const FindPermutationParams& params);
PermutationRecovery find_permutation(HugeObjectOracle& oracle, const GapGeometry& geo,
                                     const FindPermutationParams& params = {});

struct SupportOneParams {
  double c_samples = 8.0;
  double c_indices = 10.0;
};

struct SupportOneReport {
  Verdict verdict = Verdict::Accept;
  std::size_t samples = 0;
  std::size_t indices = 0;
};

SupportOneReport support_one_test(HugeObjectOracle& oracle, double epsilon, std::uint64_t seed,
                                  const SupportOneParams& params = {});

// A sequence of vectors over {0,1}^dimension accessible one bit at a time.
// A query returns nullopt when the underlying encoding is invalid.
struct DecodedStream {
  std::size_t count = 0;
  std::size_t dimension = 0;
  std::function<std::optional<bool>(std::size_t item, std::size_t index)> query;
};

struct SuppEstParams {
  double c_se = 4.0;
  double c_si = 8.0;
};

struct SuppEstReport {
  Verdict verdict = Verdict::Accept;
  bool invalid_seen = false;
  std::size_t vectors_read = 0;
  std::size_t index_set_size = 0;
  std::size_t distinct = 0;
};

SuppEstReport supp_est(const DecodedStream& stream, std::size_t s, double epsilon, std::uint64_t seed,
                       const SuppEstParams& params = {});

struct AdaptiveParams {
  FindPermutationParams find;
  double c_aa = 4.0;
  double c_ab = 2.0;
  SuppEstParams supp;
};

enum class AdaptiveStage { None, FindPermutation, Validity, TooFewEncodings, InvalidChunk, SupportEstimate };

std::string_view to_string(AdaptiveStage s) noexcept;

struct AdaptiveReport {
  Verdict verdict = Verdict::Reject;
  AdaptiveStage reject_stage = AdaptiveStage::None;
  PermutationRecovery recovery;
  std::size_t validity_samples = 0;
  std::size_t y_count = 0;
  std::size_t y_prime_count = 0;
  std::optional<SuppEstReport> supp;
  OracleCounters counters;
  double query_ratio = 0.0;  // queries / (N log^3 N)
};

AdaptiveReport alg_adaptive(HugeObjectOracle& oracle, const GapCodes& codes, double epsilon, std::uint64_t seed,
                            const AdaptiveParams& params = {});

}  // namespace hugetest
