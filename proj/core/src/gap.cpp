#include "hugetest/gap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <unordered_set>

#include "hugetest/error.hpp"
#include "hugetest/rng.hpp"

namespace hugetest {

namespace {

std::size_t ceil_size(double x) { return static_cast<std::size_t>(std::max(1.0, std::ceil(x - 1e-9))); }

bool ordering_prefix(const BitVector& x, std::size_t i_star, const std::vector<std::size_t>& b_prime) {
  if (x[i_star]) return false;
  for (auto i : b_prime) {
    if (!x[i]) return false;
  }
  return true;
}

OracleCounters delta_counters(const HugeObjectOracle& o, const OracleCounters& before) {
  return {o.samples_taken() - before.samples_taken, o.queries_made() - before.queries_made};
}

}  // namespace

BitVector binary_pattern(std::size_t value, std::size_t width) {
  if (width == 0 || (width < 64 && value >= (std::size_t{1} << width))) throw InvalidArgument("value does not fit the width");
  BitVector out(width);
  for (std::size_t t = 0; t < width; ++t) out.set(t, ((value >> (width - 1 - t)) & 1u) != 0);
  return out;
}

GapSpecialVectors special_vectors(const GapGeometry& geo) {
  GapSpecialVectors s;
  s.u = BitVector(geo.N);
  s.u.set(0, true);
  for (std::size_t i = 1; i <= geo.b; ++i) {
    BitVector v(geo.N);
    for (std::size_t t = 0; t <= i; ++t) v.set(t, true);
    s.v.push_back(std::move(v));
  }
  const std::size_t region = geo.k * geo.n;
  for (std::size_t i = 0; i < geo.t_count; ++i) {
    BitVector w(geo.N);
    const BitVector code = binary_pattern(i, geo.b);
    for (std::size_t t = 0; t < geo.b; ++t) w.set(1 + t, code[t]);
    for (std::size_t j = 0; j < region; ++j) {
      if ((j >> i) & 1u) w.set(geo.encoding_begin() + j, true);
    }
    s.w.push_back(std::move(w));
  }
  return s;
}

std::vector<std::size_t> PermutationRecovery::chunk_positions(const GapGeometry& geo, std::size_t j) const {
  if (!pi) throw InvalidArgument("no permutation was recovered");
  const Permutation inv = pi->inverse();
  std::vector<std::size_t> out(geo.k);
  for (std::size_t t = 0; t < geo.k; ++t) out[t] = inv(geo.chunk_begin(j) + t);
  return out;
}

std::size_t find_permutation_sample_count(const GapGeometry& geo, const FindPermutationParams& params) {
  const double log_n = std::log2(static_cast<double>(geo.N));
  return ceil_size(params.c_fp * log_n * log_n / geo.gap_alpha);
}

PermutationRecovery find_permutation(HugeObjectOracle& oracle, const GapGeometry& geo,
                                     const FindPermutationParams& params) {
  if (oracle.dimension() != geo.N) throw InvalidArgument("oracle dimension differs from N");
  PermutationRecovery out;
  const OracleCounters before = oracle.counters();
  auto fail = [&](int step, std::string why) {
    out.failed_step = step;
    out.failure = std::move(why);
    out.counters = delta_counters(oracle, before);
    return out;
  };
  out.sample_count = find_permutation_sample_count(geo, params);

  // Step (i).
  std::set<BitVector> distinct;
  for (std::size_t s = 0; s < out.sample_count; ++s) distinct.insert(oracle.reveal_full(oracle.draw_sample()));

  // Step (ii).
  const BitVector* u_prime = nullptr;
  for (const auto& x : distinct) {
    if (x.count() != 1) continue;
    if (u_prime) return fail(2, "more than one weight-1 vector");
    u_prime = &x;
  }
  if (!u_prime) return fail(2, "no weight-1 vector");
  for (std::size_t i = 0; i < geo.N; ++i) {
    if ((*u_prime)[i]) out.i_star = i;
  }

  // Step (iii).
  std::vector<const BitVector*> chain;
  for (const auto& x : distinct) {
    if (x[out.i_star] && x.count() >= 2) chain.push_back(&x);
  }
  if (chain.size() != geo.b) return fail(3, "chain candidate count differs from b");
  std::sort(chain.begin(), chain.end(), [](const BitVector* a, const BitVector* b) { return a->count() < b->count(); });
  const BitVector* previous = u_prime;
  for (std::size_t j = 0; j < geo.b; ++j) {
    const BitVector& cur = *chain[j];
    if (cur.count() != j + 2) return fail(3, "chain vector has the wrong weight");
    std::optional<std::size_t> added;
    const auto wp = previous->words();
    const auto wc = cur.words();
    for (std::size_t w = 0; w < wc.size(); ++w) {
      if ((wp[w] & ~wc[w]) != 0) return fail(3, "chain is not nested");
      const std::uint64_t fresh = wc[w] & ~wp[w];
      if (fresh != 0) added = w * 64 + static_cast<std::size_t>(std::countr_zero(fresh));
    }
    out.b_prime.push_back(*added);
    previous = &cur;
  }

  // Step (iv).
  std::vector<const BitVector*> t_prime;
  for (const auto& x : distinct) {
    if (x[out.i_star]) continue;
    bool all_ones = true;
    for (auto i : out.b_prime) all_ones = all_ones && x[i];
    if (!all_ones) t_prime.push_back(&x);
  }
  if (t_prime.empty()) return fail(4, "no ordering vectors");
  auto pattern_of = [&](const BitVector& x) {
    std::size_t code = 0;
    for (auto i : out.b_prime) code = (code << 1) | (x[i] ? 1u : 0u);
    return code;
  };
  std::vector<const BitVector*> w_prime(geo.t_count, nullptr);
  const std::size_t forbidden_end = (std::size_t{1} << geo.b) - 1;
  for (const BitVector* x : t_prime) {
    const std::size_t code = pattern_of(*x);
    if (code >= geo.t_count && code < forbidden_end) return fail(4, "ordering vector with an out-of-range code");
    if (code < geo.t_count) {
      if (w_prime[code]) return fail(4, "two ordering vectors share a code");
      w_prime[code] = x;
    }
  }
  for (std::size_t j = 0; j < geo.t_count; ++j) {
    if (!w_prime[j]) return fail(4, "missing ordering vector");
  }

  // Step (v).
  std::vector<std::size_t> mapping(geo.N, geo.N);
  std::vector<bool> taken(geo.N, false);
  mapping[out.i_star] = 0;
  for (std::size_t t = 0; t < geo.b; ++t) mapping[out.b_prime[t]] = t + 1;
  const std::size_t region = geo.k * geo.n;
  for (std::size_t i = 0; i < geo.N; ++i) {
    if (mapping[i] != geo.N) continue;
    std::size_t label = 0;
    for (std::size_t t = 0; t < geo.t_count; ++t) {
      if ((*w_prime[t])[i]) label |= std::size_t{1} << t;
    }
    if (label >= region) return fail(5, "offset label outside the encoding region");
    mapping[i] = geo.encoding_begin() + label;
  }
  for (auto c : mapping) {
    if (taken[c]) return fail(5, "reconstructed map is not a permutation");
    taken[c] = true;
  }

  // Step (vi).
  std::size_t outside = 0;
  for (std::size_t s = 0; s < out.sample_count; ++s) {
    const BitVector z = oracle.reveal_full(oracle.draw_sample());
    if (!ordering_prefix(z, out.i_star, out.b_prime)) ++outside;
  }
  out.outside_fraction = static_cast<double>(outside) / static_cast<double>(out.sample_count);
  if (out.outside_fraction > 4.0 * geo.gap_alpha) return fail(6, "too much mass outside the encoding part");

  out.pi = Permutation(std::move(mapping));
  out.counters = delta_counters(oracle, before);
  return out;
}

SupportOneReport support_one_test(HugeObjectOracle& oracle, double epsilon, std::uint64_t seed,
                                  const SupportOneParams& params) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  Rng rng(seed);
  SupportOneReport out;
  out.samples = ceil_size(params.c_samples / epsilon);
  out.indices = std::min(oracle.dimension(), ceil_size(params.c_indices * std::log(20.0) / epsilon));
  const auto indices = rng.sample_without_replacement(oracle.dimension(), out.indices);
  const BitVector first = oracle.query_many(oracle.draw_sample(), indices);
  for (std::size_t s = 1; s < out.samples; ++s) {
    if (oracle.query_many(oracle.draw_sample(), indices) != first) {
      out.verdict = Verdict::Reject;
      return out;
    }
  }
  return out;
}

SuppEstReport supp_est(const DecodedStream& stream, std::size_t s, double epsilon, std::uint64_t seed,
                       const SuppEstParams& params) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (s == 0) throw InvalidArgument("support bound must be positive");
  SuppEstReport out;
  if (stream.count == 0) return out;
  if (!stream.query) throw InvalidArgument("stream has no query callback");
  Rng rng(seed);
  const double log_s = std::log(static_cast<double>(std::max<std::size_t>(s, 2)));
  out.vectors_read = std::min(stream.count, ceil_size(params.c_se * static_cast<double>(s) * log_s / (epsilon * epsilon)));
  out.index_set_size = std::min(stream.dimension, ceil_size(params.c_si * log_s / epsilon));
  const auto indices = rng.sample_without_replacement(stream.dimension, out.index_set_size);
  std::unordered_set<BitVector, BitVectorHash> patterns;
  for (std::size_t item = 0; item < out.vectors_read; ++item) {
    BitVector pattern(out.index_set_size);
    for (std::size_t t = 0; t < indices.size(); ++t) {
      const auto bit = stream.query(item, indices[t]);
      if (!bit) {
        out.invalid_seen = true;
        out.verdict = Verdict::Reject;
        return out;
      }
      if (*bit) pattern.set(t, true);
    }
    patterns.insert(std::move(pattern));
  }
  out.distinct = patterns.size();
  out.verdict = out.distinct <= s ? Verdict::Accept : Verdict::Reject;
  return out;
}

std::string_view to_string(AdaptiveStage s) noexcept {
  switch (s) {
    case AdaptiveStage::None: return "none";
    case AdaptiveStage::FindPermutation: return "find-permutation";
    case AdaptiveStage::Validity: return "validity";
    case AdaptiveStage::TooFewEncodings: return "too-few-encodings";
    case AdaptiveStage::InvalidChunk: return "invalid-chunk";
    case AdaptiveStage::SupportEstimate: return "support-estimate";
  }
  return "unknown";
}

AdaptiveReport alg_adaptive(HugeObjectOracle& oracle, const GapCodes& codes, double epsilon, std::uint64_t seed,
                            const AdaptiveParams& params) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  const GapGeometry& geo = codes.geo;
  AdaptiveReport out;
  const OracleCounters before = oracle.counters();
  auto finish = [&](Verdict v, AdaptiveStage stage) {
    out.verdict = v;
    out.reject_stage = stage;
    out.counters = delta_counters(oracle, before);
    const double log_n = std::log2(static_cast<double>(geo.N));
    out.query_ratio = static_cast<double>(out.counters.queries_made) / (static_cast<double>(geo.N) * log_n * log_n * log_n);
    return out;
  };

  // Step (i).
  out.recovery = find_permutation(oracle, geo, params.find);
  if (!out.recovery.ok()) return finish(Verdict::Reject, AdaptiveStage::FindPermutation);
  const Permutation inverse = out.recovery.pi->inverse();
  const std::size_t i_star = out.recovery.i_star;
  const std::vector<std::size_t>& b_prime = out.recovery.b_prime;

  // Step (ii).
  out.validity_samples = ceil_size(params.c_aa / epsilon);
  for (std::size_t s = 0; s < out.validity_samples; ++s) {
    const BitVector x = oracle.reveal_full(oracle.draw_sample());
    if (!ordering_prefix(x, i_star, b_prime)) continue;
    if (!fe_is_valid(geo, codes.se, codes.ge, apply_permutation(x, inverse))) {
      return finish(Verdict::Reject, AdaptiveStage::Validity);
    }
  }

  // Step (iii).
  std::vector<std::size_t> prefix_positions{i_star};
  prefix_positions.insert(prefix_positions.end(), b_prime.begin(), b_prime.end());
  out.y_count = ceil_size(params.c_ab * static_cast<double>(geo.n) / epsilon);
  std::vector<SampleId> y_prime;
  for (std::size_t s = 0; s < out.y_count; ++s) {
    const SampleId sid = oracle.draw_sample();
    const BitVector head = oracle.query_many(sid, prefix_positions);
    bool match = !head[0];
    for (std::size_t t = 1; t < head.size(); ++t) match = match && head[t];
    if (match) y_prime.push_back(sid);
  }
  out.y_prime_count = y_prime.size();

  // Step (iv).
  if (2 * out.y_prime_count <= out.y_count) return finish(Verdict::Reject, AdaptiveStage::TooFewEncodings);
  std::vector<std::vector<std::size_t>> chunk_positions(geo.n);
  for (std::size_t j = 0; j < geo.n; ++j) {
    auto& pos = chunk_positions[j];
    pos.resize(geo.k);
    for (std::size_t t = 0; t < geo.k; ++t) pos[t] = inverse(geo.chunk_begin(j) + t);
  }
  DecodedStream stream;
  stream.count = y_prime.size();
  stream.dimension = geo.n;
  stream.query = [&](std::size_t item, std::size_t j) -> std::optional<bool> {
    const BitVector chunk = oracle.query_many(y_prime[item], chunk_positions[j]);
    const auto msg = se_decode_word(codes.se, chunk.slice(0, geo.k));
    if (!msg) return std::nullopt;
    return msg->secret;
  };
  out.supp = supp_est(stream, geo.n, epsilon / 3.0, derive_seed(seed, 1), params.supp);
  if (out.supp->invalid_seen) return finish(Verdict::Reject, AdaptiveStage::InvalidChunk);
  if (out.supp->verdict == Verdict::Reject) return finish(Verdict::Reject, AdaptiveStage::SupportEstimate);
  return finish(Verdict::Accept, AdaptiveStage::None);
}

}  // namespace hugetest
