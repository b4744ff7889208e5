#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hugetest/bitvector.hpp"
#include "hugetest/distribution.hpp"
#include "hugetest/rng.hpp"

namespace hugetest {

struct SampleId {
  std::size_t value = 0;
  friend auto operator<=>(const SampleId&, const SampleId&) = default;
};

struct QueryBudget {
  std::optional<std::size_t> max_samples;
  std::optional<std::size_t> max_queries;
};

struct OracleCounters {
  std::size_t samples_taken = 0;
  std::size_t queries_made = 0;
  friend bool operator==(const OracleCounters&, const OracleCounters&) = default;
};

// Sample-and-query access to a hidden distribution. Every revealed bit costs
// one query, repeated cells included. The RNG is consumed only by draws, so
// two oracles with the same seed hand out the same sample sequence.
class HugeObjectOracle {
 public:
  HugeObjectOracle(std::shared_ptr<const ExplicitDistribution> distribution, std::uint64_t seed,
                   QueryBudget budget = {});
  HugeObjectOracle(ExplicitDistribution distribution, std::uint64_t seed, QueryBudget budget = {});

  std::size_t dimension() const noexcept { return distribution_->dimension(); }
  std::uint64_t seed() const noexcept { return seed_; }

  SampleId draw_sample();
  bool query_bit(SampleId sid, std::size_t j);
  BitVector reveal_full(SampleId sid);
  // Reveals the listed coordinates in order; costs indices.size() queries.
  BitVector query_many(SampleId sid, std::span<const std::size_t> indices);

  const OracleCounters& counters() const noexcept { return counters_; }
  std::size_t samples_taken() const noexcept { return counters_.samples_taken; }
  std::size_t queries_made() const noexcept { return counters_.queries_made; }

  // Running digest of every draw and revealed bit, for replay comparisons.
  std::uint64_t transcript_digest() const noexcept { return digest_; }

 private:
  const BitVector& held(SampleId sid) const;
  void charge_queries(std::size_t count);
  void absorb(std::uint64_t value) noexcept;

  std::shared_ptr<const ExplicitDistribution> distribution_;
  std::uint64_t seed_;
  Rng rng_;
  QueryBudget budget_;
  OracleCounters counters_;
  std::vector<std::size_t> held_;  // atom index per drawn sample
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
};

}  // namespace hugetest
