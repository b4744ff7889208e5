#include "hugetest/oracle.hpp"

#include <string>

#include "hugetest/error.hpp"

namespace hugetest {

HugeObjectOracle::HugeObjectOracle(std::shared_ptr<const ExplicitDistribution> distribution,
                                   std::uint64_t seed, QueryBudget budget)
    : distribution_(std::move(distribution)), seed_(seed), rng_(seed), budget_(budget) {
  if (!distribution_) throw InvalidArgument("oracle requires a distribution");
}

HugeObjectOracle::HugeObjectOracle(ExplicitDistribution distribution, std::uint64_t seed, QueryBudget budget)
    : HugeObjectOracle(std::make_shared<const ExplicitDistribution>(std::move(distribution)), seed, budget) {}

void HugeObjectOracle::absorb(std::uint64_t value) noexcept {
  digest_ ^= value;
  digest_ *= 0x100000001b3ULL;
}

SampleId HugeObjectOracle::draw_sample() {
  if (budget_.max_samples && counters_.samples_taken >= *budget_.max_samples) {
    throw BudgetExceeded("sample budget of " + std::to_string(*budget_.max_samples) + " exhausted");
  }
  held_.push_back(distribution_->sample_index(rng_));
  ++counters_.samples_taken;
  absorb(0xD0 ^ (held_.size() << 8));
  return SampleId{held_.size() - 1};
}

const BitVector& HugeObjectOracle::held(SampleId sid) const {
  if (sid.value >= held_.size()) throw InvalidArgument("unknown sample id " + std::to_string(sid.value));
  return distribution_->atoms()[held_[sid.value]].point;
}

void HugeObjectOracle::charge_queries(std::size_t count) {
  if (budget_.max_queries && counters_.queries_made + count > *budget_.max_queries) {
    throw BudgetExceeded("query budget of " + std::to_string(*budget_.max_queries) + " exhausted");
  }
  counters_.queries_made += count;
}

bool HugeObjectOracle::query_bit(SampleId sid, std::size_t j) {
  const BitVector& v = held(sid);
  if (j >= v.size()) throw InvalidArgument("query index out of range");
  charge_queries(1);
  const bool bit = v[j];
  absorb((sid.value << 32) ^ (j << 1) ^ static_cast<std::uint64_t>(bit));
  return bit;
}

BitVector HugeObjectOracle::reveal_full(SampleId sid) {
  const BitVector& v = held(sid);
  charge_queries(v.size());
  absorb(0xF0 ^ (sid.value << 8));
  for (auto w : v.words()) absorb(w);
  return v;
}

BitVector HugeObjectOracle::query_many(SampleId sid, std::span<const std::size_t> indices) {
  const BitVector& v = held(sid);
  if (indices.empty()) return BitVector();
  BitVector out = v.project(indices);
  charge_queries(indices.size());
  absorb(0xA0 ^ (sid.value << 8));
  for (auto w : out.words()) absorb(w);
  return out;
}

}  // namespace hugetest
