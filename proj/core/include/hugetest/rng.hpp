#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace hugetest {

// splitmix64 finaliser; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Seed for stream `stream` under `master`. Distinct streams give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                    // [0, 1)
  std::size_t below(std::size_t bound);  // uniform in [0, bound)
  bool coin() { return (engine_() >> 63) != 0; }

  // Uniform subset of size k from [0, n), in increasing order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hugetest
