#include "hugetest/rng.hpp"

#include <algorithm>
#include <unordered_set>

#include "hugetest/error.hpp"

namespace hugetest {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(mix64(master) ^ mix64(stream ^ 0xd1b54a32d192ed03ULL));
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

std::size_t Rng::below(std::size_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below requires a positive bound");
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(engine_);
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
  if (k > n) throw InvalidArgument("cannot sample more distinct indices than available");
  std::vector<std::size_t> out;
  out.reserve(k);
  if (k * 4 >= n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + below(n - i)]);
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  } else {
    std::unordered_set<std::size_t> chosen;
    while (out.size() < k) {
      const std::size_t c = below(n);
      if (chosen.insert(c).second) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hugetest
