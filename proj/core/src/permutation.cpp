#include "hugetest/permutation.hpp"

#include <numeric>

#include "hugetest/error.hpp"
#include "hugetest/rng.hpp"

namespace hugetest {

Permutation::Permutation(std::vector<std::size_t> mapping) : map_(std::move(mapping)) {
  if (map_.empty()) throw InvalidArgument("permutation size must be positive");
  std::vector<bool> seen(map_.size(), false);
  for (auto v : map_) {
    if (v >= map_.size() || seen[v]) throw InvalidArgument("mapping is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t size) {
  std::vector<std::size_t> m(size);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return Permutation(std::move(m));
}

Permutation Permutation::random(std::size_t size, Rng& rng) {
  std::vector<std::size_t> m(size);
  std::iota(m.begin(), m.end(), std::size_t{0});
  for (std::size_t i = size; i > 1; --i) std::swap(m[i - 1], m[rng.below(i)]);
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (map_[i] != i) return false;
  }
  return true;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw InvalidArgument("composing permutations of different sizes");
  std::vector<std::size_t> m(p.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = p(q(i));
  return Permutation(std::move(m));
}

BitVector apply_permutation(const BitVector& v, const Permutation& p) {
  if (v.size() != p.size()) throw InvalidArgument("vector length does not match permutation size");
  BitVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[p(i)]) out.set(i, true);
  }
  return out;
}

}  // namespace hugetest
