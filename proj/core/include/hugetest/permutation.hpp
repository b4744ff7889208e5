#pragma once

#include <cstddef>
#include <vector>

#include "hugetest/bitvector.hpp"

namespace hugetest {

class Rng;

// Bijection on {0, ..., size-1}. Applied to vectors as result[i] = v[p(i)].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> mapping);

  static Permutation identity(std::size_t size);
  static Permutation random(std::size_t size, Rng& rng);

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator()(std::size_t i) const noexcept { return map_[i]; }
  const std::vector<std::size_t>& mapping() const noexcept { return map_; }

  Permutation inverse() const;
  bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> map_;
};

// compose(p, q)(i) = p(q(i)), so apply(apply(v, p), q) == apply(v, compose(p, q)).
Permutation compose(const Permutation& p, const Permutation& q);

BitVector apply_permutation(const BitVector& v, const Permutation& p);

}  // namespace hugetest
