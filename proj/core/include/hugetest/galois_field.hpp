#pragma once

#include <cstdint>
#include <vector>

namespace hugetest {

// Lexicographically least irreducible polynomial of degree l over GF(2),
// returned with the x^l term included.
std::uint32_t least_irreducible_polynomial(unsigned l);

// GF(2^l) with elements encoded as l-bit integers. Multiplication is
// table-driven for l <= 8 and carry-less otherwise.
class GaloisField {
 public:
  explicit GaloisField(unsigned l);

  unsigned degree() const noexcept { return l_; }
  std::uint32_t order() const noexcept { return std::uint32_t{1} << l_; }
  std::uint32_t polynomial() const noexcept { return poly_; }

  static std::uint32_t add(std::uint32_t a, std::uint32_t b) noexcept { return a ^ b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t inv(std::uint32_t a) const;  // a != 0

 private:
  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const noexcept;

  unsigned l_;
  std::uint32_t poly_;
  std::vector<std::uint16_t> table_;  // order^2 entries when l <= 8
  std::vector<std::uint32_t> inverse_;
};

}  // namespace hugetest
