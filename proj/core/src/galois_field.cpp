#include "hugetest/galois_field.hpp"

#include "hugetest/error.hpp"

namespace hugetest {

namespace {

// Remainder of a modulo b for polynomials over GF(2) stored as bit masks.
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const int db = 63 - __builtin_clzll(b);
  while (a != 0) {
    const int da = 63 - __builtin_clzll(a);
    if (da < db) break;
    a ^= b << (da - db);
  }
  return a;
}

bool is_irreducible(std::uint32_t poly, unsigned l) {
  for (std::uint64_t d = 2; d < (std::uint64_t{1} << (l / 2 + 1)); ++d) {
    const int deg = 63 - __builtin_clzll(d);
    if (deg < 1 || static_cast<unsigned>(deg) > l / 2) continue;
    if (poly_mod(poly, d) == 0) return false;
  }
  return true;
}

}  // namespace

std::uint32_t least_irreducible_polynomial(unsigned l) {
  if (l == 0 || l > 16) throw InvalidArgument("field degree must lie in [1, 16]");
  for (std::uint32_t low = 0; low < (std::uint32_t{1} << l); ++low) {
    const std::uint32_t poly = (std::uint32_t{1} << l) | low;
    if (is_irreducible(poly, l)) return poly;
  }
  throw ConstructionFailed("no irreducible polynomial found");
}

GaloisField::GaloisField(unsigned l) : l_(l), poly_(least_irreducible_polynomial(l)) {
  const std::uint32_t q = order();
  if (l_ <= 8) {
    table_.resize(static_cast<std::size_t>(q) * q);
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) table_[a * q + b] = static_cast<std::uint16_t>(slow_mul(a, b));
    }
  }
  // a^(q-2) = a^{-1} for a != 0.
  inverse_.assign(q, 0);
  for (std::uint32_t a = 1; a < q; ++a) {
    std::uint32_t result = 1;
    std::uint32_t base = a;
    for (std::uint32_t e = q - 2; e != 0; e >>= 1) {
      if (e & 1u) result = mul(result, base);
      base = mul(base, base);
    }
    inverse_[a] = result;
  }
}

std::uint32_t GaloisField::slow_mul(std::uint32_t a, std::uint32_t b) const noexcept {
  std::uint64_t product = 0;
  for (unsigned i = 0; i < l_; ++i) {
    if ((b >> i) & 1u) product ^= static_cast<std::uint64_t>(a) << i;
  }
  return static_cast<std::uint32_t>(poly_mod(product, poly_));
}

std::uint32_t GaloisField::mul(std::uint32_t a, std::uint32_t b) const noexcept {
  if (!table_.empty()) return table_[a * order() + b];
  return slow_mul(a, b);
}

std::uint32_t GaloisField::inv(std::uint32_t a) const {
  if (a == 0 || a >= order()) throw InvalidArgument("inverse of zero or out-of-range element");
  return inverse_[a];
}

}  // namespace hugetest
