#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hugetest/bitvector.hpp"
#include "hugetest/galois_field.hpp"

namespace hugetest {

std::size_t ceil_log2(std::size_t x);
std::size_t floor_log2(std::size_t x);

// Layout of the N-bit encodings, 0-based: position 0 is the leading bit, the
// ordering block B occupies [1, b], and chunk j occupies
// [1 + b + k*j, 1 + b + k*(j+1)).
struct GapGeometry {
  unsigned l = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t b = 0;
  std::size_t m = 0;
  std::size_t N = 0;
  std::size_t t_count = 0;  // ceil(log2(k*n)), the number of W vectors
  double gap_alpha = 0.0;
  double zeta_measured = 0.0;

  std::size_t chunk_begin(std::size_t j) const noexcept { return 1 + b + k * j; }
  std::size_t encoding_begin() const noexcept { return 1 + b; }
};

GapGeometry make_gap_geometry(unsigned l, std::optional<std::size_t> k = std::nullopt,
                              std::optional<std::size_t> m = std::nullopt);

// Symbols are field elements of GF(2^l), 0..n-1; the zero element stands for
// the index value n.
using Symbol = std::uint32_t;

struct SeMessage {
  Symbol symbol = 0;
  bool secret = false;
  friend bool operator==(const SeMessage&, const SeMessage&) = default;
};

// Random linear [k, l+1] code. Generator row r < l multiplies index bit r
// (LSB first); row l multiplies the secret bit.
struct SeCode {
  unsigned l = 0;
  std::size_t k = 0;
  std::vector<std::uint64_t> generator;
  std::size_t min_distance = 0;
  // Dual distance of the subcode spanned by the index rows; governs
  // uniformity of restrictions when the secret bit is fixed.
  std::size_t dual_min_distance = 0;
  std::size_t full_dual_min_distance = 0;
  double zeta_measured = 0.0;
  std::vector<std::uint64_t> codewords;  // indexed by symbol | (secret << l)
  std::unordered_map<std::uint64_t, std::uint32_t> messages;
};

struct SeBuildOptions {
  std::size_t attempt_cap = 20000;
  std::size_t refinement_attempts = 64;
  std::size_t min_dual_distance = 2;
};

SeCode se_from_generator(unsigned l, std::size_t k, std::vector<std::uint64_t> generator);
SeCode build_se(unsigned l, std::size_t k, double target_zeta, std::uint64_t seed, SeBuildOptions options = {});

// Weight distribution A_0..A_k of the span of the given rows.
std::vector<std::uint64_t> weight_distribution(std::span<const std::uint64_t> rows, std::size_t k);
// Minimum weight j >= 1 with a non-zero MacWilliams coefficient; k+1 if the
// dual is trivial.
std::size_t dual_distance_from_weights(std::span<const std::uint64_t> weights, std::size_t k);

std::uint64_t se_encode_word(const SeCode& code, Symbol symbol, bool secret);
BitVector se_encode(const SeCode& code, std::uint32_t index, bool secret);  // index in [1, n]
std::optional<SeMessage> se_decode_word(const SeCode& code, std::uint64_t word);
std::optional<SeMessage> se_decode(const SeCode& code, const BitVector& word);

struct GeCode {
  GaloisField field;
  std::size_t n = 0;
  std::size_t m = 0;
};

GeCode make_ge(const GapGeometry& geo);
std::vector<Symbol> ge_encode(const GapGeometry& geo, const GeCode& code, std::span<const Symbol> z);
std::optional<std::vector<Symbol>> ge_decode(const GapGeometry& geo, const GeCode& code, std::span<const Symbol> y);

BitVector fe_encode(const GapGeometry& geo, const SeCode& se, const GeCode& ge, std::span<const Symbol> z,
                    const BitVector& x);
std::optional<bool> fe_decode_bit(const GapGeometry& geo, const SeCode& se, const BitVector& encoded, std::size_t j);

struct FeDecoding {
  bool prefix_ok = false;
  std::vector<std::optional<Symbol>> symbols;
  BitVector x;                               // decoded secret bits; zero where a chunk is invalid
  std::vector<std::size_t> invalid_chunks;   // locally invalid chunk indices
  std::optional<std::vector<Symbol>> z;      // present when the symbol sequence ge-decodes
  bool valid = false;
};

FeDecoding fe_decode_all(const GapGeometry& geo, const SeCode& se, const GeCode& ge, const BitVector& encoded);
bool fe_is_valid(const GapGeometry& geo, const SeCode& se, const GeCode& ge, const BitVector& encoded);

struct GapCodes {
  GapGeometry geo;
  SeCode se;
  GeCode ge;
};

struct GapCodeOptions {
  std::optional<std::size_t> k;
  std::optional<std::size_t> m;
  double target_zeta = 0.2;
  SeBuildOptions se;
};

GapCodes make_gap_codes(unsigned l, std::uint64_t seed, const GapCodeOptions& options = {});

// JSON descriptor: geometry, field polynomial, generator rows in hex and the
// measured distances.
std::string code_descriptor_json(const GapCodes& codes);

}  // namespace hugetest
