#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <set>
#include <vector>

#include "hugetest/codes.hpp"
#include "hugetest/error.hpp"
#include "hugetest/galois_field.hpp"
#include "hugetest/metrics.hpp"
#include "hugetest/rng.hpp"
#include "oracles.hpp"

namespace hugetest {
namespace {

std::vector<Symbol> symbols_of(std::size_t value, std::size_t m, std::size_t n) {
  std::vector<Symbol> z(m);
  for (auto& c : z) {
    c = static_cast<Symbol>(value % n);
    value /= n;
  }
  return z;
}

BitVector bits_of(std::size_t value, std::size_t n) {
  BitVector x(n);
  for (std::size_t j = 0; j < n; ++j) x.set(j, (value >> j) & 1u);
  return x;
}

const GapCodes& small_codes() {
  static const GapCodes codes = make_gap_codes(2, 1, GapCodeOptions{std::nullopt, 2, 0.2, {}});
  return codes;
}

TEST(GaloisField, LeastIrreduciblePolynomials) {
  EXPECT_EQ(least_irreducible_polynomial(2), 0x7u);
  EXPECT_EQ(least_irreducible_polynomial(3), 0xbu);
  EXPECT_EQ(least_irreducible_polynomial(4), 0x13u);
  EXPECT_EQ(least_irreducible_polynomial(8), 0x11bu);
}

TEST(GaloisField, FieldAxioms) {
  for (unsigned l : {2u, 3u, 5u, 8u, 10u}) {
    const GaloisField f(l);
    Rng rng(l);
    for (std::uint32_t a = 1; a < f.order(); ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
    for (int t = 0; t < 300; ++t) {
      const auto a = static_cast<std::uint32_t>(rng.below(f.order()));
      const auto b = static_cast<std::uint32_t>(rng.below(f.order()));
      const auto c = static_cast<std::uint32_t>(rng.below(f.order()));
      EXPECT_EQ(f.mul(a, b), f.mul(b, a));
      EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
      EXPECT_EQ(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
    }
  }
  // In GF(4) with x^2 + x + 1, x * x = x + 1.
  EXPECT_EQ(GaloisField(2).mul(2, 2), 3u);
}

TEST(Geometry, Layout) {
  const auto g2 = make_gap_geometry(2);
  EXPECT_EQ(g2.n, 4u);
  EXPECT_EQ(g2.k, 12u);
  EXPECT_EQ(g2.t_count, 6u);
  EXPECT_EQ(g2.b, 3u);
  EXPECT_EQ(g2.N, 52u);
  EXPECT_EQ(g2.m, 2u);
  const auto g4 = make_gap_geometry(4);
  EXPECT_EQ(g4.k, 20u);
  EXPECT_EQ(g4.t_count, 9u);
  EXPECT_EQ(g4.b, 4u);
  EXPECT_EQ(g4.N, 325u);
  EXPECT_DOUBLE_EQ(g4.gap_alpha, 0.25);
  // Chunks tile the positions after the prefix.
  EXPECT_EQ(g4.chunk_begin(0), 1 + g4.b);
  EXPECT_EQ(g4.chunk_begin(g4.n - 1) + g4.k, g4.N);
  EXPECT_THROW(make_gap_geometry(1), InvalidArgument);
  EXPECT_THROW(make_gap_geometry(3, 5), InvalidArgument);
}

TEST(Weights, KnownCodes) {
  const std::vector<std::uint64_t> rep{0b111};
  EXPECT_EQ(weight_distribution(rep, 3), (std::vector<std::uint64_t>{1, 0, 0, 1}));
  EXPECT_EQ(dual_distance_from_weights(weight_distribution(rep, 3), 3), 2u);
  // The [7,3] simplex code: every non-zero word has weight 4, and its dual is
  // the Hamming code with minimum distance 3.
  const std::vector<std::uint64_t> simplex{0b1010101, 0b1100110, 0b1111000};
  EXPECT_EQ(weight_distribution(simplex, 7), (std::vector<std::uint64_t>{1, 0, 0, 0, 7, 0, 0, 0}));
  EXPECT_EQ(dual_distance_from_weights(weight_distribution(simplex, 7), 7), 3u);
  EXPECT_EQ(testing::brute_dual_distance(simplex, 7), 3u);
}

TEST(Weights, MacWilliamsMatchesBruteForce) {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    const std::size_t k = 4 + rng.below(9);
    const std::size_t rows = 1 + rng.below(4);
    std::vector<std::uint64_t> g(rows);
    for (auto& r : g) r = rng.next() & ((std::uint64_t{1} << k) - 1);
    EXPECT_EQ(dual_distance_from_weights(weight_distribution(g, k), k), testing::brute_dual_distance(g, k));
  }
}

TEST(Se, BuildExampleAndDistances) {
  const SeCode c = build_se(2, 12, 0.2, 1);
  EXPECT_GE(c.min_distance, 3u);
  EXPECT_EQ(c.min_distance, testing::brute_min_distance(c.generator, 12));
  const std::vector<std::uint64_t> index_rows(c.generator.begin(), c.generator.begin() + 2);
  EXPECT_EQ(c.dual_min_distance, testing::brute_dual_distance(index_rows, 12));
  EXPECT_EQ(c.full_dual_min_distance, testing::brute_dual_distance(c.generator, 12));
  EXPECT_GE(static_cast<double>(c.min_distance), c.zeta_measured * 12 - 1e-9);
  EXPECT_GE(static_cast<double>(c.dual_min_distance), c.zeta_measured * 12 - 1e-9);
}

TEST(Se, SingletonBoundForcesFailure) {
  EXPECT_THROW(build_se(1, 4, 0.9, 0, SeBuildOptions{500, 8, 2}), ConstructionFailed);
}

TEST(Se, EncodeDecodeRoundTrip) {
  for (unsigned l = 2; l <= 4; ++l) {
    const SeCode c = build_se(l, 4 * (l + 1), 0.2, l);
    const std::uint32_t n = 1u << l;
    EXPECT_EQ(se_encode(c, n, false).count(), 0u);
    for (std::uint32_t i = 1; i <= n; ++i) {
      for (bool a : {false, true}) {
        const BitVector w = se_encode(c, i, a);
        const auto back = se_decode(c, w);
        ASSERT_TRUE(back.has_value());
        EXPECT_EQ(back->symbol, i % n);
        EXPECT_EQ(back->secret, a);
        BitVector flipped = w;
        flipped.flip(static_cast<std::size_t>(i) % c.k);
        EXPECT_FALSE(se_decode(c, flipped).has_value());
      }
    }
    EXPECT_THROW(se_encode(c, 0, false), InvalidArgument);
    EXPECT_THROW(se_encode(c, n + 1, false), InvalidArgument);
  }
}

TEST(Se, DistinctMessagesAreFarApart) {
  const SeCode c = build_se(2, 12, 0.2, 1);
  for (std::uint32_t a = 0; a < 8; ++a) {
    for (std::uint32_t b = a + 1; b < 8; ++b) {
      const auto wa = se_encode_word(c, a & 3u, (a >> 2) != 0);
      const auto wb = se_encode_word(c, b & 3u, (b >> 2) != 0);
      EXPECT_GE(static_cast<double>(std::popcount(wa ^ wb)), c.zeta_measured * 12 - 1e-9);
    }
  }
}

TEST(Se, AllOnesIsNotACodeword) {
  const auto& c = small_codes().se;
  const bool member = c.messages.count((std::uint64_t{1} << c.k) - 1) != 0;
  EXPECT_EQ(se_decode(c, BitVector(c.k, true)).has_value(), member);
  EXPECT_FALSE(member);
}

TEST(Se, RestrictionsOfFixedSecretAreUniform) {
  // Any positions whose index-row columns are independent see a uniform
  // restriction once the secret is fixed. Pick l of them greedily.
  const SeCode c = build_se(4, 20, 0.2, 4);
  auto column = [&](std::size_t j) {
    std::uint32_t col = 0;
    for (std::size_t r = 0; r < c.l; ++r) col |= static_cast<std::uint32_t>((c.generator[r] >> j) & 1u) << r;
    return col;
  };
  std::vector<std::size_t> idx;
  std::vector<std::uint32_t> span{0};
  for (std::size_t j = 0; j < c.k && idx.size() < c.l; ++j) {
    const auto col = column(j);
    if (std::find(span.begin(), span.end(), col) != span.end()) continue;
    idx.push_back(j);
    const std::size_t size = span.size();
    for (std::size_t i = 0; i < size; ++i) span.push_back(span[i] ^ col);
  }
  ASSERT_EQ(idx.size(), c.l);
  Rng rng(44);
  std::vector<std::size_t> counts(std::size_t{1} << idx.size(), 0);
  for (int t = 0; t < 100000; ++t) {
    const auto w = se_encode_word(c, static_cast<Symbol>(rng.below(16)), true);
    std::size_t cell = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) cell |= ((w >> idx[i]) & 1u) << i;
    ++counts[cell];
  }
  EXPECT_GT(testing::chi_square_uniform_pvalue(counts), 0.01);
}

TEST(Ge, ZeroAndDistance) {
  const auto& codes = small_codes();
  const std::vector<Symbol> zero{0, 0};
  EXPECT_EQ(ge_encode(codes.geo, codes.ge, zero), (std::vector<Symbol>(4, 0)));
  for (std::size_t a = 0; a < 16; ++a) {
    for (std::size_t b = a + 1; b < 16; ++b) {
      const auto ya = ge_encode(codes.geo, codes.ge, symbols_of(a, 2, 4));
      const auto yb = ge_encode(codes.geo, codes.ge, symbols_of(b, 2, 4));
      std::size_t diff = 0;
      for (std::size_t j = 0; j < 4; ++j) diff += ya[j] != yb[j];
      EXPECT_GE(diff, 3u);
    }
  }
}

TEST(Ge, SinglePositionsAreUniform) {
  const auto& codes = small_codes();
  std::vector<std::vector<int>> seen(4, std::vector<int>(4, 0));
  for (std::size_t a = 0; a < 16; ++a) {
    const auto y = ge_encode(codes.geo, codes.ge, symbols_of(a, 2, 4));
    for (std::size_t j = 0; j < 4; ++j) ++seen[j][y[j]];
  }
  for (const auto& row : seen) EXPECT_EQ(row, (std::vector<int>(4, 4)));
}

TEST(Ge, DecodeRoundTripAndCorruption) {
  const auto& codes = small_codes();
  for (std::size_t a = 0; a < 16; ++a) {
    const auto z = symbols_of(a, 2, 4);
    auto y = ge_encode(codes.geo, codes.ge, z);
    EXPECT_EQ(ge_decode(codes.geo, codes.ge, y), z);
    y[3] ^= 1;
    EXPECT_FALSE(ge_decode(codes.geo, codes.ge, y).has_value());
  }
  // With m = n every word interpolates.
  const auto geo = make_gap_geometry(2, std::nullopt, 4);
  const auto ge = make_ge(geo);
  for (std::size_t a = 0; a < 256; ++a) {
    const auto y = symbols_of(a, 4, 4);
    const auto z = ge_decode(geo, ge, y);
    ASSERT_TRUE(z.has_value());
    EXPECT_EQ(ge_encode(geo, ge, *z), y);
  }
}

TEST(Fe, StructureAndRoundTrip) {
  const auto& [geo, se, ge] = small_codes();
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto z = symbols_of(rng.below(16), 2, 4);
    const BitVector x = bits_of(rng.below(16), 4);
    const BitVector w = fe_encode(geo, se, ge, z, x);
    EXPECT_FALSE(w[0]);
    for (std::size_t i = 1; i <= geo.b; ++i) EXPECT_TRUE(w[i]);
    const auto d = fe_decode_all(geo, se, ge, w);
    EXPECT_TRUE(d.valid);
    EXPECT_EQ(d.x, x);
    EXPECT_EQ(d.z, z);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(fe_decode_bit(geo, se, w, j), x[j]);
    BitVector broken = w;
    broken.flip(geo.chunk_begin(2));
    EXPECT_FALSE(fe_decode_bit(geo, se, broken, 2).has_value());
    EXPECT_EQ(fe_decode_all(geo, se, ge, broken).invalid_chunks, (std::vector<std::size_t>{2}));
  }
}

TEST(Fe, DistanceBoundsExhaustiveAtFour) {
  const auto& [geo, se, ge] = small_codes();
  const double zeta = geo.zeta_measured;
  std::vector<BitVector> words;
  for (std::size_t a = 0; a < 16; ++a) {
    for (std::size_t xv = 0; xv < 16; ++xv) words.push_back(fe_encode(geo, se, ge, symbols_of(a, 2, 4), bits_of(xv, 4)));
  }
  for (std::size_t p = 0; p < words.size(); ++p) {
    for (std::size_t q = p + 1; q < words.size(); ++q) {
      const std::size_t za = p / 16;
      const std::size_t zb = q / 16;
      const auto dx = hamming_abs(bits_of(p % 16, 4), bits_of(q % 16, 4));
      const auto dw = hamming_abs(words[p], words[q]);
      if (za != zb) {
        EXPECT_GE(static_cast<double>(dw), zeta * zeta * static_cast<double>(geo.N) / 2.0);
      }
      if (dx > 0) {
        EXPECT_GE(static_cast<double>(dw), zeta * static_cast<double>(geo.k * dx) - 1e-9);
      }
      if (za == zb) {
        EXPECT_LE(hamming_norm(words[p], words[q]), static_cast<double>(dx) / 4.0 + 1e-12);
      }
    }
  }
}

TEST(Fe, DistanceBoundsOnRandomPairsAtSixteen) {
  const GapCodes codes = make_gap_codes(4, 3);
  const auto& [geo, se, ge] = codes;
  const double zeta = geo.zeta_measured;
  Rng rng(16);
  auto random_z = [&] {
    std::vector<Symbol> z(geo.m);
    for (auto& c : z) c = static_cast<Symbol>(rng.below(geo.n));
    return z;
  };
  for (int t = 0; t < 10000; ++t) {
    const auto z = random_z();
    const auto z2 = t % 2 == 0 ? z : random_z();
    const BitVector x = testing::random_bitvector(rng, geo.n);
    BitVector x2 = x;
    for (std::size_t f = rng.below(4); f > 0; --f) x2.flip(rng.below(geo.n));
    const auto w = fe_encode(geo, se, ge, z, x);
    const auto w2 = fe_encode(geo, se, ge, z2, x2);
    const auto dx = hamming_abs(x, x2);
    const auto dw = hamming_abs(w, w2);
    if (z != z2) {
      EXPECT_GE(static_cast<double>(dw), zeta * zeta * static_cast<double>(geo.N) / 2.0);
    }
    if (dx > 0) {
      EXPECT_GE(static_cast<double>(dw), zeta * static_cast<double>(geo.k * dx) - 1e-9);
    }
    if (z == z2) {
      EXPECT_LE(hamming_norm(w, w2), static_cast<double>(dx) / static_cast<double>(geo.n) + 1e-12);
    }
  }
}

TEST(Fe, RandomWordsMatchImageMembership) {
  const auto& [geo, se, ge] = small_codes();
  std::set<BitVector> image;
  for (std::size_t a = 0; a < 16; ++a) {
    for (std::size_t xv = 0; xv < 16; ++xv) image.insert(fe_encode(geo, se, ge, symbols_of(a, 2, 4), bits_of(xv, 4)));
  }
  Rng rng(6);
  for (int t = 0; t < 2000; ++t) {
    BitVector w = testing::random_bitvector(rng, geo.N);
    if (t % 2 == 0) {
      w = *std::next(image.begin(), static_cast<std::ptrdiff_t>(rng.below(image.size())));
      if (t % 4 == 0) w.flip(rng.below(geo.N));
    }
    EXPECT_EQ(fe_is_valid(geo, se, ge, w), image.count(w) == 1);
  }
}

TEST(Fe, ValidChunksOffCodewordSequence) {
  const auto& [geo, se, ge] = small_codes();
  const std::vector<Symbol> z{1, 2};
  const BitVector x = bits_of(5, 4);
  BitVector w = fe_encode(geo, se, ge, z, x);
  const auto y = ge_encode(geo, ge, z);
  w.assign_slice(geo.chunk_begin(0), geo.k, se_encode_word(se, (y[0] + 1) % 4, x[0]));
  const auto d = fe_decode_all(geo, se, ge, w);
  EXPECT_TRUE(d.invalid_chunks.empty());
  EXPECT_FALSE(d.z.has_value());
  EXPECT_FALSE(d.valid);
}

TEST(Codes, DescriptorIsStable) {
  const std::string a = code_descriptor_json(make_gap_codes(3, 9));
  EXPECT_EQ(a, code_descriptor_json(make_gap_codes(3, 9)));
  EXPECT_NE(a.find("\"field_polynomial\": \"0xb\""), std::string::npos);
  EXPECT_NE(a.find("generator_rows"), std::string::npos);
}

}  // namespace
}  // namespace hugetest
