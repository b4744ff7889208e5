#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <vector>

#include "hugetest/bitvector.hpp"
#include "hugetest/distribution.hpp"
#include "hugetest/distribution_io.hpp"
#include "hugetest/error.hpp"
#include "hugetest/metrics.hpp"
#include "hugetest/oracle.hpp"
#include "hugetest/permutation.hpp"
#include "hugetest/rng.hpp"
#include "oracles.hpp"

namespace hugetest {
namespace {

BitVector bits(const char* s) { return BitVector::from_string(s); }

TEST(BitVector, RoundTripsThroughStrings) {
  EXPECT_EQ(bits("0110").to_string(), "0110");
  EXPECT_EQ(bits("0110").count(), 2u);
  EXPECT_THROW(BitVector(0), InvalidArgument);
  EXPECT_THROW(bits("012"), InvalidArgument);
  EXPECT_THROW(bits("01").at(2), InvalidArgument);
}

TEST(BitVector, WordBoundarySliceAndCompare) {
  BitVector v(130);
  v.set(63, true);
  v.set(64, true);
  v.set(129, true);
  EXPECT_EQ(v.count(), 3u);
  EXPECT_EQ(v.slice(62, 4), 0b0110u);
  v.assign_slice(60, 8, 0xffu);
  EXPECT_EQ(v.count(), 9u);
  BitVector w(130, true);
  EXPECT_EQ(w.count(), 130u);
  EXPECT_EQ(hamming_abs(v, w), 121u);
  EXPECT_LT(bits("0111"), bits("1000"));
}

TEST(BitVector, ProjectReadsIndicesInOrder) {
  const std::vector<std::size_t> idx{3, 0, 0};
  EXPECT_EQ(bits("1001").project(idx).to_string(), "111");
  EXPECT_THROW(bits("1001").project(std::vector<std::size_t>{}), InvalidArgument);
}

TEST(Permutation, RejectsNonBijections) {
  EXPECT_THROW(Permutation({0, 0}), InvalidArgument);
  EXPECT_THROW(Permutation({0, 2}), InvalidArgument);
  EXPECT_THROW(apply_permutation(bits("01"), Permutation::identity(3)), InvalidArgument);
}

TEST(Permutation, IdentityAndSwap) {
  EXPECT_EQ(apply_permutation(bits("0110"), Permutation::identity(4)), bits("0110"));
  EXPECT_EQ(apply_permutation(bits("10"), Permutation({1, 0})), bits("01"));
}

TEST(Permutation, ResultReadsSourceAtMappedPosition) {
  const Permutation p({2, 0, 1});
  EXPECT_EQ(apply_permutation(bits("100"), p), bits("010"));
}

TEST(Permutation, CompositionLawOnRandomTriples) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const BitVector v = testing::random_bitvector(rng, 8);
    const Permutation p = Permutation::random(8, rng);
    const Permutation q = Permutation::random(8, rng);
    EXPECT_EQ(apply_permutation(apply_permutation(v, p), q), apply_permutation(v, compose(p, q)));
    EXPECT_EQ(apply_permutation(apply_permutation(v, p), p.inverse()), v);
    EXPECT_TRUE(compose(p, p.inverse()).is_identity());
  }
}

TEST(Distribution, ValidatesInvariants) {
  EXPECT_THROW(ExplicitDistribution(2, {{bits("00"), 0.5}, {bits("11"), 0.4}}), InvalidArgument);
  EXPECT_THROW(ExplicitDistribution(2, {{bits("00"), 0.5}, {bits("00"), 0.5}}), InvalidArgument);
  EXPECT_THROW(ExplicitDistribution(2, {{bits("00"), 1.0}, {bits("11"), 0.0}}), InvalidArgument);
  EXPECT_THROW(ExplicitDistribution(2, {{bits("000"), 1.0}}), InvalidArgument);
}

TEST(Distribution, UniformAccumulatesMultiplicity) {
  const std::vector<BitVector> pts{bits("00"), bits("11"), bits("00"), bits("00")};
  const auto d = ExplicitDistribution::uniform(pts);
  EXPECT_EQ(d.support_size(), 2u);
  EXPECT_DOUBLE_EQ(d.mass_of(bits("00")), 0.75);
  EXPECT_DOUBLE_EQ(d.mass_of(bits("01")), 0.0);
}

TEST(Distribution, PermutePointMass) {
  const auto d = permute_distribution(ExplicitDistribution::point_mass(bits("01")), Permutation({1, 0}));
  EXPECT_DOUBLE_EQ(d.mass_of(bits("10")), 1.0);
  Rng rng(5);
  const auto r = testing::random_distribution(rng, 5, 4);
  const auto same = permute_distribution(r, Permutation::identity(5));
  ASSERT_EQ(same.support_size(), r.support_size());
  for (std::size_t i = 0; i < r.support_size(); ++i) {
    EXPECT_EQ(same.atom(i).point, r.atom(i).point);
    EXPECT_DOUBLE_EQ(same.atom(i).mass, r.atom(i).mass);
  }
}

TEST(Distribution, PermutationRoundTripHasZeroEmd) {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const auto d = testing::random_distribution(rng, 6, 1 + rng.below(5));
    const Permutation p = Permutation::random(6, rng);
    const auto moved = permute_distribution(d, p);
    double total = 0.0;
    for (const auto& a : moved.atoms()) total += a.mass;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(emd(d, permute_distribution(moved, p.inverse())), 0.0, 1e-12);
  }
}

TEST(Oracle, PointMassDrawsAndCounters) {
  HugeObjectOracle o(ExplicitDistribution::point_mass(bits("101")), 3);
  const SampleId s = o.draw_sample();
  for (int i = 0; i < 4; ++i) o.draw_sample();
  EXPECT_EQ(o.samples_taken(), 5u);
  EXPECT_EQ(o.queries_made(), 0u);
  EXPECT_FALSE(o.query_bit(s, 1));
  EXPECT_FALSE(o.query_bit(s, 1));
  EXPECT_EQ(o.queries_made(), 2u);
  EXPECT_EQ(o.reveal_full(s), bits("101"));
  EXPECT_EQ(o.queries_made(), 5u);
  EXPECT_THROW(o.query_bit(s, 3), InvalidArgument);
  EXPECT_THROW(o.query_bit(SampleId{9}, 0), InvalidArgument);
}

TEST(Oracle, RevealThenQueryCountsNPlusOne) {
  HugeObjectOracle o(ExplicitDistribution::point_mass(bits("0110")), 1);
  const SampleId s = o.draw_sample();
  const BitVector full = o.reveal_full(s);
  o.query_bit(s, 0);
  EXPECT_EQ(o.queries_made(), 5u);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(o.query_bit(s, j), full[j]);
}

TEST(Oracle, QueryManyMatchesSingleQueries) {
  Rng rng(2);
  const auto d = testing::random_distribution(rng, 12, 5);
  HugeObjectOracle a(d, 99);
  HugeObjectOracle b(d, 99);
  const std::vector<std::size_t> idx{4, 0, 11, 4};
  for (int t = 0; t < 20; ++t) {
    const SampleId sa = a.draw_sample();
    const SampleId sb = b.draw_sample();
    const BitVector many = a.query_many(sa, idx);
    for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(many[i], b.query_bit(sb, idx[i]));
  }
  EXPECT_EQ(a.counters(), b.counters());
}

TEST(Oracle, BudgetsAreEnforced) {
  HugeObjectOracle o(ExplicitDistribution::point_mass(bits("01")), 0, QueryBudget{1, 2});
  const SampleId s = o.draw_sample();
  EXPECT_THROW(o.draw_sample(), BudgetExceeded);
  o.query_bit(s, 0);
  o.query_bit(s, 1);
  EXPECT_THROW(o.query_bit(s, 0), BudgetExceeded);
}

TEST(Oracle, FrequencyMatchesIndependentReplay) {
  const std::vector<BitVector> pts{bits("00"), bits("11")};
  HugeObjectOracle o(ExplicitDistribution::uniform(pts), 7);
  // Independent replay of the sampling rule: mt19937_64 seeded by the
  // splitmix finaliser, one uniform real per draw.
  std::mt19937_64 engine(mix64(7));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t zeros = 0;
  for (int t = 0; t < 10000; ++t) {
    const SampleId s = o.draw_sample();
    const bool first = !o.query_bit(s, 0);
    EXPECT_EQ(first, unit(engine) < 0.5);
    zeros += first;
  }
  EXPECT_GE(zeros, 4500u);
  EXPECT_LE(zeros, 5500u);
}

TEST(Oracle, TranscriptIsDeterministic) {
  Rng rng(4);
  const auto d = testing::random_distribution(rng, 10, 6);
  auto run = [&] {
    HugeObjectOracle o(d, 1234);
    for (int t = 0; t < 30; ++t) {
      const SampleId s = o.draw_sample();
      o.query_bit(s, static_cast<std::size_t>(t) % 10);
    }
    return o.transcript_digest();
  };
  EXPECT_EQ(run(), run());
}

TEST(Rng, DeriveSeedSeparatesStreams) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(0, 1), derive_seed(1, 0));
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
  Rng rng(3);
  const auto s = rng.sample_without_replacement(10, 10);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(s[i], i);
  const auto k = rng.sample_without_replacement(100, 7);
  EXPECT_EQ(k.size(), 7u);
  EXPECT_TRUE(std::is_sorted(k.begin(), k.end()));
  EXPECT_EQ(std::adjacent_find(k.begin(), k.end()), k.end());
}

TEST(DistributionIo, ParsesDecimalAndRational) {
  std::istringstream in("# comment\n\n1/3\t010\n0.6666666666666667\t111\n");
  const auto d = parse_distribution(in);
  EXPECT_EQ(d.dimension(), 3u);
  EXPECT_NEAR(d.mass_of(bits("010")), 1.0 / 3.0, 1e-15);
}

TEST(DistributionIo, RejectsBadFiles) {
  std::istringstream low("0.999\t01\n");
  EXPECT_THROW(
      {
        try {
          parse_distribution(low);
        } catch (const FormatError& e) {
          EXPECT_NE(std::string(e.what()).find("sum"), std::string::npos);
          throw;
        }
      },
      FormatError);
  std::istringstream dup("0.5\t01\n0.5\t01\n");
  EXPECT_THROW(parse_distribution(dup), FormatError);
  std::istringstream ragged("0.5\t01\n0.5\t011\n");
  EXPECT_THROW(parse_distribution(ragged), FormatError);
  std::istringstream junk("abc\t01\n");
  EXPECT_THROW(parse_distribution(junk), FormatError);
}

TEST(DistributionIo, BundledFixturesParseAndRoundTrip) {
  for (const char* name : {"pair_a.dist", "pair_b.dist", "three_clusters_512.dist"}) {
    const auto d = read_distribution_file(std::string(HUGETEST_DATA_DIR) + "/" + name);
    std::stringstream buf;
    write_distribution(buf, d);
    const auto back = parse_distribution(buf);
    ASSERT_EQ(back.support_size(), d.support_size());
    for (std::size_t i = 0; i < d.support_size(); ++i) {
      EXPECT_EQ(back.atom(i).point, d.atom(i).point);
      EXPECT_DOUBLE_EQ(back.atom(i).mass, d.atom(i).mass);
    }
  }
}

}  // namespace
}  // namespace hugetest
