#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "hugetest/codes.hpp"
#include "hugetest/error.hpp"
#include "hugetest/gap.hpp"
#include "hugetest/instances.hpp"
#include "hugetest/metrics.hpp"
#include "oracles.hpp"

namespace hugetest {
namespace {

std::size_t pairwise_column_min(const std::vector<BitVector>& rows) {
  std::size_t best = rows.size() + 1;
  const std::size_t cols = rows.front().size();
  for (std::size_t a = 0; a < cols; ++a) {
    for (std::size_t b = a + 1; b < cols; ++b) {
      std::size_t d = 0;
      for (const auto& r : rows) d += r[a] != r[b];
      best = std::min(best, d);
    }
  }
  return best;
}

// Multiplicity of each distinct column, sorted.
std::vector<std::size_t> column_class_sizes(const CorrespondingMatrix& m) {
  std::map<BitVector, std::size_t> classes;
  for (std::size_t j = 0; j < m.cols(); ++j) ++classes[m.column(j)];
  std::vector<std::size_t> sizes;
  for (const auto& [c, count] : classes) sizes.push_back(count);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

TEST(PvcMatrix, SeparationExamples) {
  PvcParams p;
  p.k_rows = 8;
  p.ell = 4;
  p.n = 4;
  p.seed = 3;
  const auto a = gen_pvc_matrix(p);
  EXPECT_EQ(a.size(), 8u);
  EXPECT_GE(pairwise_column_min(a), 3u);
  EXPECT_EQ(min_column_distance(a), pairwise_column_min(a));

  p.ell = 1;
  p.ell_prime = 1;
  EXPECT_EQ(gen_pvc_matrix(p).front().size(), 1u);

  p.k_rows = 2;
  p.k_prime = 1;
  p.ell = 8;
  p.n = 8;
  EXPECT_THROW(gen_pvc_matrix(p, 200), ConstructionFailed);
}

TEST(PvcMatrix, ValidatesParams) {
  PvcParams p;
  p.n = 12;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.n = 16;
  p.ell_prime = 16;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.ell_prime = 2;
  p.k_prime = 9;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(BlowUp, Examples) {
  EXPECT_EQ(blow_up(BitVector::from_string("01"), 4).to_string(), "0011");
  EXPECT_EQ(blow_up(BitVector::from_string("0110"), 4).to_string(), "0110");
  EXPECT_THROW(blow_up(BitVector::from_string("011"), 4), InvalidArgument);
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto u = testing::random_bitvector(rng, 8);
    const auto v = testing::random_bitvector(rng, 8);
    EXPECT_DOUBLE_EQ(hamming_norm(blow_up(u, 64), blow_up(v, 64)), hamming_norm(u, v));
  }
}

TEST(PvcInstances, SupportAndColumnClasses) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PvcParams p;
    p.seed = seed;
    const auto a = gen_pvc_matrix(p);
    const auto yes = gen_pvc_yes(p);
    EXPECT_EQ(yes.distribution.support_size(), std::set<BitVector>(a.begin(), a.end()).size());
    EXPECT_EQ(column_class_sizes(yes.matrix), std::vector<std::size_t>(p.ell, p.n / p.ell));
    const auto noq = gen_pvc_no_query(p);
    EXPECT_EQ(column_class_sizes(noq.matrix), std::vector<std::size_t>(p.ell_prime, p.n / p.ell_prime));
    const auto nos = gen_pvc_no_sample(p);
    EXPECT_EQ(nos.matrix.rows(), p.k_prime);
    EXPECT_EQ(nos.distribution.support_size(), p.k_prime);
  }
}

TEST(PvcInstances, ExactFarnessMatchesBruteForce) {
  PvcParams p;
  p.k_rows = 6;
  p.ell = 4;
  p.ell_prime = 2;
  p.n = 8;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    p.seed = seed;
    const auto yes = gen_pvc_yes(p);
    const auto no = gen_pvc_no_query(p);
    const double fast = pvc_exact_farness(yes.matrix, no.matrix);
    const auto cy = matrix_columns(yes.matrix.row_vectors());
    const auto cn = matrix_columns(no.matrix.row_vectors());
    const double brute =
        testing::brute_permuted_emd(ExplicitDistribution::uniform(cy), ExplicitDistribution::uniform(cn));
    EXPECT_NEAR(fast, brute, 1e-9);
  }
}

TEST(FarCodewords, Examples) {
  EXPECT_EQ(gen_far_codeword_set(16, 2, 4, 1).size(), 2u);
  const auto set = gen_far_codeword_set(32, 64, 11, 2);
  ASSERT_EQ(set.size(), 64u);
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) EXPECT_GE(hamming_abs(set[a], set[b]), 11u);
  }
  // Plotkin: at length 8 and distance 6 at most 3 codewords exist.
  EXPECT_THROW(gen_far_codeword_set(8, 4, 6, 3, 5000), ConstructionFailed);
}

TEST(SuppHard, SupportSizesAndGranularity) {
  for (std::size_t n : {16u, 128u}) {
    for (auto mode : {InstanceMode::Yes, InstanceMode::No}) {
      const auto w = gen_supp_hard({n, 1.0 / 9.0, mode}, n);
      ASSERT_EQ(w.size(), 2 * n);
      std::size_t support = 0;
      for (double x : w) {
        support += x > 0.0;
        const double units = x * 2.0 * static_cast<double>(n);
        EXPECT_NEAR(units, std::round(units), 1e-9);
      }
      EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
      if (mode == InstanceMode::Yes) {
        EXPECT_EQ(support, n);
      } else {
        EXPECT_GE(static_cast<double>(support), (1.0 + 2.0 / 9.0) * static_cast<double>(n) - 1e-9);
      }
    }
  }
  EXPECT_THROW(gen_supp_hard({16, 0.2, InstanceMode::No}, 0), InvalidArgument);
}

TEST(GapDistribution, MassesAndPermutation) {
  const auto codes = make_gap_codes(4, 1);
  const auto base = gen_supp_hard({16, 1.0 / 9.0, InstanceMode::Yes}, 5);
  const auto inst = gen_gap_distribution(codes, base, 6);
  double total = 0.0;
  for (const auto& a : inst.distribution.atoms()) total += a.mass;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto special = special_vectors(codes.geo);
  EXPECT_NEAR(inst.canonical.mass_of(special.u), codes.geo.gap_alpha, 1e-12);
  EXPECT_NEAR(inst.canonical.mass_of(special.v.back()), codes.geo.gap_alpha / static_cast<double>(codes.geo.b), 1e-12);
  for (const auto& a : inst.canonical.atoms()) {
    EXPECT_NEAR(inst.distribution.mass_of(apply_permutation(a.point, inst.pi)), a.mass, 1e-15);
  }
  // Each encoded atom is a valid FE word whose payload has one of the n
  // chosen base elements.
  std::set<BitVector> payloads;
  for (const auto& a : inst.canonical.atoms()) {
    const auto d = fe_decode_all(codes.geo, codes.se, codes.ge, a.point);
    if (d.valid) payloads.insert(d.x);
  }
  EXPECT_EQ(payloads.size(), 16u);

  std::vector<double> bad(32, 0.0);
  bad[0] = 0.7;
  bad[1] = 0.3;
  EXPECT_THROW(gen_gap_distribution(codes, bad, 1), InvalidArgument);
}

}  // namespace
}  // namespace hugetest
