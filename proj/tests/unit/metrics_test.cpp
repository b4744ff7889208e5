#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "hugetest/error.hpp"
#include "hugetest/metrics.hpp"
#include "hugetest/min_cost_flow.hpp"
#include "hugetest/rng.hpp"
#include "oracles.hpp"

namespace hugetest {
namespace {

BitVector bits(const char* s) { return BitVector::from_string(s); }

ExplicitDistribution point(const char* s) { return ExplicitDistribution::point_mass(bits(s)); }

ExplicitDistribution uniform_of(std::initializer_list<const char*> list) {
  std::vector<BitVector> pts;
  for (const char* s : list) pts.push_back(bits(s));
  return ExplicitDistribution::uniform(pts);
}

TEST(Hamming, NormalisedDistance) {
  EXPECT_DOUBLE_EQ(hamming_norm(bits("00"), bits("11")), 1.0);
  EXPECT_DOUBLE_EQ(hamming_norm(bits("0101"), bits("0101")), 0.0);
  EXPECT_DOUBLE_EQ(hamming_norm(bits("0101"), bits("0011")), 0.5);
  EXPECT_THROW(hamming_norm(bits("01"), bits("011")), InvalidArgument);
}

TEST(Hamming, ProjectedDistance) {
  const std::vector<std::size_t> all{0, 1, 2, 3};
  EXPECT_DOUBLE_EQ(projected_distance(bits("0101"), bits("0011"), all), 0.5);
  const std::vector<std::size_t> some{0, 3};
  EXPECT_DOUBLE_EQ(projected_distance(bits("0101"), bits("0101"), some), 0.0);
  EXPECT_THROW(projected_distance(bits("01"), bits("01"), std::vector<std::size_t>{}), InvalidArgument);
  EXPECT_THROW(projected_distance(bits("01"), bits("01"), std::vector<std::size_t>{2}), InvalidArgument);
}

TEST(Hamming, ProjectedDistanceConcentrates) {
  const std::size_t n = 1024;
  BitVector u(n);
  BitVector v(n);
  for (std::size_t i = 0; i < 307; ++i) v.set(i * 3, true);
  ASSERT_NEAR(hamming_norm(u, v), 0.3, 0.001);
  Rng rng(17);
  int within = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto k = rng.sample_without_replacement(n, 400);
    within += std::abs(projected_distance(u, v, k) - 0.3) <= 0.1;
  }
  EXPECT_GE(within, 990);
}

TEST(Emd, SpecExamples) {
  const auto d = uniform_of({"00", "11"});
  EXPECT_NEAR(emd(d, d), 0.0, 1e-15);
  EXPECT_NEAR(emd(point("00"), point("11")), 1.0, 1e-15);
  EXPECT_NEAR(emd(d, point("00")), 0.5, 1e-15);
  EXPECT_NEAR(testing::lp_emd(d, point("00")), 0.5, 1e-12);
  EXPECT_THROW(emd(point("00"), point("000")), InvalidArgument);
}

TEST(Emd, MatchesLpOracleAndFlowVerifies) {
  Rng rng(101);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const std::size_t cap = std::min<std::size_t>(5, std::size_t{1} << n);
    const auto a = testing::random_distribution(rng, n, 1 + rng.below(cap));
    const auto b = testing::random_distribution(rng, n, 1 + rng.below(cap));
    const EmdResult r = emd_exact(a, b);
    EXPECT_NEAR(r.value, testing::lp_emd(a, b), 1e-9);
    EXPECT_NEAR(verify_flow(a, b, r.flow), r.value, 1e-9);
    EXPECT_LE(r.value, 0.5 * l1_distance(a, b) + 1e-12);
  }
}

TEST(Emd, MetricOnRandomTriples) {
  Rng rng(202);
  for (int t = 0; t < 100; ++t) {
    const auto a = testing::random_distribution(rng, 6, 1 + rng.below(5));
    const auto b = testing::random_distribution(rng, 6, 1 + rng.below(5));
    const auto c = testing::random_distribution(rng, 6, 1 + rng.below(5));
    EXPECT_NEAR(emd(a, b), emd(b, a), 1e-9);
    EXPECT_LE(emd(a, c), emd(a, b) + emd(b, c) + 1e-9);
  }
}

TEST(Emd, ClusteredNeighbourhoodBound) {
  // D1 puts 1 - xi within eta of the centers; D2 puts w_i on points within
  // kappa of center i. The transport cost is at most eta + xi + kappa.
  Rng rng(303);
  const std::size_t n = 12;
  for (int t = 0; t < 40; ++t) {
    std::vector<BitVector> centers{testing::random_bitvector(rng, n), testing::random_bitvector(rng, n)};
    const double w0 = 0.3 + 0.4 * rng.uniform();
    const std::vector<double> w{w0, 1.0 - w0};
    const double xi = 0.1;
    DistributionBuilder b1(n);
    DistributionBuilder b2(n);
    for (std::size_t i = 0; i < 2; ++i) {
      BitVector near1 = centers[i];
      near1.flip(rng.below(n));  // eta = 1/n
      BitVector near2 = centers[i];
      near2.flip(rng.below(n));
      near2.flip(rng.below(n));  // kappa <= 2/n
      b1.add(near1, (1.0 - xi) * w[i]);
      b2.add(near2, w[i]);
    }
    b1.add(testing::random_bitvector(rng, n), xi);
    const double bound = 1.0 / n + xi + 2.0 / n;
    EXPECT_LE(emd(b1.build_normalized(), b2.build_normalized()), bound + 1e-9);
  }
}

TEST(Emd, VerifyFlowRejectsBadMarginals) {
  const auto d = uniform_of({"00", "11"});
  FlowSolution bad;
  bad.pairs.push_back({0, 0, 1.0});
  EXPECT_THROW(verify_flow(d, point("00"), bad), std::logic_error);
}

TEST(Matrix, CorrespondingMatrixRoundTrip) {
  const CorrespondingMatrix m({bits("00"), bits("11"), bits("00"), bits("00")});
  const auto d = m.to_distribution();
  EXPECT_DOUBLE_EQ(d.mass_of(bits("00")), 0.75);
  EXPECT_EQ(m.column(1), bits("0100"));
  const auto back = CorrespondingMatrix::from_distribution(d, 4);
  EXPECT_EQ(back.rows(), 4u);
  EXPECT_DOUBLE_EQ(back.to_distribution().mass_of(bits("11")), 0.25);
}

TEST(Matrix, MinPermDistanceExamples) {
  const CorrespondingMatrix l({bits("00"), bits("11")});
  const CorrespondingMatrix m({bits("11"), bits("00")});
  EXPECT_DOUBLE_EQ(min_perm_matrix_distance(l, l), 0.0);
  EXPECT_DOUBLE_EQ(min_perm_matrix_distance(l, m), 0.0);
  EXPECT_THROW(min_perm_matrix_distance(l, CorrespondingMatrix({bits("000"), bits("111")})), InvalidArgument);
}

TEST(Matrix, MinPermDistanceMatchesFactorialBruteForce) {
  Rng rng(404);
  for (int t = 0; t < 100; ++t) {
    std::vector<BitVector> a;
    std::vector<BitVector> b;
    for (int i = 0; i < 5; ++i) {
      a.push_back(testing::random_bitvector(rng, 8));
      b.push_back(testing::random_bitvector(rng, 8));
    }
    EXPECT_DOUBLE_EQ(min_perm_matrix_distance(CorrespondingMatrix(a), CorrespondingMatrix(b)),
                     testing::brute_row_perm_distance(a, b));
  }
}

TEST(Assignment, SmallMatrixOptimum) {
  // Rows pick columns 1, 0, 2 for a total of 1 + 2 + 2 = 5.
  const std::vector<std::int64_t> cost{4, 1, 3, 2, 0, 5, 3, 2, 2};
  const auto a = solve_assignment(cost, 3);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < 3; ++i) total += cost[i * 3 + a[i]];
  EXPECT_EQ(total, 5);
}

TEST(Transport, IntegerOptimum) {
  TransportProblem p;
  p.supply = {3, 2};
  p.demand = {1, 4};
  p.cost = {1, 2, 3, 1};
  const auto s = solve_transport(p);
  // Ship 1 on (0,0), 2 on (0,1), 2 on (1,1): 1 + 4 + 2.
  EXPECT_EQ(static_cast<long long>(s.objective), 7);
}

TEST(PermutedEmd, OrbitAndWeightExamples) {
  Rng rng(505);
  for (int t = 0; t < 20; ++t) {
    const auto d = testing::random_distribution(rng, 5, 1 + rng.below(4));
    const auto moved = permute_distribution(d, Permutation::random(5, rng));
    EXPECT_NEAR(emd_up_to_index_permutation(d, moved, PermutationSearch::Exact), 0.0, 1e-12);
  }
  EXPECT_NEAR(emd_up_to_index_permutation(point("110000"), point("000101"), PermutationSearch::Exact), 0.0, 1e-12);
  EXPECT_THROW(emd_up_to_index_permutation(point("000000000"), point("000000000"), PermutationSearch::Exact),
               InvalidArgument);
}

TEST(PermutedEmd, ExactMatchesBruteForceAndHeuristicIsUpperBound) {
  Rng rng(606);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.below(4);
    const auto a = testing::random_distribution(rng, n, 1 + rng.below(4));
    const auto b = testing::random_distribution(rng, n, 1 + rng.below(4));
    const double exact = emd_up_to_index_permutation(a, b, PermutationSearch::Exact);
    EXPECT_NEAR(exact, testing::brute_permuted_emd(a, b), 1e-9);
    const auto h = emd_up_to_index_permutation_detail(a, b, PermutationSearch::Heuristic);
    EXPECT_GE(h.value, exact - 1e-9);
    EXPECT_NEAR(h.value, emd(a, permute_distribution(b, h.sigma)), 1e-12);
  }
}

TEST(PermutedEmd, FixtureValue) {
  // Swapping the coordinates of {10, 11} gives {01, 11}, which is still at
  // EMD 1/2 from {00, 01}.
  const auto a = uniform_of({"00", "01"});
  const auto b = uniform_of({"10", "11"});
  EXPECT_NEAR(emd(a, b), 0.5, 1e-15);
  EXPECT_NEAR(emd_up_to_index_permutation(a, b, PermutationSearch::Exact), 0.5, 1e-15);
}

}  // namespace
}  // namespace hugetest
