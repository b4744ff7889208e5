#include <benchmark/benchmark.h>

#include <vector>

#include "hugetest/builtin_testers.hpp"
#include "hugetest/cluster.hpp"
#include "hugetest/codes.hpp"
#include "hugetest/gap.hpp"
#include "hugetest/instances.hpp"
#include "hugetest/metrics.hpp"
#include "hugetest/oracle.hpp"
#include "hugetest/palindrome.hpp"
#include "hugetest/rng.hpp"
#include "hugetest/transforms.hpp"

namespace {

using namespace hugetest;

BitVector random_vector(Rng& rng, std::size_t n) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, rng.coin());
  return v;
}

ExplicitDistribution random_distribution(Rng& rng, std::size_t n, std::size_t support) {
  DistributionBuilder b(n);
  for (std::size_t i = 0; i < support; ++i) b.add(random_vector(rng, n), 1.0 + static_cast<double>(rng.below(10)));
  return b.build_normalized();
}

void BM_EmdExact(benchmark::State& state) {
  Rng rng(1);
  const auto support = static_cast<std::size_t>(state.range(0));
  const auto a = random_distribution(rng, 256, support);
  const auto b = random_distribution(rng, 256, support);
  for (auto _ : state) benchmark::DoNotOptimize(emd(a, b));
}
BENCHMARK(BM_EmdExact)->Arg(4)->Arg(16)->Arg(64);

void BM_PermutedEmd(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_distribution(rng, n, 4);
  const auto b = random_distribution(rng, n, 4);
  const auto mode = n <= kExactPermutationMaxDimension ? PermutationSearch::Exact : PermutationSearch::Heuristic;
  for (auto _ : state) benchmark::DoNotOptimize(emd_up_to_index_permutation(a, b, mode));
}
BENCHMARK(BM_PermutedEmd)->Arg(6)->Arg(8)->Arg(64);

void BM_TestAndLearn(benchmark::State& state) {
  Rng rng(3);
  const std::vector<BitVector> centers{random_vector(rng, 512), random_vector(rng, 512), random_vector(rng, 512)};
  DistributionBuilder b(512);
  b.add(centers[0], 0.5);
  b.add(centers[1], 0.3);
  b.add(centers[2], 0.2);
  const auto d = b.build();
  ClusterLearnParams p;
  p.zeta = 0.01;
  p.delta = 0.01;
  p.r = 3;
  p.sizing.c_t1 = 0.0105;
  p.sizing.c_t2 = 0.00022;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    HugeObjectOracle o(d, seed);
    benchmark::DoNotOptimize(test_and_learn(o, p, ++seed));
  }
}
BENCHMARK(BM_TestAndLearn)->Unit(benchmark::kMillisecond);

void BM_AlgAdaptive(benchmark::State& state) {
  const auto codes = make_gap_codes(static_cast<unsigned>(state.range(0)), 1);
  const auto base = gen_supp_hard({codes.geo.n, 1.0 / 9.0, InstanceMode::Yes}, 2);
  const auto inst = gen_gap_distribution(codes, base, 3);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    HugeObjectOracle o(inst.distribution, seed);
    benchmark::DoNotOptimize(alg_adaptive(o, codes, 0.25, ++seed));
  }
}
BENCHMARK(BM_AlgAdaptive)->Arg(4)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_ExponentialPlan(benchmark::State& state) {
  const auto t = builtin_tester("complement-pair");
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(exponential_plan(t, draw_coins(t, ++seed), 64));
}
BENCHMARK(BM_ExponentialPlan);

void BM_PalindromeTester(benchmark::State& state) {
  Rng rng(4);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = make_pal_string(n, n / 3, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pal_adaptive_test([&](std::size_t j) { return s[j]; }, n, 0.1, ++seed));
  }
}
BENCHMARK(BM_PalindromeTester)->Arg(1024)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
