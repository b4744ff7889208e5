#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hugetest/error.hpp"
#include "hugetest/oracle.hpp"
#include "hugetest/palindrome.hpp"
#include "hugetest/rng.hpp"

namespace hugetest {
namespace {

// Tries every split point directly.
bool naive_pal(const std::vector<Letter>& s) {
  const std::size_t n = s.size();
  for (std::size_t k = 0; k <= n; ++k) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) {
      if (a < k) ok = s[a] <= 1 && s[a] == s[k - 1 - a];
      else ok = s[a] >= 2 && s[a] == s[n - 1 - (a - k)];
    }
    if (ok) return true;
  }
  return false;
}

LetterOracle over(const std::vector<Letter>& s) {
  return [&s](std::size_t j) { return s[j]; };
}

TEST(PalString, MembershipMatchesNaiveSplitSearch) {
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<Letter> s(n);
    for (std::size_t code = 0; code < (std::size_t{1} << (2 * n)); ++code) {
      for (std::size_t j = 0; j < n; ++j) s[j] = static_cast<Letter>((code >> (2 * j)) & 3u);
      EXPECT_EQ(is_pal_string(s), naive_pal(s));
    }
  }
}

TEST(PalString, GeneratorAndEncoding) {
  Rng rng(1);
  for (std::size_t x = 0; x <= 9; ++x) EXPECT_TRUE(is_pal_string(make_pal_string(9, x, rng)));
  EXPECT_THROW(make_pal_string(3, 4, rng), InvalidArgument);
  const std::vector<Letter> s{0, 3, 2, 1};
  EXPECT_EQ(encode_letters(s).to_string(), "00111001");
  for (Letter c = 0; c < 4; ++c) EXPECT_EQ(decode_letter((c >> 1) & 1u, c & 1u), c);
}

TEST(PalTester, AcceptsMembersAlways) {
  Rng rng(2);
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto s = make_pal_string(1024, rng.below(1025), rng);
    EXPECT_EQ(pal_adaptive_test(over(s), s.size(), 0.1, t).verdict, Verdict::Accept);
  }
  const std::vector<Letter> twos(64, 2);
  const auto r = pal_adaptive_test(over(twos), twos.size(), 0.1, 3);
  EXPECT_EQ(r.verdict, Verdict::Accept);
  EXPECT_EQ(r.boundary, 0u);
}

TEST(PalTester, RejectsRandomStringsWithinQueryBound) {
  Rng rng(3);
  int rejects = 0;
  const double bound = 2.0 * std::log2(1024.0) + 40.0 / 0.1;
  for (std::uint64_t t = 0; t < 60; ++t) {
    std::vector<Letter> s(1024);
    for (auto& c : s) c = static_cast<Letter>(rng.below(4));
    const auto r = pal_adaptive_test(over(s), s.size(), 0.1, t);
    rejects += r.verdict == Verdict::Reject;
    EXPECT_LE(static_cast<double>(r.queries), bound);
  }
  EXPECT_GE(rejects, 40);
}

TEST(Lift, Examples) {
  Rng rng(4);
  const auto member = make_pal_string(256, 100, rng);
  std::vector<Letter> far(256);
  for (auto& c : far) c = static_cast<Letter>(rng.below(4));
  const auto tester = palindrome_string_tester();
  const std::vector<BitVector> pair{encode_letters(member), encode_letters(far)};
  int member_accepts = 0;
  int pair_rejects = 0;
  int far_rejects = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    HugeObjectOracle a(ExplicitDistribution::point_mass(encode_letters(member)), t);
    member_accepts += lift_one_p_test(a, tester, 0.2, t).verdict == Verdict::Accept;
    HugeObjectOracle b(ExplicitDistribution::uniform(pair), t);
    const auto rb = lift_one_p_test(b, tester, 0.2, t);
    pair_rejects += rb.verdict == Verdict::Reject && rb.support_rejected;
    HugeObjectOracle c(ExplicitDistribution::point_mass(encode_letters(far)), t);
    far_rejects += lift_one_p_test(c, tester, 0.2, t).verdict == Verdict::Reject;
  }
  EXPECT_EQ(member_accepts, 20);
  EXPECT_GE(pair_rejects, 18);
  EXPECT_GE(far_rejects, 14);
  HugeObjectOracle odd(ExplicitDistribution::point_mass(BitVector(3)), 0);
  EXPECT_THROW(lift_one_p_test(odd, tester, 0.2, 0), InvalidArgument);
}

}  // namespace
}  // namespace hugetest
