#include "hugetest/palindrome.hpp"

#include <cmath>
#include <unordered_map>

#include "hugetest/error.hpp"

namespace hugetest {

namespace {

bool is_low(Letter c) noexcept { return c <= 1; }

bool is_mirror(std::span<const Letter> s, bool low) {
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (is_low(s[a]) != low || s[a] != s[s.size() - 1 - a]) return false;
  }
  return true;
}

}  // namespace

bool is_pal_string(std::span<const Letter> s) {
  std::size_t boundary = 0;
  while (boundary < s.size() && is_low(s[boundary])) ++boundary;
  return is_mirror(s.first(boundary), true) && is_mirror(s.subspan(boundary), false);
}

std::vector<Letter> make_pal_string(std::size_t n, std::size_t x_len, Rng& rng) {
  if (x_len > n) throw InvalidArgument("x_len exceeds string length");
  std::vector<Letter> s(n);
  auto fill = [&](std::size_t begin, std::size_t len, Letter base) {
    for (std::size_t a = 0; a < (len + 1) / 2; ++a) {
      const auto c = static_cast<Letter>(base + (rng.coin() ? 1 : 0));
      s[begin + a] = c;
      s[begin + len - 1 - a] = c;
    }
  };
  fill(0, x_len, 0);
  fill(x_len, n - x_len, 2);
  return s;
}

BitVector encode_letters(std::span<const Letter> s) {
  BitVector out(2 * s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] > 3) throw InvalidArgument("letter outside {0,1,2,3}");
    out.set(2 * j, (s[j] >> 1) & 1u);
    out.set(2 * j + 1, s[j] & 1u);
  }
  return out;
}

Letter decode_letter(bool high, bool low) noexcept {
  return static_cast<Letter>((high ? 2 : 0) | (low ? 1 : 0));
}

PalindromeReport pal_adaptive_test(const LetterOracle& letters, std::size_t n, double epsilon, std::uint64_t seed,
                                   const PalindromeParams& params) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (n == 0) throw InvalidArgument("string length must be positive");
  PalindromeReport report;
  std::unordered_map<std::size_t, Letter> cache;
  // Positions are 1-based here; position p reads letter p - 1.
  auto read = [&](std::size_t p) {
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    const Letter c = letters(p - 1);
    cache.emplace(p, c);
    return c;
  };
  // Invariant: lo == 0 or V_lo in {0,1}; hi == n + 1 or V_hi in {2,3}.
  std::size_t lo = 0;
  std::size_t hi = n + 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (is_low(read(mid))) lo = mid;
    else hi = mid;
  }
  const std::size_t i = lo;
  report.boundary = i;
  Rng rng(seed);
  const auto iterations = static_cast<std::size_t>(std::ceil(params.c_pal / epsilon));
  for (std::size_t it = 0; it < iterations; ++it) {
    ++report.iterations;
    const std::size_t j = 1 + rng.below(n);
    const std::size_t mirror = j <= i ? i + 1 - j : n + i + 1 - j;
    const Letter a = read(j);
    const Letter b = read(mirror);
    if (a != b || is_low(a) != (j <= i)) {
      report.verdict = Verdict::Reject;
      break;
    }
  }
  report.queries = cache.size();
  return report;
}

StringTester palindrome_string_tester(PalindromeParams params) {
  return [params](const LetterOracle& letters, std::size_t n, double epsilon, std::uint64_t seed) {
    return pal_adaptive_test(letters, n, epsilon, seed, params).verdict;
  };
}

LiftReport lift_one_p_test(HugeObjectOracle& oracle, const StringTester& tester, double epsilon, std::uint64_t seed,
                           const SupportOneParams& support) {
  if (oracle.dimension() % 2 != 0) throw InvalidArgument("lifted strings use two bits per letter");
  LiftReport report;
  if (support_one_test(oracle, epsilon / 20.0, derive_seed(seed, 0), support).verdict == Verdict::Reject) {
    report.verdict = Verdict::Reject;
    report.support_rejected = true;
    return report;
  }
  const SampleId sid = oracle.draw_sample();
  LetterOracle letters = [&oracle, sid](std::size_t j) {
    const bool high = oracle.query_bit(sid, 2 * j);
    return decode_letter(high, oracle.query_bit(sid, 2 * j + 1));
  };
  report.verdict = tester(letters, oracle.dimension() / 2, epsilon / 2.0, derive_seed(seed, 1));
  return report;
}

}  // namespace hugetest
