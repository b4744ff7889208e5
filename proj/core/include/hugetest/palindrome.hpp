#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hugetest/bitvector.hpp"
#include "hugetest/gap.hpp"
#include "hugetest/oracle.hpp"
#include "hugetest/rng.hpp"
#include "hugetest/verdict.hpp"

namespace hugetest {

using Letter = std::uint8_t;  // alphabet {0,1,2,3}
using LetterOracle = std::function<Letter(std::size_t)>;

// Membership: the string is XY with X a palindrome over {0,1} and Y a
// palindrome over {2,3} (either part may be empty).
bool is_pal_string(std::span<const Letter> s);

// Random member with |X| = x_len.
std::vector<Letter> make_pal_string(std::size_t n, std::size_t x_len, Rng& rng);

// Two bits per letter, high bit first.
BitVector encode_letters(std::span<const Letter> s);
Letter decode_letter(bool high, bool low) noexcept;

struct PalindromeParams {
  double c_pal = 4.0;
};

struct PalindromeReport {
  Verdict verdict = Verdict::Accept;
  std::size_t boundary = 0;  // number of leading {0,1} letters found by binary search
  std::size_t iterations = 0;
  std::size_t queries = 0;  // distinct letters read
};

PalindromeReport pal_adaptive_test(const LetterOracle& letters, std::size_t n, double epsilon, std::uint64_t seed,
                                   const PalindromeParams& params = {});

using StringTester = std::function<Verdict(const LetterOracle&, std::size_t n, double epsilon, std::uint64_t seed)>;

StringTester palindrome_string_tester(PalindromeParams params = {});

struct LiftReport {
  Verdict verdict = Verdict::Accept;
  bool support_rejected = false;
};

// Support-1 test at epsilon/20, then one fresh sample handed to the string
// tester at epsilon/2 with each letter read through two bit queries.
LiftReport lift_one_p_test(HugeObjectOracle& oracle, const StringTester& tester, double epsilon, std::uint64_t seed,
                           const SupportOneParams& support = {});

}  // namespace hugetest
