#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hugetest/transforms.hpp"

namespace hugetest {

// Non-adaptive: three samples must agree on two random indices (s = 3, q = 6).
TesterProgram support_one_builtin();

// Adaptive tester for "support is {v, complement(v)}" (s = 2, q = 4). The
// second index depends on whether the samples agreed on the first.
TesterProgram complement_pair_builtin();

// Lift of the palindrome tester to 2-letter strings stored as 4 bits
// (s = 2, q = 6): one shared-index support check, then binary search and
// one mirrored-pair check on the first sample.
TesterProgram pal_lift_builtin();

std::vector<std::string> builtin_tester_names();

// Throws InvalidArgument for an unknown name.
TesterProgram builtin_tester(std::string_view name);

}  // namespace hugetest
