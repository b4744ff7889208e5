#pragma once

#include <string_view>

namespace hugetest {

enum class Verdict { Accept, Reject };

constexpr std::string_view to_string(Verdict v) noexcept { return v == Verdict::Accept ? "accept" : "reject"; }

}  // namespace hugetest
