#include "hugetest/builtin_testers.hpp"

#include <map>

#include "hugetest/error.hpp"
#include "hugetest/palindrome.hpp"

namespace hugetest {

TesterProgram support_one_builtin() {
  TesterProgram t{"support1", 3, 6, 2, {}};
  t.step = [](CoinSpan coins, const TesterHistory& h) -> TesterAction {
    TesterCursor c(h);
    const std::size_t n = c.dimension();
    const std::size_t idx[2] = {static_cast<std::size_t>(coins[0] % n), static_cast<std::size_t>(coins[1] % n)};
    for (int k = 0; k < 3; ++k) {
      if (!c.draw()) return c.pending();
    }
    bool agree = true;
    for (std::size_t j : idx) {
      std::optional<bool> first;
      for (std::size_t s = 0; s < 3; ++s) {
        const auto bit = c.query(s, j);
        if (!bit) return c.pending();
        if (!first) first = bit;
        else if (*first != *bit) agree = false;
      }
    }
    return c.decide(agree ? Verdict::Accept : Verdict::Reject);
  };
  return t;
}

TesterProgram complement_pair_builtin() {
  TesterProgram t{"complement-pair", 2, 4, 3, {}};
  t.step = [](CoinSpan coins, const TesterHistory& h) -> TesterAction {
    TesterCursor c(h);
    const std::size_t n = c.dimension();
    if (!c.draw() || !c.draw()) return c.pending();
    const std::size_t j1 = coins[0] % n;
    const auto a0 = c.query(0, j1);
    if (!a0) return c.pending();
    const auto a1 = c.query(1, j1);
    if (!a1) return c.pending();
    const bool eq = *a0 == *a1;
    const std::size_t j2 = (eq ? coins[1] : coins[2]) % n;
    const auto b0 = c.query(0, j2);
    if (!b0) return c.pending();
    const auto b1 = c.query(1, j2);
    if (!b1) return c.pending();
    return c.decide((*b0 == *b1) == eq ? Verdict::Accept : Verdict::Reject);
  };
  return t;
}

TesterProgram pal_lift_builtin() {
  TesterProgram t{"pal-lift", 2, 6, 2, {}};
  t.step = [](CoinSpan coins, const TesterHistory& h) -> TesterAction {
    TesterCursor c(h);
    if (c.dimension() != 4) throw InvalidArgument("pal-lift reads 2-letter strings of 4 bits");
    constexpr std::size_t letters = 2;
    if (!c.draw() || !c.draw()) return c.pending();
    const std::size_t shared = coins[0] % c.dimension();
    const auto s0 = c.query(0, shared);
    if (!s0) return c.pending();
    const auto s1 = c.query(1, shared);
    if (!s1) return c.pending();
    if (*s0 != *s1) return c.decide(Verdict::Reject);

    // Positions are 1-based as in the string tester.
    std::map<std::size_t, Letter> cache;
    bool stalled = false;
    auto read = [&](std::size_t p) -> Letter {
      if (auto it = cache.find(p); it != cache.end()) return it->second;
      const auto hi = c.query(0, 2 * (p - 1));
      if (!hi) {
        stalled = true;
        return 0;
      }
      const auto lo = c.query(0, 2 * (p - 1) + 1);
      if (!lo) {
        stalled = true;
        return 0;
      }
      return cache[p] = decode_letter(*hi, *lo);
    };
    std::size_t lo = 0;
    std::size_t hi = letters + 1;
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      const Letter m = read(mid);
      if (stalled) return c.pending();
      if (m <= 1) lo = mid;
      else hi = mid;
    }
    const std::size_t j = 1 + static_cast<std::size_t>(coins[1] % letters);
    const std::size_t mirror = j <= lo ? lo + 1 - j : letters + lo + 1 - j;
    const Letter a = read(j);
    if (stalled) return c.pending();
    const Letter b = read(mirror);
    if (stalled) return c.pending();
    const bool ok = a == b && (a <= 1) == (j <= lo);
    return c.decide(ok ? Verdict::Accept : Verdict::Reject);
  };
  return t;
}

std::vector<std::string> builtin_tester_names() { return {"support1", "complement-pair", "pal-lift"}; }

TesterProgram builtin_tester(std::string_view name) {
  if (name == "support1") return support_one_builtin();
  if (name == "complement-pair") return complement_pair_builtin();
  if (name == "pal-lift") return pal_lift_builtin();
  throw InvalidArgument("unknown builtin tester: " + std::string(name));
}

}  // namespace hugetest
