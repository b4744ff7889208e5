#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hugetest/oracle.hpp"
#include "hugetest/verdict.hpp"

namespace hugetest {

struct DrawSample {};

// `sample` is the tester's own draw order, starting at 0.
struct QueryCell {
  std::size_t sample = 0;
  std::size_t index = 0;
  friend auto operator<=>(const QueryCell&, const QueryCell&) = default;
};

struct Decide {
  Verdict verdict = Verdict::Accept;
};

using TesterAction = std::variant<DrawSample, QueryCell, Decide>;

struct AnsweredQuery {
  QueryCell cell;
  bool bit = false;
};

struct TesterHistory {
  std::size_t dimension = 0;
  std::size_t samples_drawn = 0;
  std::vector<AnsweredQuery> answers;
};

using CoinSpan = std::span<const std::uint64_t>;

// A tester is a pure step function of (coins, history). The driver calls it
// repeatedly, appending each answer, until it returns Decide.
struct TesterProgram {
  std::string name;
  std::size_t declared_s = 0;
  std::size_t declared_q = 0;
  std::size_t coin_count = 0;
  std::function<TesterAction(CoinSpan, const TesterHistory&)> step;
};

// Re-executes straight-line tester logic against a history. draw() and
// query() succeed while the history covers them; otherwise they record the
// next action and report that the caller must return pending().
class TesterCursor {
 public:
  explicit TesterCursor(const TesterHistory& history) noexcept : history_(history) {}

  std::size_t dimension() const noexcept { return history_.dimension; }
  bool draw();
  std::optional<bool> query(std::size_t sample, std::size_t index);
  // Throws std::logic_error if the history holds actions the logic never took.
  TesterAction decide(Verdict v) const;
  const TesterAction& pending() const noexcept { return pending_; }

 private:
  const TesterHistory& history_;
  std::size_t draws_ = 0;
  std::size_t answers_ = 0;
  TesterAction pending_ = DrawSample{};
};

struct TesterRun {
  Verdict verdict = Verdict::Accept;
  TesterHistory history;
  OracleCounters counters;
};

std::vector<std::uint64_t> draw_coins(const TesterProgram& t, std::uint64_t seed);

// Throws BudgetExceeded when the tester oversteps its declared budgets.
TesterRun run_tester(const TesterProgram& t, HugeObjectOracle& oracle, std::uint64_t seed);
TesterRun run_tester_with_coins(const TesterProgram& t, HugeObjectOracle& oracle, CoinSpan coins);

using AnswerFunction = std::function<bool(const QueryCell&)>;

// Drives t without an oracle; answers come from `answer`.
TesterRun simulate_tester(const TesterProgram& t, CoinSpan coins, std::size_t dimension, const AnswerFunction& answer);

// Every cell reachable over all answer branches for fixed coins, sorted.
std::vector<QueryCell> exponential_plan(const TesterProgram& t, CoinSpan coins, std::size_t dimension);

// Requires declared_q <= 16. Same coins as t; declared_q becomes 2^q - 1.
TesterProgram exponential_sim(const TesterProgram& t);

// Correct only for index-invariant properties. Uses t.coin_count + q coins
// and queries exactly s*q cells. Throws InvalidArgument at run time if q > n.
TesterProgram quadratic_sim(const TesterProgram& t);

struct NonAdaptiveCheck {
  std::size_t dimension = 16;
  std::size_t coin_streams = 8;
  std::uint64_t seed = 0;
};

// True iff, for every probed coin stream, the sorted multiset of queried
// cells does not depend on the answers.
bool verify_nonadaptive(const TesterProgram& t, const NonAdaptiveCheck& check = {});

}  // namespace hugetest
