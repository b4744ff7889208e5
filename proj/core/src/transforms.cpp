#include "hugetest/transforms.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "hugetest/error.hpp"
#include "hugetest/rng.hpp"

namespace hugetest {

bool TesterCursor::draw() {
  if (draws_ < history_.samples_drawn) {
    ++draws_;
    return true;
  }
  if (answers_ < history_.answers.size()) throw std::logic_error("tester replay diverged: draw after recorded answers");
  pending_ = DrawSample{};
  return false;
}

std::optional<bool> TesterCursor::query(std::size_t sample, std::size_t index) {
  const QueryCell cell{sample, index};
  if (answers_ < history_.answers.size()) {
    const AnsweredQuery& a = history_.answers[answers_++];
    if (a.cell != cell) throw std::logic_error("tester replay diverged: different query cell");
    return a.bit;
  }
  pending_ = cell;
  return std::nullopt;
}

TesterAction TesterCursor::decide(Verdict v) const {
  if (draws_ != history_.samples_drawn || answers_ != history_.answers.size()) {
    throw std::logic_error("tester replay diverged: decision before the recorded end");
  }
  return Decide{v};
}

namespace {

// Runs t to a decision. `draw` is called per sample, `answer` per query.
template <typename DrawFn, typename AnswerFn>
TesterRun drive(const TesterProgram& t, CoinSpan coins, std::size_t dimension, DrawFn&& draw, AnswerFn&& answer) {
  if (coins.size() < t.coin_count) throw InvalidArgument("coin stream shorter than the tester's coin count");
  TesterRun run;
  run.history.dimension = dimension;
  for (;;) {
    const TesterAction action = t.step(coins, run.history);
    if (const auto* d = std::get_if<Decide>(&action)) {
      run.verdict = d->verdict;
      return run;
    }
    if (std::holds_alternative<DrawSample>(action)) {
      if (run.history.samples_drawn >= t.declared_s) throw BudgetExceeded(t.name + ": sample budget exceeded");
      draw();
      ++run.history.samples_drawn;
      continue;
    }
    const auto& cell = std::get<QueryCell>(action);
    if (run.history.answers.size() >= t.declared_q) throw BudgetExceeded(t.name + ": query budget exceeded");
    if (cell.sample >= run.history.samples_drawn) throw InvalidArgument(t.name + ": query to an undrawn sample");
    if (cell.index >= dimension) throw InvalidArgument(t.name + ": query index out of range");
    run.history.answers.push_back(AnsweredQuery{cell, answer(cell)});
  }
}

void explore(const TesterProgram& t, CoinSpan coins, TesterHistory history, std::set<QueryCell>& cells) {
  for (;;) {
    const TesterAction action = t.step(coins, history);
    if (std::holds_alternative<Decide>(action)) return;
    if (std::holds_alternative<DrawSample>(action)) {
      if (history.samples_drawn >= t.declared_s) throw BudgetExceeded(t.name + ": sample budget exceeded");
      ++history.samples_drawn;
      continue;
    }
    const auto& cell = std::get<QueryCell>(action);
    if (history.answers.size() >= t.declared_q) throw BudgetExceeded(t.name + ": query budget exceeded");
    if (cell.sample >= history.samples_drawn) throw InvalidArgument(t.name + ": query to an undrawn sample");
    if (cell.index >= history.dimension) throw InvalidArgument(t.name + ": query index out of range");
    const auto prior = std::find_if(history.answers.begin(), history.answers.end(),
                                    [&](const AnsweredQuery& a) { return a.cell == cell; });
    if (prior != history.answers.end()) {
      // A repeated cell has a forced answer, so the tree does not branch.
      history.answers.push_back(AnsweredQuery{cell, prior->bit});
      continue;
    }
    cells.insert(cell);
    TesterHistory zero = history;
    zero.answers.push_back(AnsweredQuery{cell, false});
    explore(t, coins, std::move(zero), cells);
    history.answers.push_back(AnsweredQuery{cell, true});
  }
}

// r_1..r_q from a partial Fisher-Yates shuffle of [n] driven by q coins.
std::vector<std::size_t> substitution_indices(CoinSpan coins, std::size_t n, std::size_t q) {
  std::unordered_map<std::size_t, std::size_t> swapped;
  auto at = [&](std::size_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<std::size_t> r(q);
  for (std::size_t i = 0; i < q; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(coins[i] % (n - i));
    const std::size_t vi = at(i);
    r[i] = at(j);
    swapped[j] = vi;
    swapped[i] = r[i];
  }
  return r;
}

}  // namespace

std::vector<std::uint64_t> draw_coins(const TesterProgram& t, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  std::vector<std::uint64_t> coins(t.coin_count);
  for (auto& c : coins) c = rng.next();
  return coins;
}

TesterRun run_tester_with_coins(const TesterProgram& t, HugeObjectOracle& oracle, CoinSpan coins) {
  const OracleCounters before = oracle.counters();
  std::vector<SampleId> ids;
  TesterRun run = drive(
      t, coins, oracle.dimension(), [&] { ids.push_back(oracle.draw_sample()); },
      [&](const QueryCell& c) { return oracle.query_bit(ids[c.sample], c.index); });
  run.counters.samples_taken = oracle.counters().samples_taken - before.samples_taken;
  run.counters.queries_made = oracle.counters().queries_made - before.queries_made;
  return run;
}

TesterRun run_tester(const TesterProgram& t, HugeObjectOracle& oracle, std::uint64_t seed) {
  const auto coins = draw_coins(t, seed);
  return run_tester_with_coins(t, oracle, coins);
}

TesterRun simulate_tester(const TesterProgram& t, CoinSpan coins, std::size_t dimension, const AnswerFunction& answer) {
  TesterRun run = drive(t, coins, dimension, [] {}, answer);
  run.counters.samples_taken = run.history.samples_drawn;
  run.counters.queries_made = run.history.answers.size();
  return run;
}

std::vector<QueryCell> exponential_plan(const TesterProgram& t, CoinSpan coins, std::size_t dimension) {
  if (coins.size() < t.coin_count) throw InvalidArgument("coin stream shorter than the tester's coin count");
  std::set<QueryCell> cells;
  TesterHistory root;
  root.dimension = dimension;
  explore(t, coins, std::move(root), cells);
  return {cells.begin(), cells.end()};
}

TesterProgram exponential_sim(const TesterProgram& t) {
  if (t.declared_q > 16) throw InvalidArgument("exponential_sim requires declared_q <= 16");
  struct PlanCache {
    std::mutex mutex;
    std::vector<std::uint64_t> coins;
    std::size_t dimension = 0;
    std::shared_ptr<const std::vector<QueryCell>> plan;
  };
  auto cache = std::make_shared<PlanCache>();
  TesterProgram sim;
  sim.name = t.name + "/exp";
  sim.declared_s = t.declared_s;
  sim.declared_q = (std::size_t{1} << t.declared_q) - 1;
  sim.coin_count = t.coin_count;
  sim.step = [t, cache, cap = sim.declared_q](CoinSpan coins, const TesterHistory& h) -> TesterAction {
    std::shared_ptr<const std::vector<QueryCell>> plan;
    {
      std::lock_guard lock(cache->mutex);
      const bool hit = cache->plan && cache->dimension == h.dimension &&
                       std::equal(coins.begin(), coins.end(), cache->coins.begin(), cache->coins.end());
      if (!hit) {
        cache->plan = std::make_shared<const std::vector<QueryCell>>(exponential_plan(t, coins, h.dimension));
        cache->coins.assign(coins.begin(), coins.end());
        cache->dimension = h.dimension;
      }
      plan = cache->plan;
    }
    if (plan->size() > cap) throw std::logic_error("decision tree holds more than 2^q - 1 cells");
    if (h.samples_drawn < t.declared_s) return DrawSample{};
    if (h.answers.size() < plan->size()) return (*plan)[h.answers.size()];
    std::map<QueryCell, bool> recorded;
    for (const auto& a : h.answers) recorded.emplace(a.cell, a.bit);
    const auto run = simulate_tester(t, coins, h.dimension, [&](const QueryCell& c) {
      const auto it = recorded.find(c);
      if (it == recorded.end()) throw std::logic_error("replay left the enumerated decision tree");
      return it->second;
    });
    return Decide{run.verdict};
  };
  return sim;
}

TesterProgram quadratic_sim(const TesterProgram& t) {
  TesterProgram sim;
  sim.name = t.name + "/quad";
  sim.declared_s = t.declared_s;
  sim.declared_q = t.declared_s * t.declared_q;
  sim.coin_count = t.coin_count + t.declared_q;
  sim.step = [t](CoinSpan coins, const TesterHistory& h) -> TesterAction {
    const std::size_t s = t.declared_s;
    const std::size_t q = t.declared_q;
    if (q > h.dimension) throw InvalidArgument("quadratic_sim needs q <= n distinct indices");
    const auto r = substitution_indices(coins.subspan(t.coin_count, q), h.dimension, q);
    if (h.samples_drawn < s) return DrawSample{};
    // Round-major: round i reads r_i from every sample.
    if (h.answers.size() < s * q) {
      const std::size_t a = h.answers.size();
      return QueryCell{a % s, r[a / s]};
    }
    std::map<std::size_t, std::size_t> round_of;  // original index -> substitution slot
    const auto run = simulate_tester(t, coins.first(t.coin_count), h.dimension, [&](const QueryCell& c) {
      auto it = round_of.find(c.index);
      if (it == round_of.end()) {
        if (round_of.size() >= q) throw std::logic_error("tester used more than q distinct indices");
        it = round_of.emplace(c.index, round_of.size()).first;
      }
      return h.answers[it->second * s + c.sample].bit;
    });
    return Decide{run.verdict};
  };
  return sim;
}

bool verify_nonadaptive(const TesterProgram& t, const NonAdaptiveCheck& check) {
  const std::vector<AnswerFunction> answers = {
      [](const QueryCell&) { return false; },
      [](const QueryCell&) { return true; },
      [](const QueryCell& c) { return (mix64(c.sample * 0x9e3779b97f4a7c15ULL ^ c.index) & 1u) != 0; },
      [](const QueryCell& c) { return (mix64(c.sample * 0x9e3779b97f4a7c15ULL ^ c.index) & 1u) == 0; },
  };
  for (std::size_t stream = 0; stream < check.coin_streams; ++stream) {
    const auto coins = draw_coins(t, derive_seed(check.seed, stream));
    std::optional<std::vector<QueryCell>> reference;
    for (const auto& answer : answers) {
      const auto run = simulate_tester(t, coins, check.dimension, answer);
      std::vector<QueryCell> cells;
      cells.reserve(run.history.answers.size());
      for (const auto& a : run.history.answers) cells.push_back(a.cell);
      std::sort(cells.begin(), cells.end());
      if (!reference) reference = std::move(cells);
      else if (*reference != cells) return false;
    }
  }
  return true;
}

}  // namespace hugetest
