#include <deque>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "hugetest/error.hpp"
#include "hugetest/version.hpp"

namespace {

using hugetest::tools::Json;

enum class Kind { Real, Size, Text, Flag, List, Object };

// Binds CLI11 options to config keys; only options given on the command line
// are copied into the params object.
class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {}

  Binder& real(const std::string& flag, const std::string& key, const std::string& help) {
    return add(app_->add_option(flag, slot().text, help), key, Kind::Real);
  }
  Binder& size(const std::string& flag, const std::string& key, const std::string& help) {
    return add(app_->add_option(flag, slot().text, help), key, Kind::Size);
  }
  Binder& text(const std::string& flag, const std::string& key, const std::string& help) {
    return add(app_->add_option(flag, slot().text, help), key, Kind::Text);
  }
  Binder& flag(const std::string& flag, const std::string& key, const std::string& help) {
    return add(app_->add_flag(flag, slot().flag, help), key, Kind::Flag);
  }
  Binder& list(const std::string& flag, const std::string& key, const std::string& help) {
    return add(app_->add_option(flag, slot().list, help), key, Kind::List);
  }
  Binder& object(const std::string& flag, const std::string& key, const std::string& help) {
    return add(app_->add_option(flag, slot().text, help), key, Kind::Object);
  }

  void collect(Json& params) const {
    for (const auto& b : bindings_) {
      if (b.option->count() == 0) continue;
      const Slot& s = *b.slot;
      switch (b.kind) {
        case Kind::Real: params[b.key] = parse_number(b.key, s.text, false); break;
        case Kind::Size: params[b.key] = parse_number(b.key, s.text, true); break;
        case Kind::Text: params[b.key] = s.text; break;
        case Kind::Flag: params[b.key] = s.flag; break;
        case Kind::List: params[b.key] = s.list; break;
        case Kind::Object:
          try {
            params[b.key] = Json::parse(s.text);
          } catch (const Json::parse_error&) {
            throw hugetest::tools::ValidationError(b.key, "is not valid JSON");
          }
          break;
      }
    }
  }

 private:
  struct Slot {
    std::string text;
    bool flag = false;
    std::vector<std::string> list;
  };
  struct Binding {
    CLI::Option* option;
    std::string key;
    Kind kind;
    const Slot* slot;
  };

  Slot& slot() { return slots_.emplace_back(); }

  Binder& add(CLI::Option* option, const std::string& key, Kind kind) {
    bindings_.push_back(Binding{option, key, kind, &slots_.back()});
    return *this;
  }

  static Json parse_number(const std::string& key, const std::string& text, bool integral) {
    try {
      Json v = Json::parse(text);
      if (v.is_number() && (!integral || v.is_number_unsigned())) return v;
    } catch (const Json::parse_error&) {
    }
    throw hugetest::tools::ValidationError(key, integral ? "expected a non-negative integer" : "expected a number");
  }

  CLI::App* app_;
  std::deque<Slot> slots_;
  std::vector<Binding> bindings_;
};

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<Binder> binder;
};

void add_trials(Binder& b) {
  b.size("--seed", "seed", "Master seed; trial t uses a seed derived from (seed, t)")
      .size("--trials", "trials", "Number of trials")
      .size("--threads", "threads", "Worker threads for independent trials");
}

void add_sizing(Binder& b) {
  b.real("--c-t1", "c_t1", "Multiplier for the first sample size")
      .real("--c-t2", "c_t2", "Multiplier for the second sample size")
      .real("--c-r", "c_r", "Multiplier for the query set size")
      .size("--t1", "t1", "Override the first sample size")
      .size("--t2", "t2", "Override the second sample size")
      .size("--r-size", "r_size", "Override the query set size");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample-and-query simulator for distributions over long bit vectors"};
  app.set_version_flag("--version", hugetest::kVersion);
  app.require_subcommand(1);

  std::string out_path;
  std::string csv_path;
  std::string config_path;
  bool strict = false;
  bool timing = false;

  std::vector<Command> commands;
  auto make = [&](const std::string& name, const std::string& help) -> Binder& {
    Command c;
    c.app = app.add_subcommand(name, help);
    c.binder = std::make_unique<Binder>(c.app);
    if (name == "gen-instance") {
      c.app->add_option("--record", out_path, "Write the JSON record here instead of stdout");
    } else {
      c.app->add_option("--out", out_path, "Write the JSON record here instead of stdout");
    }
    c.app->add_option("--csv", csv_path, "Also write per-trial rows as CSV");
    c.app->add_option("--config", config_path, "JSON params, or a previous record whose config is replayed");
    c.app->add_flag("--strict", strict, "Exit with status 3 when a trial rejects or fails");
    c.app->add_flag("--timing", timing, "Include wall-clock time in the record");
    commands.push_back(std::move(c));
    return *commands.back().binder;
  };

  make("emd", "Exact earth mover distance between two distribution files")
      .text("--a", "a", "First distribution file")
      .text("--b", "b", "Second distribution file")
      .text("--permuted", "permuted", "none, exact or heuristic minimisation over index permutations");

  {
    Binder& b = make("learn", "Test-and-learn a clusterable distribution")
                    .text("--dist", "dist", "Distribution file")
                    .real("--zeta", "zeta", "Leftover mass bound")
                    .real("--delta", "delta", "Cluster diameter")
                    .size("--r", "r", "Number of clusters")
                    .real("--sizing-zeta", "sizing_zeta", "Zeta used only for sample sizes")
                    .flag("--enforce-n-assumption", "enforce_n_assumption", "Reject configs violating the n bound")
                    .real("--success-emd", "success_emd", "EMD threshold counted as a successful trial");
    add_sizing(b);
    add_trials(b);
  }
  {
    Binder& b = make("test-vc", "Test closeness to a candidate set of bounded VC dimension")
                    .text("--dist", "dist", "Distribution file")
                    .list("--candidates", "candidates", "Candidate distribution files")
                    .real("--epsilon", "epsilon", "Proximity parameter")
                    .size("--d", "d", "VC dimension bound");
    add_sizing(b);
    add_trials(b);
  }
  {
    Binder& b = make("gap-adaptive", "Run the adaptive tester on encoded support-size instances")
                    .text("--dist", "dist", "Distribution file over N-bit encodings")
                    .text("--gen", "gen", "Generate yes or no instances per trial")
                    .size("--n", "n", "Base length, a power of two")
                    .real("--epsilon", "epsilon", "Proximity parameter")
                    .real("--eta", "eta", "Support excess of no-instances")
                    .size("--z-count", "z_count", "Encodings per base element")
                    .size("--code-seed", "code_seed", "Seed for the code construction")
                    .real("--c-fp", "c_fp", "Find-permutation sample multiplier")
                    .real("--c-aa", "c_aa", "Validity sample multiplier")
                    .real("--c-ab", "c_ab", "Chunk check multiplier")
                    .real("--c-se", "c_se", "Support estimate sample multiplier")
                    .real("--c-si", "c_si", "Support estimate index multiplier");
    add_trials(b);
  }
  make("gen-instance", "Write a generated instance as a distribution file")
      .text("--family", "family", "pvc-yes, pvc-no-q, pvc-no-s, gap-yes, gap-no or pal")
      .object("--params", "params", "Family parameters as a JSON object")
      .size("--seed", "seed", "Generator seed")
      .text("--out", "out", "Distribution file to write");
  {
    Binder& b = make("simulate-transform", "Compare a builtin tester with its non-adaptive simulation")
                    .text("--tester", "tester", "support1, complement-pair or pal-lift")
                    .text("--transform", "transform", "exp or quad")
                    .text("--dist", "dist", "Distribution file (default: a seeded toy instance)")
                    .size("--dim", "dim", "Vector length of the default instance");
    add_trials(b);
  }
  make("verify-codes", "Build the gap codes and check their properties")
      .size("--l", "l", "Log2 of the base length")
      .size("--seed", "seed", "Code seed")
      .real("--target-zeta", "target_zeta", "Relative minimum distance target")
      .size("--k", "k", "Inner code length")
      .size("--m", "m", "Outer message length")
      .size("--fe-pairs", "fe_pairs", "Random round-trip checks")
      .size("--brute-max-k", "brute_max_k", "Largest k for brute-force dual checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& c : commands) {
      if (!c.app->parsed()) continue;
      hugetest::tools::ExperimentConfig config;
      config.command = c.app->get_name();
      config.timing = timing;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw hugetest::tools::ValidationError("config", "cannot open " + config_path);
        Json loaded;
        try {
          loaded = Json::parse(in);
        } catch (const Json::parse_error&) {
          throw hugetest::tools::ValidationError("config", "is not valid JSON");
        }
        if (loaded.contains("config") && loaded.contains("command")) loaded = loaded["config"];
        config.params = std::move(loaded);
      }
      c.binder->collect(config.params);
      const Json record = hugetest::tools::run_experiment(config);
      const std::string text = record.dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw hugetest::tools::ValidationError("out", "cannot write " + out_path);
        out << text;
      }
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw hugetest::tools::ValidationError("csv", "cannot write " + csv_path);
        hugetest::tools::write_csv(record, csv);
      }
      if (strict && record["strict_failure"].get<bool>()) return 3;
    }
  } catch (const hugetest::tools::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const hugetest::InvalidArgument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const hugetest::FormatError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
