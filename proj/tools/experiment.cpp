#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "hugetest/builtin_testers.hpp"
#include "hugetest/cluster.hpp"
#include "hugetest/codes.hpp"
#include "hugetest/distribution_io.hpp"
#include "hugetest/error.hpp"
#include "hugetest/gap.hpp"
#include "hugetest/instances.hpp"
#include "hugetest/metrics.hpp"
#include "hugetest/oracle.hpp"
#include "hugetest/palindrome.hpp"
#include "hugetest/rng.hpp"
#include "hugetest/transforms.hpp"
#include "hugetest/version.hpp"

namespace hugetest::tools {

namespace {

// Typed reader over the raw flags. Every value read, defaults included, is
// copied into `resolved`; absent optionals are left out.
class Params {
 public:
  explicit Params(const Json& in) : in_(in) {
    if (!in_.is_object()) throw ValidationError("config", "must be a JSON object");
  }

  Json resolved = Json::object();

  double real(const std::string& key, double def) {
    const double v = opt_real(key).value_or(def);
    resolved[key] = v;
    return v;
  }

  std::optional<double> opt_real(const std::string& key) {
    const Json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ValidationError(key, "expected a number");
    const double out = v->get<double>();
    if (!std::isfinite(out)) throw ValidationError(key, "must be finite");
    resolved[key] = out;
    return out;
  }

  std::size_t size(const std::string& key, std::size_t def) {
    const std::size_t v = opt_size(key).value_or(def);
    resolved[key] = v;
    return v;
  }

  std::optional<std::size_t> opt_size(const std::string& key) {
    const Json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
      throw ValidationError(key, "expected a non-negative integer");
    }
    const auto out = v->get<std::size_t>();
    resolved[key] = out;
    return out;
  }

  std::uint64_t u64(const std::string& key, std::uint64_t def) { return size(key, def); }

  bool flag(const std::string& key, bool def) {
    const Json* v = find(key);
    bool out = def;
    if (v) {
      if (!v->is_boolean()) throw ValidationError(key, "expected true or false");
      out = v->get<bool>();
    }
    resolved[key] = out;
    return out;
  }

  std::string str(const std::string& key, const std::string& def) {
    const std::string v = opt_str(key).value_or(def);
    resolved[key] = v;
    return v;
  }

  std::optional<std::string> opt_str(const std::string& key) {
    const Json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ValidationError(key, "expected a string");
    resolved[key] = *v;
    return v->get<std::string>();
  }

  std::string required_str(const std::string& key) {
    auto v = opt_str(key);
    if (!v || v->empty()) throw ValidationError(key, "is required");
    return *v;
  }

  std::vector<std::string> str_list(const std::string& key) {
    const Json* v = find(key);
    std::vector<std::string> out;
    if (!v) return out;
    if (!v->is_array()) throw ValidationError(key, "expected a list of strings");
    for (const auto& e : *v) {
      if (!e.is_string()) throw ValidationError(key, "expected a list of strings");
      out.push_back(e.get<std::string>());
    }
    resolved[key] = *v;
    return out;
  }

  Json object(const std::string& key) {
    const Json* v = find(key);
    if (!v) {
      resolved[key] = Json::object();
      return Json::object();
    }
    if (!v->is_object()) throw ValidationError(key, "expected a JSON object");
    resolved[key] = *v;
    return *v;
  }

  // Rejects flags no reader asked for.
  void finish() const {
    for (const auto& [key, value] : in_.items()) {
      if (!value.is_null() && !used_.count(key)) throw ValidationError(key, "unknown field");
    }
  }

 private:
  const Json* find(const std::string& key) {
    used_.insert(key);
    auto it = in_.find(key);
    if (it == in_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  const Json& in_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ValidationError(field, message);
}

void require_open_unit(double v, const std::string& field) {
  require(v > 0.0 && v < 1.0, field, "must lie in (0, 1)");
}

ExplicitDistribution load_distribution(const std::string& path, const std::string& field) {
  auto check = validate_distribution_file(path);
  if (!check.distribution) throw ValidationError(field, check.error);
  return std::move(*check.distribution);
}

struct TrialSettings {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t threads = 1;
};

TrialSettings read_trials(Params& p, std::size_t default_trials) {
  TrialSettings s;
  s.seed = p.u64("seed", 1);
  s.trials = p.size("trials", default_trials);
  s.threads = p.size("threads", 1);
  require(s.threads >= 1, "threads", "must be at least 1");
  return s;
}

// Trial t runs with derive_seed(master, t). Records are stored by trial
// index, so the output does not depend on the thread count.
std::vector<Json> run_trials(const TrialSettings& s, const std::function<Json(std::size_t, std::uint64_t)>& fn) {
  std::vector<Json> out(s.trials);
  const std::size_t workers = std::min(s.threads, std::max<std::size_t>(s.trials, 1));
  if (workers <= 1) {
    for (std::size_t t = 0; t < s.trials; ++t) out[t] = fn(t, derive_seed(s.seed, t));
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < s.trials; t = next++) {
        try {
          out[t] = fn(t, derive_seed(s.seed, t));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

Json support_json(const ExplicitDistribution& d) {
  Json out = Json::array();
  for (const auto& a : d.atoms()) out.push_back(Json{{"point", a.point.to_string()}, {"mass", a.mass}});
  return out;
}

double rate(const std::vector<Json>& trials, const char* key) {
  if (trials.empty()) return 0.0;
  const auto hits = std::count_if(trials.begin(), trials.end(), [&](const Json& t) { return t.at(key).get<bool>(); });
  return static_cast<double>(hits) / static_cast<double>(trials.size());
}

bool any_reject(const std::vector<Json>& trials, const char* key) {
  return std::any_of(trials.begin(), trials.end(), [&](const Json& t) {
    const auto v = t.at(key).get<std::string>();
    return v == "reject" || v == "fail";
  });
}

struct Outcome {
  std::vector<Json> trials;
  Json summary = Json::object();
  Json extra = Json::object();
  bool strict_failure = false;
};

LearnSizing read_sizing(Params& p) {
  LearnSizing s;
  s.c_t1 = p.real("c_t1", s.c_t1);
  s.c_t2 = p.real("c_t2", s.c_t2);
  s.c_r = p.real("c_r", s.c_r);
  require(s.c_t1 > 0 && s.c_t2 > 0 && s.c_r > 0, "c_t1", "size multipliers must be positive");
  s.t1 = p.opt_size("t1");
  s.t2 = p.opt_size("t2");
  s.r_size = p.opt_size("r_size");
  return s;
}

Outcome cmd_emd(Params& p) {
  const auto a = load_distribution(p.required_str("a"), "a");
  const auto b = load_distribution(p.required_str("b"), "b");
  const std::string mode = p.str("permuted", "none");
  require(mode == "none" || mode == "exact" || mode == "heuristic", "permuted", "must be none, exact or heuristic");
  p.finish();
  require(a.dimension() == b.dimension(), "b", "dimension differs from a");
  Outcome out;
  Json trial;
  if (mode == "none") {
    const auto r = emd_exact(a, b);
    trial["value"] = r.value;
    Json flow = Json::array();
    for (const auto& f : r.flow.pairs) flow.push_back(Json{{"source", f.source}, {"target", f.target}, {"mass", f.mass}});
    out.extra["flow"] = std::move(flow);
  } else {
    if (mode == "exact") {
      require(a.dimension() <= kExactPermutationMaxDimension, "permuted", "exact search needs dimension <= 8");
    }
    const auto r = emd_up_to_index_permutation_detail(
        a, b, mode == "exact" ? PermutationSearch::Exact : PermutationSearch::Heuristic);
    trial["value"] = r.value;
    out.extra["sigma"] = r.sigma.mapping();
  }
  out.summary["value"] = trial["value"];
  out.trials.push_back(std::move(trial));
  return out;
}

Outcome cmd_learn(Params& p) {
  const auto dist = load_distribution(p.required_str("dist"), "dist");
  ClusterLearnParams lp;
  lp.zeta = p.real("zeta", 0.01);
  lp.delta = p.real("delta", 0.01);
  lp.r = p.size("r", 1);
  lp.sizing = read_sizing(p);
  lp.sizing_zeta = p.opt_real("sizing_zeta");
  lp.enforce_n_assumption = p.flag("enforce_n_assumption", false);
  const double success_emd = p.real("success_emd", 0.1);
  const auto settings = read_trials(p, 1);
  p.finish();
  try {
    lp.validate();
  } catch (const InvalidArgument& e) {
    throw ValidationError("zeta/delta/r", e.what());
  }
  if (lp.enforce_n_assumption && lp.r_size(dist.dimension()) == 0) {
    throw ValidationError("enforce_n_assumption", "no valid query set size");
  }
  Outcome out;
  out.trials = run_trials(settings, [&](std::size_t t, std::uint64_t s) {
    HugeObjectOracle oracle(dist, derive_seed(s, 1));
    const auto r = test_and_learn(oracle, lp, derive_seed(s, 2));
    Json j;
    j["trial"] = t;
    j["seed"] = s;
    j["tag"] = r.tag == LearnTag::Learned ? "learned" : "fail";
    j["unassigned_fraction"] = r.unassigned_fraction;
    j["t1"] = r.t1;
    j["t2"] = r.t2;
    j["r_size"] = r.r_size;
    j["samples"] = r.counters.samples_taken;
    j["queries"] = r.counters.queries_made;
    j["n_assumption_met"] = r.n_assumption_met;
    j["weights"] = r.weights;
    bool success = false;
    if (r.distribution) {
      const double d = emd_up_to_index_permutation(dist, *r.distribution, PermutationSearch::Heuristic);
      j["emd_to_input"] = d;
      success = d <= success_emd;
      j["support"] = support_json(*r.distribution);
    }
    j["success"] = success;
    return j;
  });
  out.summary["success_rate"] = rate(out.trials, "success");
  out.summary["epsilon_out"] = lp.epsilon_out();
  out.strict_failure = any_reject(out.trials, "tag");
  return out;
}

Outcome cmd_test_vc(Params& p) {
  const auto dist = load_distribution(p.required_str("dist"), "dist");
  const auto paths = p.str_list("candidates");
  require(!paths.empty(), "candidates", "at least one candidate distribution is required");
  std::vector<ExplicitDistribution> candidates;
  for (const auto& path : paths) {
    candidates.push_back(load_distribution(path, "candidates"));
    require(candidates.back().dimension() == dist.dimension(), "candidates", "dimension differs from dist");
  }
  const double epsilon = p.real("epsilon", 0.5);
  const std::size_t d = p.size("d", 1);
  const LearnSizing sizing = read_sizing(p);
  const auto settings = read_trials(p, 1);
  p.finish();
  require_open_unit(epsilon, "epsilon");
  Outcome out;
  out.trials = run_trials(settings, [&](std::size_t t, std::uint64_t s) {
    HugeObjectOracle oracle(dist, derive_seed(s, 1));
    const auto r = test_vc_property(oracle, candidates, epsilon, d, derive_seed(s, 2), sizing);
    Json j;
    j["trial"] = t;
    j["seed"] = s;
    j["verdict"] = std::string(to_string(r.verdict));
    j["learn_tag"] = r.learn.tag == LearnTag::Learned ? "learned" : "fail";
    j["best_distance"] = r.best_distance ? Json(*r.best_distance) : Json(nullptr);
    j["samples"] = r.learn.counters.samples_taken;
    j["queries"] = r.learn.counters.queries_made;
    j["accepted"] = r.verdict == Verdict::Accept;
    return j;
  });
  out.summary["accept_rate"] = rate(out.trials, "accepted");
  out.strict_failure = any_reject(out.trials, "verdict");
  return out;
}

unsigned log2_of_power(std::size_t n, const std::string& field) {
  require(n >= 4 && std::has_single_bit(n), field, "must be a power of two, at least 4");
  const auto l = static_cast<unsigned>(std::countr_zero(n));
  require(l <= 12, field, "must be at most 4096");
  return l;
}

Json recovery_json(const PermutationRecovery& r) {
  return Json{{"ok", r.ok()},
              {"failed_step", r.failed_step},
              {"failure", r.failure},
              {"sample_count", r.sample_count},
              {"outside_fraction", r.outside_fraction}};
}

Outcome cmd_gap_adaptive(Params& p) {
  const auto dist_path = p.opt_str("dist");
  const auto gen = p.opt_str("gen");
  require(dist_path.has_value() != gen.has_value(), "dist/gen", "give exactly one of dist or gen");
  require(!gen || *gen == "yes" || *gen == "no", "gen", "must be yes or no");
  const std::size_t n = p.size("n", 128);
  const unsigned l = log2_of_power(n, "n");
  const double epsilon = p.real("epsilon", 0.25);
  const double eta = p.real("eta", 1.0 / 9.0);
  const std::size_t z_count = p.size("z_count", 4);
  AdaptiveParams ap;
  ap.find.c_fp = p.real("c_fp", ap.find.c_fp);
  ap.c_aa = p.real("c_aa", ap.c_aa);
  ap.c_ab = p.real("c_ab", ap.c_ab);
  ap.supp.c_se = p.real("c_se", ap.supp.c_se);
  ap.supp.c_si = p.real("c_si", ap.supp.c_si);
  const auto settings = read_trials(p, 1);
  const std::uint64_t code_seed = p.u64("code_seed", settings.seed);
  p.finish();
  require_open_unit(epsilon, "epsilon");
  require(eta > 0.0 && eta < 0.125, "eta", "must lie in (0, 1/8)");
  require(z_count >= 1, "z_count", "must be positive");

  const GapCodes codes = make_gap_codes(l, code_seed);
  std::optional<ExplicitDistribution> fixed;
  if (dist_path) {
    fixed = load_distribution(*dist_path, "dist");
    require(fixed->dimension() == codes.geo.N, "dist", "dimension must equal N = " + std::to_string(codes.geo.N));
  }
  Outcome out;
  out.extra["codes"] = Json::parse(code_descriptor_json(codes));
  out.trials = run_trials(settings, [&](std::size_t t, std::uint64_t s) {
    std::optional<GapInstance> instance;
    if (!fixed) {
      const SuppHardParams hp{n, eta, *gen == "yes" ? InstanceMode::Yes : InstanceMode::No};
      const auto base = gen_supp_hard(hp, derive_seed(s, 0));
      instance = gen_gap_distribution(codes, base, derive_seed(s, 1), GapInstanceOptions{z_count});
    }
    HugeObjectOracle oracle(fixed ? *fixed : instance->distribution, derive_seed(s, 2));
    const auto r = alg_adaptive(oracle, codes, epsilon, derive_seed(s, 3), ap);
    Json j;
    j["trial"] = t;
    j["seed"] = s;
    j["verdict"] = std::string(to_string(r.verdict));
    j["reject_stage"] = std::string(to_string(r.reject_stage));
    j["accepted"] = r.verdict == Verdict::Accept;
    if (instance) j["pi_recovered"] = r.recovery.pi.has_value() && *r.recovery.pi == instance->pi;
    j["find_permutation"] = recovery_json(r.recovery);
    j["validity_samples"] = r.validity_samples;
    j["y_count"] = r.y_count;
    j["y_prime_count"] = r.y_prime_count;
    if (r.supp) {
      j["supp_est"] = Json{{"verdict", std::string(to_string(r.supp->verdict))},
                           {"invalid_seen", r.supp->invalid_seen},
                           {"vectors_read", r.supp->vectors_read},
                           {"index_set_size", r.supp->index_set_size},
                           {"distinct", r.supp->distinct}};
    }
    j["samples"] = r.counters.samples_taken;
    j["queries"] = r.counters.queries_made;
    j["query_ratio"] = r.query_ratio;
    return j;
  });
  out.summary["accept_rate"] = rate(out.trials, "accepted");
  out.strict_failure = any_reject(out.trials, "verdict");
  return out;
}

template <typename T>
T instance_field(const Json& obj, const char* key, T def) {
  auto it = obj.find(key);
  if (it == obj.end()) return def;
  try {
    return it->get<T>();
  } catch (const std::exception&) {
    throw ValidationError(std::string("params.") + key, "has the wrong type");
  }
}

Outcome cmd_gen_instance(Params& p) {
  const std::string family = p.required_str("family");
  const Json ip = p.object("params");
  const std::uint64_t seed = p.u64("seed", 1);
  const std::string path = p.required_str("out");
  p.finish();
  Outcome out;
  Json info;
  std::optional<ExplicitDistribution> dist;
  if (family.rfind("pvc-", 0) == 0) {
    PvcParams pp;
    pp.k_rows = instance_field<std::size_t>(ip, "k_rows", 8);
    pp.ell = instance_field<std::size_t>(ip, "ell", 8);
    pp.ell_prime = instance_field<std::size_t>(ip, "ell_prime", 2);
    pp.k_prime = instance_field<std::size_t>(ip, "k_prime", 2);
    pp.n = instance_field<std::size_t>(ip, "n", 64);
    pp.seed = seed;
    try {
      pp.validate();
    } catch (const InvalidArgument& e) {
      throw ValidationError("params", e.what());
    }
    std::optional<PvcInstance> inst;
    if (family == "pvc-yes") inst = gen_pvc_yes(pp);
    else if (family == "pvc-no-q") inst = gen_pvc_no_query(pp);
    else if (family == "pvc-no-s") inst = gen_pvc_no_sample(pp);
    else throw ValidationError("family", "unknown family " + family);
    info["min_column_distance_base"] = min_column_distance(gen_pvc_matrix(pp));
    if (family == "pvc-no-q" && pp.k_rows <= kExactPermutationMaxDimension) {
      info["farness_to_yes"] = pvc_exact_farness(gen_pvc_yes(pp).matrix, inst->matrix);
    }
    dist = std::move(inst->distribution);
  } else if (family == "gap-yes" || family == "gap-no") {
    const auto n = instance_field<std::size_t>(ip, "n", 16);
    const unsigned l = log2_of_power(n, "params.n");
    const auto eta = instance_field<double>(ip, "eta", 1.0 / 9.0);
    require(eta > 0.0 && eta < 0.125, "params.eta", "must lie in (0, 1/8)");
    const auto z_count = instance_field<std::size_t>(ip, "z_count", 4);
    require(z_count >= 1, "params.z_count", "must be positive");
    const auto code_seed = instance_field<std::uint64_t>(ip, "code_seed", seed);
    const GapCodes codes = make_gap_codes(l, code_seed);
    const SuppHardParams hp{n, eta, family == "gap-yes" ? InstanceMode::Yes : InstanceMode::No};
    const auto base = gen_supp_hard(hp, derive_seed(seed, 0));
    auto inst = gen_gap_distribution(codes, base, derive_seed(seed, 1), GapInstanceOptions{z_count});
    info["base_support"] = std::count_if(base.begin(), base.end(), [](double w) { return w > 0.0; });
    info["codes"] = Json::parse(code_descriptor_json(codes));
    dist = std::move(inst.distribution);
  } else if (family == "pal") {
    const auto letters = instance_field<std::size_t>(ip, "n", 8);
    require(letters >= 1, "params.n", "must be positive");
    const auto x_len = instance_field<std::size_t>(ip, "x_len", letters / 2);
    require(x_len <= letters, "params.x_len", "must be at most n");
    const bool random = instance_field<bool>(ip, "random", false);
    Rng rng(seed);
    std::vector<Letter> s;
    if (random) {
      s.resize(letters);
      for (auto& c : s) c = static_cast<Letter>(rng.below(4));
    } else {
      s = make_pal_string(letters, x_len, rng);
    }
    info["in_property"] = is_pal_string(s);
    dist = ExplicitDistribution::point_mass(encode_letters(s));
  } else {
    throw ValidationError("family", "must be pvc-yes, pvc-no-q, pvc-no-s, gap-yes, gap-no or pal");
  }
  write_distribution_file(path, *dist);
  info["dimension"] = dist->dimension();
  info["support_size"] = dist->support_size();
  out.extra["instance"] = std::move(info);
  return out;
}

ExplicitDistribution default_transform_instance(const std::string& tester, std::size_t dim, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xd157));
  if (tester == "pal-lift") return ExplicitDistribution::point_mass(encode_letters(make_pal_string(2, 1, rng)));
  BitVector v(dim), w(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v.set(i, rng.coin());
    w.set(i, rng.coin());
  }
  BitVector vc = v;
  for (std::size_t i = 0; i < dim; ++i) vc.flip(i);
  const std::vector<BitVector> pts = {v, vc, w};
  return ExplicitDistribution::uniform(pts);
}

Outcome cmd_simulate_transform(Params& p) {
  const std::string name = p.required_str("tester");
  const std::string transform = p.str("transform", "exp");
  require(transform == "exp" || transform == "quad", "transform", "must be exp or quad");
  const auto dist_path = p.opt_str("dist");
  const std::size_t dim_default = name == "pal-lift" ? 4 : 16;
  const std::size_t dim = p.size("dim", dim_default);
  const auto settings = read_trials(p, 100);
  p.finish();
  TesterProgram t;
  try {
    t = builtin_tester(name);
  } catch (const InvalidArgument& e) {
    throw ValidationError("tester", e.what());
  }
  require(dim >= 1, "dim", "must be positive");
  if (name == "pal-lift") require(dim == 4, "dim", "pal-lift reads 4-bit strings");
  const ExplicitDistribution dist =
      dist_path ? load_distribution(*dist_path, "dist") : default_transform_instance(name, dim, settings.seed);
  require(dist.dimension() == dim, "dist", "dimension must equal dim");
  if (transform == "quad") require(t.declared_q <= dim, "dim", "quadratic simulation needs q <= n");
  const TesterProgram sim = transform == "exp" ? exponential_sim(t) : quadratic_sim(t);

  Outcome out;
  out.trials = run_trials(settings, [&](std::size_t trial, std::uint64_t s) {
    Json j;
    j["trial"] = trial;
    j["seed"] = s;
    if (transform == "exp") {
      // Same coins and the same sample sequence: the verdicts must coincide.
      const auto coins = draw_coins(t, s);
      HugeObjectOracle oa(dist, derive_seed(s, 1));
      HugeObjectOracle ob(dist, derive_seed(s, 1));
      const auto a = run_tester_with_coins(t, oa, coins);
      const auto b = run_tester_with_coins(sim, ob, coins);
      j["verdict_original"] = std::string(to_string(a.verdict));
      j["verdict_simulated"] = std::string(to_string(b.verdict));
      j["agree"] = a.verdict == b.verdict;
      j["queries_original"] = a.counters.queries_made;
      j["queries_simulated"] = b.counters.queries_made;
    } else {
      // The original sees D under a fresh random index permutation.
      Rng rng(derive_seed(s, 2));
      const auto sigma = Permutation::random(dim, rng);
      HugeObjectOracle oa(permute_distribution(dist, sigma), derive_seed(s, 1));
      HugeObjectOracle ob(dist, derive_seed(s, 3));
      const auto a = run_tester(t, oa, s);
      const auto b = run_tester(sim, ob, s);
      j["verdict_original"] = std::string(to_string(a.verdict));
      j["verdict_simulated"] = std::string(to_string(b.verdict));
      j["queries_original"] = a.counters.queries_made;
      j["queries_simulated"] = b.counters.queries_made;
    }
    j["accepted_original"] = j["verdict_original"] == "accept";
    j["accepted_simulated"] = j["verdict_simulated"] == "accept";
    return j;
  });
  std::size_t max_queries = 0;
  for (const auto& j : out.trials) max_queries = std::max(max_queries, j["queries_simulated"].get<std::size_t>());
  out.summary["declared_s"] = t.declared_s;
  out.summary["declared_q"] = t.declared_q;
  out.summary["query_bound"] = sim.declared_q;
  out.summary["max_queries_simulated"] = max_queries;
  out.summary["accept_rate_original"] = rate(out.trials, "accepted_original");
  out.summary["accept_rate_simulated"] = rate(out.trials, "accepted_simulated");
  if (transform == "exp") out.summary["agreement_rate"] = rate(out.trials, "agree");
  out.summary["nonadaptive"] = verify_nonadaptive(sim, NonAdaptiveCheck{dim, 8, settings.seed});
  out.strict_failure = !out.summary["nonadaptive"].get<bool>() ||
                       (transform == "exp" && out.summary["agreement_rate"].get<double>() < 1.0);
  return out;
}

// Minimum weight of a non-zero vector orthogonal to every row.
std::size_t brute_dual_distance(std::span<const std::uint64_t> rows, std::size_t k) {
  std::size_t best = k + 1;
  for (std::uint64_t y = 1; y < (std::uint64_t{1} << k); ++y) {
    const auto w = static_cast<std::size_t>(std::popcount(y));
    if (w >= best) continue;
    const bool orthogonal =
        std::all_of(rows.begin(), rows.end(), [&](std::uint64_t r) { return std::popcount(r & y) % 2 == 0; });
    if (orthogonal) best = w;
  }
  return best;
}

Outcome cmd_verify_codes(Params& p) {
  const std::size_t l = p.size("l", 2);
  const std::uint64_t seed = p.u64("seed", 1);
  GapCodeOptions options;
  options.target_zeta = p.real("target_zeta", options.target_zeta);
  options.k = p.opt_size("k");
  options.m = p.opt_size("m");
  const std::size_t fe_pairs = p.size("fe_pairs", 200);
  const std::size_t brute_max_k = p.size("brute_max_k", 24);
  p.finish();
  require(l >= 2 && l <= 12, "l", "must lie in [2, 12]");
  require(options.target_zeta > 0.0 && options.target_zeta < 1.0, "target_zeta", "must lie in (0, 1)");
  const GapCodes codes = [&] {
    try {
      return make_gap_codes(static_cast<unsigned>(l), seed, options);
    } catch (const InvalidArgument& e) {
      throw ValidationError("k/m", e.what());
    }
  }();
  const auto& geo = codes.geo;
  const auto& se = codes.se;
  Json checks;

  std::size_t brute_min = se.k + 1;
  for (std::size_t c = 1; c < se.codewords.size(); ++c) {
    brute_min = std::min<std::size_t>(brute_min, static_cast<std::size_t>(std::popcount(se.codewords[c])));
  }
  checks["se_min_distance"] = brute_min == se.min_distance;
  if (se.k <= brute_max_k) {
    const std::span<const std::uint64_t> rows(se.generator);
    checks["se_dual_distance"] = brute_dual_distance(rows.first(se.l), se.k) == se.dual_min_distance &&
                                 brute_dual_distance(rows, se.k) == se.full_dual_min_distance;
  }
  checks["se_zeta"] = static_cast<double>(se.min_distance) >= se.zeta_measured * static_cast<double>(se.k) &&
                      static_cast<double>(se.dual_min_distance) > se.zeta_measured * static_cast<double>(se.k);

  bool se_round = true;
  for (Symbol sym = 0; sym < geo.n; ++sym) {
    for (bool secret : {false, true}) {
      const auto d = se_decode_word(se, se_encode_word(se, sym, secret));
      se_round = se_round && d && d->symbol == sym && d->secret == secret;
    }
  }
  checks["se_roundtrip"] = se_round;

  Rng rng(derive_seed(seed, 0xc0de));
  bool fe_round = true;
  std::vector<Symbol> z(geo.m);
  for (std::size_t trial = 0; trial < fe_pairs; ++trial) {
    for (auto& s : z) s = static_cast<Symbol>(rng.below(geo.n));
    BitVector x(geo.n);
    for (std::size_t i = 0; i < geo.n; ++i) x.set(i, rng.coin());
    const auto y = ge_encode(geo, codes.ge, z);
    const auto back = ge_decode(geo, codes.ge, y);
    const auto enc = fe_encode(geo, se, codes.ge, z, x);
    const auto dec = fe_decode_all(geo, se, codes.ge, enc);
    fe_round = fe_round && back && *back == z && dec.valid && dec.x == x && dec.z && *dec.z == z;
  }
  checks["ge_fe_roundtrip"] = fe_round;

  bool ok = true;
  for (const auto& [key, value] : checks.items()) ok = ok && value.get<bool>();
  Outcome out;
  out.extra["codes"] = Json::parse(code_descriptor_json(codes));
  out.extra["checks"] = std::move(checks);
  out.summary["ok"] = ok;
  out.strict_failure = !ok;
  return out;
}

}  // namespace

DistributionCheck validate_distribution_file(const std::filesystem::path& path) {
  DistributionCheck out;
  try {
    out.distribution = read_distribution_file(path);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

Json run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Params params(config.params);
  Outcome outcome;
  const std::string& c = config.command;
  if (c == "emd") outcome = cmd_emd(params);
  else if (c == "learn") outcome = cmd_learn(params);
  else if (c == "test-vc") outcome = cmd_test_vc(params);
  else if (c == "gap-adaptive") outcome = cmd_gap_adaptive(params);
  else if (c == "gen-instance") outcome = cmd_gen_instance(params);
  else if (c == "simulate-transform") outcome = cmd_simulate_transform(params);
  else if (c == "verify-codes") outcome = cmd_verify_codes(params);
  else throw ValidationError("command", "unknown subcommand " + c);

  Json record;
  record["tool"] = "hugetest";
  record["version"] = kVersion;
  record["command"] = c;
  record["config"] = params.resolved;
  for (auto& [key, value] : outcome.extra.items()) record[key] = std::move(value);
  record["trials"] = Json(std::move(outcome.trials));
  record["summary"] = std::move(outcome.summary);
  record["strict_failure"] = outcome.strict_failure;
  if (config.timing) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    record["wall_clock_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  }
  return record;
}

void write_csv(const Json& record, std::ostream& out) {
  std::vector<std::string> columns;
  std::set<std::string> seen;
  const Json& trials = record.at("trials");
  for (const auto& t : trials) {
    for (const auto& [key, value] : t.items()) {
      if (value.is_primitive() && seen.insert(key).second) columns.push_back(key);
    }
  }
  auto cell = [](const Json& v) -> std::string {
    if (v.is_null()) return "";
    if (v.is_string()) {
      std::string s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return quoted + "\"";
    }
    return v.dump();
  };
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& t : trials) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "," : "");
      auto it = t.find(columns[i]);
      if (it != t.end()) out << cell(*it);
    }
    out << '\n';
  }
}

}  // namespace hugetest::tools
