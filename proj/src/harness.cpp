// =============================================================================
// Experiment harness implementation: strict JSON configuration, Monte Carlo
// drivers, planner tables, report serialization, component selftest.
// =============================================================================
#include "qfl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "qfl/enumcode.hpp"
#include "qfl/gf.hpp"
#include "qfl/hashperm.hpp"
#include "qfl/qary_math.hpp"
#include "qfl/rs.hpp"
#include "qfl/sw_codec.hpp"
#include "qfl/termination.hpp"

namespace qfl {

using nlohmann::json;

namespace {

// ------------------------------------------------------------- small helpers

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r) << "/"
     << boost::multiprecision::denominator(r);
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

QaryWord random_word(std::uint32_t q, std::size_t len, std::mt19937_64& rng) {
  QaryWord w(q, len);
  for (auto& s : w.sym) s = static_cast<Symbol>(rng() % q);
  return w;
}

const char* reason_name(TerminationReason r) {
  switch (r) {
    case TerminationReason::zyablov: return "zyablov";
    case TerminationReason::stage_cap: return "stage_cap";
    case TerminationReason::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

// --------------------------------------------------------------- JSON access

void expect_keys(const json& j, const std::string& ctx,
                 std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw std::invalid_argument("config: '" + ctx + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " +
                                  ctx);
  }
}

template <class T>
void get_if(const json& j, const char* key, T& dst, const std::string& ctx) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config: bad value for '" + std::string(key) +
                                "' in " + ctx);
  }
}

void get_rat_if(const json& j, const char* key, Rational& dst,
                const std::string& ctx) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (v.is_number_integer()) {
    dst = Rational(v.get<std::int64_t>());
    return;
  }
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
      !v[1].is_number_integer())
    throw std::invalid_argument("config: '" + std::string(key) + "' in " + ctx +
                                " must be [numerator, denominator]");
  const std::int64_t num = v[0].get<std::int64_t>();
  const std::int64_t den = v[1].get<std::int64_t>();
  if (den == 0)
    throw std::invalid_argument("config: zero denominator for '" +
                                std::string(key) + "' in " + ctx);
  dst = Rational(num, den);
}

json rat_json(const Rational& r) {
  return json::array(
      {static_cast<std::int64_t>(boost::multiprecision::numerator(r)),
       static_cast<std::int64_t>(boost::multiprecision::denominator(r))});
}

json trajectory_json(const GapTrajectory& t) {
  json stages = json::array();
  for (const auto& s : t.stages)
    stages.push_back({{"stage", s.stage},
                      {"n", rat_str(s.n)},
                      {"ell", rat_str(s.ell)},
                      {"R", rat_str(s.R)},
                      {"rho", rat_str(s.rho)},
                      {"eps", s.eps}});
  return {{"terminated_at", t.terminated_at},
          {"reason", reason_name(t.reason)},
          {"stages", stages}};
}

// ------------------------------------------------ adversaries for the drivers

/// One-grid-step extremal plan: corrupt floor(len * delta) symbols at the
/// front of every stage (estimate rounds up to exactly delta), then drop the
/// leftover budget into the termination region, capped at the certified
/// tolerance of the fired layout so recovery stays guaranteed.
std::vector<CorruptionSpan> mirror_grid_spans(const FullFbScheme& s) {
  const FullFbParams& par = s.params();
  std::vector<CorruptionSpan> spans;
  std::uint64_t offset = 0, len = s.message_length(), spent = 0;
  std::uint64_t term_content = 0;
  Rational est(s.budget());
  for (std::uint32_t stage = 1; stage <= par.stage_cap; ++stage) {
    std::uint64_t w =
        static_cast<std::uint64_t>(floor_rational(Rational(len) * par.delta));
    if (w == 0) {
      term_content = s.stage_index_len(len, 0);
      offset += len;  // clean stage; recursion ends right after it
      break;
    }
    if (spent + w > s.budget()) w = s.budget() - spent;
    if (w == 0) break;
    spans.push_back({offset, w});
    spent += w;
    const Rational p_hat = grid_round_up(Rational(w, len), par.delta);
    const auto w_max = static_cast<std::uint64_t>(ceil_rational(p_hat * len));
    const std::uint64_t next = s.stage_index_len(len, w_max);
    offset += len;
    est -= p_hat * len;
    if (est < 0) est = 0;
    term_content = next;
    if (s.trigger_fires(next, par.n - offset, est)) break;
    if (stage < par.stage_cap) len = next;
  }
  std::uint64_t leftover = s.budget() - spent;
  const auto lay = s.termination().try_layout(term_content, par.n - offset);
  if (lay.has_value()) leftover = std::min(leftover, lay->certified);
  if (leftover > 0) spans.push_back({offset, leftover});
  return spans;
}

std::unique_ptr<Adversary> make_full_fb_adversary(const AdversarySpec& spec,
                                                  const FullFbScheme& s,
                                                  std::uint64_t trial_seed) {
  const FullFbParams& par = s.params();
  if (spec.kind == "null") return make_null_adversary();
  if (spec.kind == "uniform_iid")
    return make_uniform_iid_adversary(par.q, spec.p, trial_seed);
  if (spec.kind == "burst_front")
    return make_burst_front_adversary(par.q,
                                      spec.count ? spec.count : s.budget());
  if (spec.kind == "grid_extremal")
    return make_grid_extremal_adversary(
        par.q, spec.spans.empty() ? mirror_grid_spans(s) : spec.spans);
  if (spec.kind == "stage_greedy") {
    // Shared mutable state: the tracker mirrors the stage recursion so the
    // adversary always knows the next stage boundary.
    struct Track {
      std::uint64_t offset = 0;
      std::uint32_t stage = 0;
      Rational est;
    };
    auto tk = std::make_shared<Track>();
    tk->est = Rational(s.budget());
    const FullFbScheme* sp = &s;
    StageTracker tracker = [tk, sp, par](std::uint64_t stage_len,
                                         std::uint64_t flips) -> std::uint64_t {
      ++tk->stage;
      tk->offset += stage_len;
      const Rational p_hat =
          grid_round_up(Rational(flips, stage_len), par.delta);
      const auto w_max =
          static_cast<std::uint64_t>(ceil_rational(p_hat * stage_len));
      const std::uint64_t next = sp->stage_index_len(stage_len, w_max);
      tk->est -= p_hat * stage_len;
      if (tk->est < 0) tk->est = 0;
      if (tk->stage >= par.stage_cap ||
          sp->trigger_fires(next, par.n - tk->offset, tk->est))
        return 0;
      return next;
    };
    return make_stage_greedy_adversary(par.q, s.message_length(), s.budget(),
                                       spec.fraction, tracker);
  }
  throw std::invalid_argument("adversary kind '" + spec.kind +
                              "' is not available for run-full-fb");
}

std::unique_ptr<Adversary> make_partial_fb_adversary(const AdversarySpec& spec,
                                                     const PartialFbScheme& s,
                                                     std::uint64_t trial_seed) {
  const PartialFbParams& par = s.params();
  if (spec.kind == "null") return make_null_adversary();
  if (spec.kind == "uniform_iid")
    return make_uniform_iid_adversary(par.q, spec.p, trial_seed);
  if (spec.kind == "burst_front")
    return make_burst_front_adversary(par.q,
                                      spec.count ? spec.count : s.budget());
  if (spec.kind == "grid_extremal") {
    if (spec.spans.empty())
      throw std::invalid_argument(
          "adversary grid_extremal needs explicit spans for run-partial-fb");
    return make_grid_extremal_adversary(par.q, spec.spans);
  }
  throw std::invalid_argument("adversary kind '" + spec.kind +
                              "' is not available for run-partial-fb");
}

}  // namespace

// -----------------------------------------------------------------------------
// Labels and mode names
// -----------------------------------------------------------------------------

std::string adversary_label(const AdversarySpec& spec) {
  if (spec.kind == "uniform_iid")
    return "uniform_iid(p=" + fmt_double(spec.p) + ")";
  if (spec.kind == "burst_front")
    return spec.count ? "burst_front(count=" + std::to_string(spec.count) + ")"
                      : "burst_front(count=budget)";
  if (spec.kind == "grid_extremal")
    return spec.spans.empty()
               ? "grid_extremal(mirrored)"
               : "grid_extremal(spans=" + std::to_string(spec.spans.size()) +
                     ")";
  if (spec.kind == "stage_greedy")
    return "stage_greedy(fraction=" + fmt_double(spec.fraction) + ")";
  return spec.kind;
}

std::string run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::plan: return "plan";
    case RunMode::full_fb: return "run-full-fb";
    case RunMode::partial_fb: return "run-partial-fb";
    case RunMode::selftest: return "component-selftest";
    case RunMode::sweep: return "sweep";
  }
  return "?";
}

RunMode parse_run_mode(const std::string& name) {
  if (name == "plan") return RunMode::plan;
  if (name == "run-full-fb") return RunMode::full_fb;
  if (name == "run-partial-fb") return RunMode::partial_fb;
  if (name == "component-selftest") return RunMode::selftest;
  if (name == "sweep") return RunMode::sweep;
  throw std::invalid_argument(
      "unknown mode '" + name +
      "' (expected plan | run-full-fb | run-partial-fb | component-selftest | "
      "sweep)");
}

// -----------------------------------------------------------------------------
// Planner tables
// -----------------------------------------------------------------------------

void for_each_grid_trajectory(
    const TrajectoryConfig& cfg,
    const std::function<void(const std::vector<Rational>&, const GapTrajectory&)>&
        visit,
    std::uint64_t max_leaves) {
  if (cfg.delta <= 0 || cfg.delta > 1)
    throw std::invalid_argument("trajectory grid: delta must be in (0, 1]");
  std::vector<Rational> grid;
  for (Rational p = 0; p <= 1; p += cfg.delta) grid.push_back(p);

  const Rational budget = cfg.rho * cfg.n;
  std::uint64_t leaves = 0;
  std::vector<Rational> seq;

  PlannerState init;
  init.q = cfg.q;
  init.n = cfg.n;
  init.R = cfg.R;
  init.rho = cfg.rho;
  init.ell = cfg.R * cfg.n;
  init.stage = 1;
  init = finish_state(init);
  const Rational block_len = cfg.n * cfg.kappa;

  std::function<void(const PlannerState&, const Rational&)> rec =
      [&](const PlannerState& s, const Rational& spent) {
        // Mirror the trajectory's own stopping rule at this stage start.
        const double rz = zyablov_rate_or_zero(
            std::max(0.0, static_cast<double>(s.rho)), cfg.eps_z, cfg.q);
        const bool stop = static_cast<double>(s.R) <= rz || s.rho <= 0 ||
                          int(seq.size()) + 1 >= cfg.stage_cap;
        if (stop) {
          if (++leaves > max_leaves)
            throw infeasible_error(
                "grid trajectory enumeration exceeded max_leaves");
          visit(seq, simulate_trajectory(cfg, seq));
          return;
        }
        for (const Rational& p : grid) {
          if (p * s.ell > budget - spent) break;  // ascending grid
          PlannerState next;
          switch (cfg.mode) {
            case StepMode::clean: next = step_clean(s, p); break;
            case StepMode::delta: next = step_delta(s, p, cfg.delta); break;
            case StepMode::kappa:
              try {
                next = step_kappa(s, p, cfg.delta, block_len, cfg.eps_t);
              } catch (const infeasible_error&) {
                continue;  // padded stage no longer fits under this noise
              }
              break;
          }
          seq.push_back(p);
          rec(next, spent + p * s.ell);
          seq.pop_back();
        }
      };
  rec(init, Rational(0));
}

PlanTables make_plan(const PlanParams& pp) {
  if (pp.q < 2) throw std::invalid_argument("plan: q must be >= 2");
  if (!(pp.eps > 0.0) || pp.eps > 1.0)
    throw std::invalid_argument("plan: eps must be in (0, 1]");
  if (pp.gamma < 0.0) throw std::invalid_argument("plan: gamma must be >= 0");
  if (pp.descent_c < 0.0)
    throw std::invalid_argument("plan: descent_c must be >= 0");
  if (pp.n <= 0) throw std::invalid_argument("plan: n must be positive");
  if (pp.rho < 0 || static_cast<double>(pp.rho) >= 1.0 - 1.0 / pp.q)
    throw std::invalid_argument("plan: rho must be in [0, 1 - 1/q)");
  if (pp.delta <= 0 || pp.delta > 1)
    throw std::invalid_argument("plan: delta must be in (0, 1]");
  if (pp.stage_cap < 1)
    throw std::invalid_argument("plan: stage_cap must be >= 1");

  PlanTables t;
  t.in = pp;
  t.gamma = pp.gamma > 0.0 ? pp.gamma : gamma_floor(pp.eps, pp.q);
  t.lambda = lambda_tilde(pp.eps, t.gamma, pp.q, pp.descent_c);
  t.delta_star = delta_choice(pp.eps, t.lambda, pp.q);

  // Milli-rate: R = 1 - H_q(rho) - eps floored to a thousandth, so the gap
  // the session actually budgets for is at least eps.
  const double r_real =
      1.0 - entropy_q_rational(pp.rho, pp.q) - pp.eps;
  const auto milli = static_cast<std::int64_t>(std::floor(r_real * 1000.0));
  if (milli <= 0)
    throw infeasible_error("plan: derived rate 1 - H_q(rho) - eps is not positive");
  t.rate = Rational(milli, 1000);

  try {
    t.kappa = kappa_plan(pp.eps, t.gamma, pp.q, pp.descent_c);
    t.kappa_ok = true;
  } catch (const std::exception& e) {
    t.kappa_ok = false;
    t.kappa_error = e.what();
  }

  TrajectoryConfig cfg;
  cfg.q = pp.q;
  cfg.n = pp.n;
  cfg.R = t.rate;
  cfg.rho = pp.rho;
  cfg.eps_z = t.gamma / 4.0;
  cfg.mode = StepMode::delta;
  cfg.delta = pp.delta;
  cfg.stage_cap = pp.stage_cap;

  t.clean = simulate_trajectory(cfg, {});
  if (pp.enumerate_worst) {
    for_each_grid_trajectory(cfg, [&](const std::vector<Rational>& seq,
                                      const GapTrajectory& traj) {
      ++t.enumerated;
      if (t.worst.stages.empty() || traj.terminated_at > t.worst.terminated_at) {
        t.worst = traj;
        t.worst_p = seq;
      }
    });
  }
  return t;
}

// -----------------------------------------------------------------------------
// Configuration
// -----------------------------------------------------------------------------

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.mode = RunMode::selftest;
  cfg.trials = 10;
  cfg.master_seed = 1;
  cfg.out_dir = "out";

  // Binary full-feedback session: n = 4096, message 1228, budget 409.
  cfg.full.q = 2;
  cfg.full.n = 4096;
  cfg.full.rate = Rational(3, 10);
  cfg.full.rho = Rational(1, 10);
  cfg.full.delta = Rational(1, 8);
  cfg.full.stage_cap = 6;
  cfg.full.term.q = 2;
  cfg.full.term.inner_len = 63;
  cfg.full.term.inner_dim = 7;
  cfg.full.term.inner_dist = 22;
  cfg.full.term.master_seed = 5;

  // Binary minimal-feedback session: n = 16384, message 2457, budget 327.
  cfg.partial.q = 2;
  cfg.partial.n = 16384;
  cfg.partial.block_len = 256;
  cfg.partial.rate = Rational(3, 20);
  cfg.partial.rho = Rational(1, 50);
  cfg.partial.delta = Rational(1, 32);
  cfg.partial.stage_cap = 8;
  cfg.partial.c_e = 8.0;
  cfg.partial.c_p = 2;
  cfg.partial.master_seed = 7;
  cfg.partial.feedback_seed = 11;
  cfg.partial.verbatim_margin = 2;
  cfg.partial.chunk.q = 2;
  cfg.partial.chunk.lc = 20;
  cfg.partial.chunk.eps_h = 0.42;
  cfg.partial.chunk.eps_d = 0.075;
  cfg.partial.chunk.parity_overhead = 0.10;
  cfg.partial.chunk.digest_floor = 11;
  cfg.partial.chunk.parity_min = 5;
  cfg.partial.term.q = 2;
  cfg.partial.term.inner_len = 63;
  cfg.partial.term.inner_dim = 9;
  cfg.partial.term.inner_dist = 18;
  cfg.partial.term.master_seed = 3;

  // Plan-mode defaults are the header defaults (toy descent constant).
  return cfg;
}

namespace {

TerminationParams term_from_json(const json& j, const std::string& ctx,
                                 TerminationParams cur, std::uint32_t scheme_q) {
  expect_keys(j, ctx,
              {"inner_len", "inner_dim", "inner_dist", "master_seed",
               "max_seed_draws"});
  get_if(j, "inner_len", cur.inner_len, ctx);
  get_if(j, "inner_dim", cur.inner_dim, ctx);
  get_if(j, "inner_dist", cur.inner_dist, ctx);
  get_if(j, "master_seed", cur.master_seed, ctx);
  get_if(j, "max_seed_draws", cur.max_seed_draws, ctx);
  cur.q = scheme_q;  // the termination alphabet always follows the scheme
  return cur;
}

AdversarySpec adversary_from_json(const json& j) {
  AdversarySpec spec;
  expect_keys(j, "adversary", {"kind", "p", "count", "fraction", "spans"});
  get_if(j, "kind", spec.kind, "adversary");
  get_if(j, "p", spec.p, "adversary");
  get_if(j, "count", spec.count, "adversary");
  get_if(j, "fraction", spec.fraction, "adversary");
  if (j.contains("spans")) {
    const json& sp = j.at("spans");
    if (!sp.is_array())
      throw std::invalid_argument(
          "config: 'spans' must be an array of [start, count] pairs");
    for (const json& e : sp) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument(
            "config: each span must be a [start, count] pair");
      spec.spans.push_back(
          {e[0].get<std::uint64_t>(), e[1].get<std::uint64_t>()});
    }
  }
  return spec;
}

void validate_adversary(const AdversarySpec& spec, RunMode mode) {
  static const char* kinds[] = {"null", "uniform_iid", "burst_front",
                                "grid_extremal", "stage_greedy"};
  bool known = false;
  for (const char* k : kinds) known = known || spec.kind == k;
  if (!known)
    throw std::invalid_argument("config: unknown adversary kind '" + spec.kind +
                                "'");
  if (spec.kind == "uniform_iid" && !(spec.p >= 0.0 && spec.p < 1.0))
    throw std::invalid_argument(
        "config: adversary.p must be in [0, 1) for uniform_iid");
  if (spec.kind == "stage_greedy" &&
      !(spec.fraction > 0.0 && spec.fraction <= 1.0))
    throw std::invalid_argument(
        "config: adversary.fraction must be in (0, 1] for stage_greedy");
  if (mode == RunMode::partial_fb && spec.kind == "stage_greedy")
    throw std::invalid_argument(
        "config: stage_greedy tracks the full-feedback layout and is not "
        "available for run-partial-fb");
  if (mode == RunMode::partial_fb && spec.kind == "grid_extremal" &&
      spec.spans.empty())
    throw std::invalid_argument(
        "config: grid_extremal needs explicit spans for run-partial-fb");
}

void validate_run_config(const RunConfig& cfg) {
  validate_adversary(cfg.adversary, cfg.mode);
  switch (cfg.mode) {
    case RunMode::full_fb: {
      FullFbScheme probe(cfg.full);  // parameter web check
      if (cfg.adversary.kind == "grid_extremal" && !cfg.adversary.spans.empty())
        make_grid_extremal_adversary(cfg.full.q, cfg.adversary.spans);
      break;
    }
    case RunMode::partial_fb: {
      PartialFbScheme probe(cfg.partial);
      if (cfg.adversary.kind == "grid_extremal")
        make_grid_extremal_adversary(cfg.partial.q, cfg.adversary.spans);
      break;
    }
    case RunMode::plan: {
      PlanParams pp = cfg.plan;
      pp.enumerate_worst = false;  // cheap feasibility probe
      make_plan(pp);
      break;
    }
    case RunMode::sweep:
    case RunMode::selftest:
      break;  // sweep cells are validated at parse time
  }
}

}  // namespace

RunConfig run_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") +
                                e.what());
  }
  expect_keys(j, "top level",
              {"mode", "trials", "master_seed", "out_dir", "adversary", "full",
               "partial", "plan", "sweep"});

  RunConfig cfg = default_run_config();
  if (j.contains("mode")) cfg.mode = parse_run_mode(j.at("mode").get<std::string>());
  get_if(j, "trials", cfg.trials, "top level");
  get_if(j, "master_seed", cfg.master_seed, "top level");
  get_if(j, "out_dir", cfg.out_dir, "top level");
  if (j.contains("adversary")) cfg.adversary = adversary_from_json(j.at("adversary"));

  if (j.contains("full")) {
    const json& f = j.at("full");
    const std::string ctx = "full";
    expect_keys(f, ctx, {"q", "n", "rate", "rho", "delta", "stage_cap", "term"});
    get_if(f, "q", cfg.full.q, ctx);
    get_if(f, "n", cfg.full.n, ctx);
    get_rat_if(f, "rate", cfg.full.rate, ctx);
    get_rat_if(f, "rho", cfg.full.rho, ctx);
    get_rat_if(f, "delta", cfg.full.delta, ctx);
    get_if(f, "stage_cap", cfg.full.stage_cap, ctx);
    if (f.contains("term"))
      cfg.full.term = term_from_json(f.at("term"), "full.term", cfg.full.term,
                                     cfg.full.q);
    else
      cfg.full.term.q = cfg.full.q;
  }

  if (j.contains("partial")) {
    const json& p = j.at("partial");
    const std::string ctx = "partial";
    expect_keys(p, ctx,
                {"q", "n", "block_len", "rate", "rho", "delta", "stage_cap",
                 "c_e", "c_p", "master_seed", "feedback_seed", "verbatim_margin",
                 "chunk", "term"});
    get_if(p, "q", cfg.partial.q, ctx);
    get_if(p, "n", cfg.partial.n, ctx);
    get_if(p, "block_len", cfg.partial.block_len, ctx);
    get_rat_if(p, "rate", cfg.partial.rate, ctx);
    get_rat_if(p, "rho", cfg.partial.rho, ctx);
    get_rat_if(p, "delta", cfg.partial.delta, ctx);
    get_if(p, "stage_cap", cfg.partial.stage_cap, ctx);
    get_if(p, "c_e", cfg.partial.c_e, ctx);
    get_if(p, "c_p", cfg.partial.c_p, ctx);
    get_if(p, "master_seed", cfg.partial.master_seed, ctx);
    get_if(p, "feedback_seed", cfg.partial.feedback_seed, ctx);
    get_if(p, "verbatim_margin", cfg.partial.verbatim_margin, ctx);
    if (p.contains("chunk")) {
      const json& c = p.at("chunk");
      expect_keys(c, "partial.chunk",
                  {"lc", "eps_h", "eps_d", "parity_overhead", "digest_floor",
                   "parity_min"});
      get_if(c, "lc", cfg.partial.chunk.lc, "partial.chunk");
      get_if(c, "eps_h", cfg.partial.chunk.eps_h, "partial.chunk");
      get_if(c, "eps_d", cfg.partial.chunk.eps_d, "partial.chunk");
      get_if(c, "parity_overhead", cfg.partial.chunk.parity_overhead,
             "partial.chunk");
      get_if(c, "digest_floor", cfg.partial.chunk.digest_floor, "partial.chunk");
      get_if(c, "parity_min", cfg.partial.chunk.parity_min, "partial.chunk");
    }
    cfg.partial.chunk.q = cfg.partial.q;
    if (p.contains("term"))
      cfg.partial.term = term_from_json(p.at("term"), "partial.term",
                                        cfg.partial.term, cfg.partial.q);
    else
      cfg.partial.term.q = cfg.partial.q;
  }

  if (j.contains("plan")) {
    const json& pl = j.at("plan");
    const std::string ctx = "plan";
    expect_keys(pl, ctx,
                {"q", "eps", "gamma", "descent_c", "n", "rho", "delta",
                 "stage_cap", "enumerate_worst"});
    get_if(pl, "q", cfg.plan.q, ctx);
    get_if(pl, "eps", cfg.plan.eps, ctx);
    get_if(pl, "gamma", cfg.plan.gamma, ctx);
    get_if(pl, "descent_c", cfg.plan.descent_c, ctx);
    get_rat_if(pl, "n", cfg.plan.n, ctx);
    get_rat_if(pl, "rho", cfg.plan.rho, ctx);
    get_rat_if(pl, "delta", cfg.plan.delta, ctx);
    get_if(pl, "stage_cap", cfg.plan.stage_cap, ctx);
    get_if(pl, "enumerate_worst", cfg.plan.enumerate_worst, ctx);
  }

  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    if (!sw.is_array())
      throw std::invalid_argument("config: 'sweep' must be an array of cells");
    json base = j;
    base.erase("sweep");
    for (const json& cell : sw) {
      if (!cell.is_object())
        throw std::invalid_argument("config: sweep cells must be objects");
      if (cell.contains("sweep"))
        throw std::invalid_argument("config: sweep cells may not nest 'sweep'");
      json merged = base;
      merged.merge_patch(cell);
      RunConfig cell_cfg = run_config_from_json_text(merged.dump());
      if (cell_cfg.mode != RunMode::full_fb &&
          cell_cfg.mode != RunMode::partial_fb)
        throw std::invalid_argument(
            "config: each sweep cell must resolve to run-full-fb or "
            "run-partial-fb");
      cfg.sweep_cells.push_back(cell.dump());
    }
  }

  validate_run_config(cfg);
  return cfg;
}

RunConfig load_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return run_config_from_json_text(ss.str());
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["mode"] = run_mode_name(cfg.mode);
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["out_dir"] = cfg.out_dir;

  json adv;
  adv["kind"] = cfg.adversary.kind;
  adv["p"] = cfg.adversary.p;
  adv["count"] = cfg.adversary.count;
  adv["fraction"] = cfg.adversary.fraction;
  json spans = json::array();
  for (const auto& s : cfg.adversary.spans)
    spans.push_back(json::array({s.start, s.count}));
  adv["spans"] = spans;
  j["adversary"] = adv;

  json f;
  f["q"] = cfg.full.q;
  f["n"] = cfg.full.n;
  f["rate"] = rat_json(cfg.full.rate);
  f["rho"] = rat_json(cfg.full.rho);
  f["delta"] = rat_json(cfg.full.delta);
  f["stage_cap"] = cfg.full.stage_cap;
  f["term"] = {{"inner_len", cfg.full.term.inner_len},
               {"inner_dim", cfg.full.term.inner_dim},
               {"inner_dist", cfg.full.term.inner_dist},
               {"master_seed", cfg.full.term.master_seed},
               {"max_seed_draws", cfg.full.term.max_seed_draws}};
  j["full"] = f;

  json p;
  p["q"] = cfg.partial.q;
  p["n"] = cfg.partial.n;
  p["block_len"] = cfg.partial.block_len;
  p["rate"] = rat_json(cfg.partial.rate);
  p["rho"] = rat_json(cfg.partial.rho);
  p["delta"] = rat_json(cfg.partial.delta);
  p["stage_cap"] = cfg.partial.stage_cap;
  p["c_e"] = cfg.partial.c_e;
  p["c_p"] = cfg.partial.c_p;
  p["master_seed"] = cfg.partial.master_seed;
  p["feedback_seed"] = cfg.partial.feedback_seed;
  p["verbatim_margin"] = cfg.partial.verbatim_margin;
  p["chunk"] = {{"lc", cfg.partial.chunk.lc},
                {"eps_h", cfg.partial.chunk.eps_h},
                {"eps_d", cfg.partial.chunk.eps_d},
                {"parity_overhead", cfg.partial.chunk.parity_overhead},
                {"digest_floor", cfg.partial.chunk.digest_floor},
                {"parity_min", cfg.partial.chunk.parity_min}};
  p["term"] = {{"inner_len", cfg.partial.term.inner_len},
               {"inner_dim", cfg.partial.term.inner_dim},
               {"inner_dist", cfg.partial.term.inner_dist},
               {"master_seed", cfg.partial.term.master_seed},
               {"max_seed_draws", cfg.partial.term.max_seed_draws}};
  j["partial"] = p;

  json pl;
  pl["q"] = cfg.plan.q;
  pl["eps"] = cfg.plan.eps;
  pl["gamma"] = cfg.plan.gamma;
  pl["descent_c"] = cfg.plan.descent_c;
  pl["n"] = rat_json(cfg.plan.n);
  pl["rho"] = rat_json(cfg.plan.rho);
  pl["delta"] = rat_json(cfg.plan.delta);
  pl["stage_cap"] = cfg.plan.stage_cap;
  pl["enumerate_worst"] = cfg.plan.enumerate_worst;
  j["plan"] = pl;

  if (!cfg.sweep_cells.empty()) {
    json sw = json::array();
    for (const auto& cell : cfg.sweep_cells) sw.push_back(json::parse(cell));
    j["sweep"] = sw;
  }
  return j.dump(2) + "\n";
}

// -----------------------------------------------------------------------------
// Statistics
// -----------------------------------------------------------------------------

WilsonInterval wilson_interval(std::uint64_t failures, std::uint64_t trials,
                               double z) {
  WilsonInterval w;
  if (trials == 0) return w;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = phat + z2 / (2.0 * n);
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  w.lo = std::max(0.0, (center - half) / denom);
  w.hi = std::min(1.0, (center + half) / denom);
  return w;
}

void RunReport::recompute() {
  trials = rows.size();
  failures = 0;
  max_list = 0;
  max_stages = 0;
  std::uint64_t list_sum = 0, stage_sum = 0;
  for (const auto& r : rows) {
    failures += r.success ? 0 : 1;
    list_sum += r.list_size;
    stage_sum += r.stages;
    max_list = std::max(max_list, r.list_size);
    max_stages = std::max(max_stages, r.stages);
  }
  if (trials > 0) {
    failure_rate = static_cast<double>(failures) / static_cast<double>(trials);
    mean_list = static_cast<double>(list_sum) / static_cast<double>(trials);
    mean_stages = static_cast<double>(stage_sum) / static_cast<double>(trials);
  } else {
    failure_rate = mean_list = mean_stages = 0.0;
  }
  wilson = wilson_interval(failures, trials);
}

// -----------------------------------------------------------------------------
// Monte Carlo drivers
// -----------------------------------------------------------------------------

RunReport run_full_fb(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  FullFbScheme s(cfg.full);

  RunReport rep;
  rep.mode = run_mode_name(RunMode::full_fb);
  rep.adversary = adversary_label(cfg.adversary);
  rep.master_seed = cfg.master_seed;
  rep.q = cfg.full.q;
  rep.n = cfg.full.n;
  rep.msg_len = s.message_length();
  rep.budget = s.budget();

  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    TrialRow row;
    row.trial = t;
    auto mrng = make_rng(cfg.master_seed, "trial-msg", t);
    const QaryWord msg = random_word(cfg.full.q, s.message_length(), mrng);
    const std::uint64_t adv_seed = derive_seed(cfg.master_seed, "trial-adv", t);
    try {
      Channel ch(cfg.full.q, cfg.full.n, cfg.full.rho,
                 make_full_fb_adversary(cfg.adversary, s, adv_seed));
      FullFbTranscript tr;
      const QaryWord y = s.transmit(msg, ch, &tr);
      const auto list = s.decode(y);
      row.list_size = list.size();
      row.stages = static_cast<std::uint32_t>(tr.stages.size());
      row.budget_spent = ch.spent();
      // Full feedback returns each stage verbatim; the termination region
      // needs none.
      row.feedback_symbols = tr.term_offset;
      row.success = false;
      for (const auto& m : list)
        if (m == msg) {
          row.success = true;
          break;
        }
    } catch (const std::exception& e) {
      row.success = false;
      row.error = e.what();
    }
    rep.rows.push_back(std::move(row));
  }
  rep.recompute();
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

RunReport run_partial_fb(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const PartialFbScheme base(cfg.partial);

  RunReport rep;
  rep.mode = run_mode_name(RunMode::partial_fb);
  rep.adversary = adversary_label(cfg.adversary);
  rep.master_seed = cfg.master_seed;
  rep.q = cfg.partial.q;
  rep.n = cfg.partial.n;
  rep.msg_len = base.message_length();
  rep.budget = base.budget();
  rep.feedback_per_trial = base.schedule().total();
  rep.perm_storage_bits =
      PermBank(cfg.partial.n, cfg.partial.c_p, cfg.partial.master_seed)
          .storage_bits();

  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    TrialRow row;
    row.trial = t;
    auto mrng = make_rng(cfg.master_seed, "trial-msg", t);
    const QaryWord msg = random_word(cfg.partial.q, base.message_length(), mrng);
    const std::uint64_t adv_seed = derive_seed(cfg.master_seed, "trial-adv", t);
    try {
      PartialFbParams pp = cfg.partial;
      pp.feedback_seed = derive_seed(cfg.master_seed, "trial-fb", t);
      const PartialFbScheme s(pp);
      Channel ch(pp.q, pp.n, pp.rho,
                 make_partial_fb_adversary(cfg.adversary, s, adv_seed));
      PartialFbTranscript tr;
      const QaryWord y = s.transmit(msg, ch, &tr);
      const auto list = s.decode(y);
      row.list_size = list.size();
      row.stages = static_cast<std::uint32_t>(tr.stages.size());
      row.budget_spent = ch.spent();
      row.feedback_symbols =
          ch.feedback_packets() * s.schedule().per_block();
      row.success = false;
      for (const auto& e : list)
        if (e.message == msg) {
          row.success = true;
          break;
        }
    } catch (const std::exception& e) {
      row.success = false;
      row.error = e.what();
    }
    rep.rows.push_back(std::move(row));
  }
  rep.recompute();
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

std::vector<RunReport> run_sweep(const RunConfig& cfg) {
  json base = json::parse(run_config_to_json(cfg));
  base.erase("sweep");
  std::vector<RunReport> out;
  for (const auto& cell_text : cfg.sweep_cells) {
    json merged = base;
    merged.merge_patch(json::parse(cell_text));
    const RunConfig cell = run_config_from_json_text(merged.dump());
    out.push_back(cell.mode == RunMode::full_fb ? run_full_fb(cell)
                                                : run_partial_fb(cell));
  }
  return out;
}

// -----------------------------------------------------------------------------
// Report serialization
// -----------------------------------------------------------------------------

std::string report_to_csv(const RunReport& r) {
  std::ostringstream os;
  os << "# qfl-report v1\n";
  os << "# mode=" << r.mode << "\n";
  os << "# adversary=" << r.adversary << "\n";
  os << "# master_seed=" << r.master_seed << "\n";
  os << "# scheme: q=" << r.q << " n=" << r.n << " msg_len=" << r.msg_len
     << " budget=" << r.budget << " trials=" << r.trials << "\n";
  os << "# prg: mt19937_64 seeded by derive_seed(master_seed, tag, trial); "
        "tags trial-msg / trial-adv / trial-fb\n";
  os << "# aggregates: failures=" << r.failures
     << " failure_rate=" << fmt_double(r.failure_rate)
     << " wilson_lo=" << fmt_double(r.wilson.lo)
     << " wilson_hi=" << fmt_double(r.wilson.hi)
     << " mean_list=" << fmt_double(r.mean_list) << " max_list=" << r.max_list
     << " mean_stages=" << fmt_double(r.mean_stages)
     << " max_stages=" << r.max_stages
     << " feedback_per_trial=" << r.feedback_per_trial
     << " perm_storage_bits=" << r.perm_storage_bits.str() << "\n";
  os << "trial,success,list_size,stages,budget_spent,feedback_symbols,error\n";
  for (const auto& row : r.rows) {
    os << row.trial << ',' << (row.success ? 1 : 0) << ',' << row.list_size
       << ',' << row.stages << ',' << row.budget_spent << ','
       << row.feedback_symbols << ',' << csv_field(row.error) << "\n";
  }
  return os.str();
}

std::string report_to_json(const RunReport& r) {
  json j;
  j["mode"] = r.mode;
  j["adversary"] = r.adversary;
  j["master_seed"] = r.master_seed;
  j["q"] = r.q;
  j["n"] = r.n;
  j["msg_len"] = r.msg_len;
  j["budget"] = r.budget;
  j["trials"] = r.trials;
  j["aggregates"] = {{"failures", r.failures},
                     {"failure_rate", r.failure_rate},
                     {"wilson_lo", r.wilson.lo},
                     {"wilson_hi", r.wilson.hi},
                     {"mean_list", r.mean_list},
                     {"max_list", r.max_list},
                     {"mean_stages", r.mean_stages},
                     {"max_stages", r.max_stages},
                     {"feedback_per_trial", r.feedback_per_trial},
                     {"perm_storage_bits", r.perm_storage_bits.str()}};
  j["row_columns"] = {"trial",        "success",          "list_size", "stages",
                      "budget_spent", "feedback_symbols", "error"};
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json::array({row.trial, row.success ? 1 : 0, row.list_size,
                                row.stages, row.budget_spent,
                                row.feedback_symbols, row.error}));
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string sweep_summary_csv(const std::vector<RunReport>& cells) {
  std::ostringstream os;
  os << "# qfl-sweep v1\n";
  os << "cell,mode,adversary,q,n,trials,failures,failure_rate,wilson_lo,"
        "wilson_hi,mean_list,max_list,mean_stages,feedback_per_trial\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const RunReport& r = cells[i];
    os << i << ',' << r.mode << ',' << csv_field(r.adversary) << ',' << r.q
       << ',' << r.n << ',' << r.trials << ',' << r.failures << ','
       << fmt_double(r.failure_rate) << ',' << fmt_double(r.wilson.lo) << ','
       << fmt_double(r.wilson.hi) << ',' << fmt_double(r.mean_list) << ','
       << r.max_list << ',' << fmt_double(r.mean_stages) << ','
       << r.feedback_per_trial << "\n";
  }
  return os.str();
}

std::string plan_to_json(const PlanTables& t) {
  json j;
  j["input"] = {{"q", t.in.q},
                {"eps", t.in.eps},
                {"gamma", t.in.gamma},
                {"descent_c", t.in.descent_c},
                {"n", rat_str(t.in.n)},
                {"rho", rat_str(t.in.rho)},
                {"delta", rat_str(t.in.delta)},
                {"stage_cap", t.in.stage_cap}};
  j["gamma"] = t.gamma;
  j["lambda"] = t.lambda;
  j["delta_star"] = t.delta_star;
  j["rate"] = rat_str(t.rate);
  if (t.kappa_ok) {
    j["kappa"] = {{"lambda", t.kappa.lambda}, {"eps_t", t.kappa.eps_t},
                  {"u_min", t.kappa.u_min},   {"b", t.kappa.b},
                  {"A", t.kappa.A},           {"M", t.kappa.M},
                  {"kappa", t.kappa.kappa},   {"c_min", t.kappa.c_min}};
  } else {
    j["kappa"] = {{"error", t.kappa_error}};
  }
  j["clean"] = trajectory_json(t.clean);
  json wp = json::array();
  for (const auto& p : t.worst_p) wp.push_back(rat_str(p));
  j["worst_p"] = wp;
  j["worst"] = trajectory_json(t.worst);
  j["enumerated"] = t.enumerated;
  return j.dump(2) + "\n";
}

namespace {

void csv_trajectory(std::ostringstream& os, const char* name,
                    const GapTrajectory& t) {
  os << name << ",terminated_at," << t.terminated_at << "\n";
  os << name << ",reason," << reason_name(t.reason) << "\n";
  for (const auto& s : t.stages)
    os << name << "_stage," << s.stage << ",n=" << rat_str(s.n)
       << ";ell=" << rat_str(s.ell) << ";R=" << rat_str(s.R)
       << ";rho=" << rat_str(s.rho) << ";eps=" << fmt_double(s.eps) << "\n";
}

}  // namespace

std::string plan_to_csv(const PlanTables& t) {
  std::ostringstream os;
  os << "# qfl-plan v1\n";
  os << "section,key,value\n";
  os << "input,q," << t.in.q << "\n";
  os << "input,eps," << fmt_double(t.in.eps) << "\n";
  os << "input,gamma," << fmt_double(t.in.gamma) << "\n";
  os << "input,descent_c," << fmt_double(t.in.descent_c) << "\n";
  os << "input,n," << rat_str(t.in.n) << "\n";
  os << "input,rho," << rat_str(t.in.rho) << "\n";
  os << "input,delta," << rat_str(t.in.delta) << "\n";
  os << "input,stage_cap," << t.in.stage_cap << "\n";
  os << "derived,gamma," << fmt_double(t.gamma) << "\n";
  os << "derived,lambda," << t.lambda << "\n";
  os << "derived,delta_star," << fmt_double(t.delta_star) << "\n";
  os << "derived,rate," << rat_str(t.rate) << "\n";
  if (t.kappa_ok) {
    os << "kappa,lambda," << t.kappa.lambda << "\n";
    os << "kappa,eps_t," << fmt_double(t.kappa.eps_t) << "\n";
    os << "kappa,u_min," << fmt_double(t.kappa.u_min) << "\n";
    os << "kappa,b," << fmt_double(t.kappa.b) << "\n";
    os << "kappa,A," << fmt_double(t.kappa.A) << "\n";
    os << "kappa,M," << fmt_double(t.kappa.M) << "\n";
    os << "kappa,kappa," << fmt_double(t.kappa.kappa) << "\n";
    os << "kappa,c_min," << fmt_double(t.kappa.c_min) << "\n";
  } else {
    os << "kappa,error," << csv_field(t.kappa_error) << "\n";
  }
  csv_trajectory(os, "clean", t.clean);
  for (std::size_t i = 0; i < t.worst_p.size(); ++i)
    os << "worst_p," << i + 1 << ',' << rat_str(t.worst_p[i]) << "\n";
  csv_trajectory(os, "worst", t.worst);
  os << "search,enumerated," << t.enumerated << "\n";
  return os.str();
}

// -----------------------------------------------------------------------------
// Component selftest
// -----------------------------------------------------------------------------

namespace {

bool report(std::ostream& log, const char* name, bool ok,
            const std::string& detail = "") {
  log << "selftest " << name << (ok ? ": ok" : ": FAIL") << detail << "\n";
  return ok;
}

}  // namespace

bool component_selftest(std::ostream& log) {
  bool all = true;
  auto rng = make_rng(2024, "selftest");

  // q-ary math: entropy identities and a Zyablov sample.
  {
    bool ok = std::abs(entropy_q(0.5, 2) - 1.0) < 1e-12;
    ok = ok && std::abs(inv_entropy_q(entropy_q(0.3, 2), 2) - 0.3) < 1e-9;
    ok = ok && pattern_count(10, 10, 2) == 1024;
    const double rz = zyablov_rate(0.1, 0.05, 2);
    ok = ok && rz > 0.0 && rz < 1.0;
    all &= report(log, "qary_math", ok);
  }
  // Enumerative codec round trip.
  {
    bool ok = true;
    PatternCodec codec(3, 8, 3);
    ok = ok && codec.count() == pattern_count(8, 3, 3);
    for (int it = 0; it < 200 && ok; ++it) {
      QaryWord s(3, 8);
      const int w = int(rng() % 4);
      for (int k = 0; k < w; ++k)
        s.sym[rng() % 8] = static_cast<Symbol>(1 + rng() % 2);
      QaryWord back;
      ok = codec.try_decode(codec.encode(s), back) && back == s;
    }
    all &= report(log, "enumcode", ok);
  }
  // Planner: exact conservation plus the toy stage bound.
  {
    PlannerState s;
    s.q = 2;
    s.n = 4096;
    s.R = Rational(3, 10);
    s.rho = Rational(1, 10);
    s.ell = s.R * s.n;
    s = finish_state(s);
    const Rational p(1, 8);
    const auto t = step_clean(s, p);
    bool ok = (Rational(1) - s.R) * t.rho + s.R * p == s.rho;
    ok = ok && lambda_tilde(0.4, 0.4, 2, 0.243) == 4;
    all &= report(log, "planner", ok);
  }
  // Reed-Solomon over GF(16): 4 errors within distance 9.
  {
    const GaloisField& F = GaloisField::of_order(16);
    RSCode rs(F, 7, 15);
    std::vector<std::uint32_t> data(7);
    for (auto& d : data) d = rng() % 16;
    auto cw = rs.encode(data);
    auto noisy = cw;
    for (std::uint64_t i : {1ull, 4ull, 9ull, 13ull})
      noisy[i] = (noisy[i] + 1 + rng() % 15) % 16;
    auto dec = rs.decode(noisy);
    all &= report(log, "gf_rs", dec.has_value() && *dec == cw);
  }
  // Hashing and permutations.
  {
    HashFamily fam{2, 42};
    const QaryWord content = random_word(2, 16, rng);
    const QaryWord seed = random_word(2, 4, rng);
    const QaryWord d12 = fam.eval(content, 3, seed, 12);
    const QaryWord d8 = fam.eval(content, 3, seed, 8);
    bool ok = std::equal(d8.sym.begin(), d8.sym.end(), d12.sym.begin());
    PermBank bank(64, 2, 9);
    const QaryWord w = random_word(2, 64, rng);
    ok = ok && bank.invert(bank.apply(w, 17), 17) == w;
    all &= report(log, "hashperm", ok);
  }
  // Channel budget clamp.
  {
    Channel ch(2, 20, Rational(1, 4), make_burst_front_adversary(2, 10));
    QaryWord seg(2, 20);
    ch.transmit(seg);
    all &= report(log, "channel", ch.spent() == 5 && ch.clamped() == 5);
  }
  // Side-information codec round trip under light noise.
  {
    ChunkCodecParams par;
    par.q = 2;
    par.lc = 12;
    par.eps_h = 0.3;
    par.eps_d = 0.1;
    par.parity_overhead = 0.2;
    HashFamily fam{2, 123};
    PermBank bank(1024, 2, 77);
    const QaryWord content = random_word(2, 100, rng);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < 16; ++i) seeds.push_back(rng() % 8);
    const QaryWord enc =
        sw_encode(par, content, bank, 5, fam, seeds, 0.1);
    QaryWord noisy = content;
    for (std::uint64_t pos : {7ull, 23ull, 52ull, 90ull})
      noisy.sym[pos] ^= 1;
    const auto dec = sw_decode(par, noisy, enc, bank, 5, fam, seeds, 0.1);
    all &= report(log, "sw_codec", dec.has_value() && *dec == content);
  }
  // Termination code at its certified corruption count.
  {
    TerminationParams tp;
    tp.q = 2;
    tp.inner_len = 63;
    tp.inner_dim = 9;
    tp.inner_dist = 18;
    tp.master_seed = 3;
    TerminationCode tc(tp);
    const QaryWord res = random_word(2, 40, rng);
    QaryWord enc = tc.encode(res, 1024);
    const auto lay = tc.layout(40, 1024);
    for (std::uint64_t i = 0; i < lay.certified; ++i) enc.sym[i] ^= 1;
    const auto dec = tc.decode(enc, 40);
    all &= report(log, "termination", dec.has_value() && *dec == res);
  }
  // Full-feedback sessions: clean and front burst.
  {
    const RunConfig cfg = default_run_config();
    FullFbScheme s(cfg.full);
    bool ok = true;
    for (int kind = 0; kind < 2 && ok; ++kind) {
      const QaryWord msg = random_word(2, s.message_length(), rng);
      Channel ch(2, cfg.full.n, cfg.full.rho,
                 kind == 0 ? make_null_adversary()
                           : make_burst_front_adversary(2, s.budget()));
      const QaryWord y = s.transmit(msg, ch);
      const auto list = s.decode(y);
      ok = false;
      for (const auto& m : list) ok = ok || m == msg;
    }
    all &= report(log, "weldon_full", ok);
  }
  // Minimal-feedback session: clean channel, singleton list.
  {
    const RunConfig cfg = default_run_config();
    const PartialFbScheme s(cfg.partial);
    const QaryWord msg = random_word(2, s.message_length(), rng);
    Channel ch(2, cfg.partial.n, cfg.partial.rho, make_null_adversary());
    PartialFbTranscript tr;
    const QaryWord y = s.transmit(msg, ch, &tr);
    const auto list = s.decode(y);
    bool ok = tr.packets == s.n_blocks() && list.size() == 1 &&
              list[0].message == msg;
    all &= report(log, "weldon_partial", ok);
  }
  return all;
}

}  // namespace qfl
