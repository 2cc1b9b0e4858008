// =============================================================================
// Experiment harness: configuration round trips and strict rejection, Wilson
// intervals, deterministic reports, sweep/direct equivalence, plan tables.
// =============================================================================
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "qfl/harness.hpp"

using namespace qfl;

TEST_SUITE("harness") {

TEST_CASE("wilson interval matches the closed form and clamps") {
  const WilsonInterval w = wilson_interval(5, 100, 1.96);
  // Independent evaluation of the score interval.
  const double ph = 0.05, z = 1.96, n = 100;
  const double denom = 1.0 + z * z / n;
  const double center = ph + z * z / (2 * n);
  const double half = z * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n));
  CHECK(w.lo == doctest::Approx((center - half) / denom).epsilon(1e-12));
  CHECK(w.hi == doctest::Approx((center + half) / denom).epsilon(1e-12));
  CHECK(wilson_interval(0, 0).lo == 0.0);
  CHECK(wilson_interval(0, 0).hi == 0.0);
  CHECK(wilson_interval(0, 50).lo == 0.0);
  CHECK(wilson_interval(50, 50).hi == 1.0);
  CHECK(wilson_interval(0, 50).hi > 0.0);  // zero failures still give margin
}

TEST_CASE("mode names round trip and bad names are rejected") {
  for (RunMode m : {RunMode::plan, RunMode::full_fb, RunMode::partial_fb,
                    RunMode::selftest, RunMode::sweep})
    CHECK(parse_run_mode(run_mode_name(m)) == m);
  CHECK_THROWS_AS(parse_run_mode("run-everything"), std::invalid_argument);
}

TEST_CASE("config serialization round trips byte-identically") {
  RunConfig cfg = default_run_config();
  cfg.mode = RunMode::full_fb;
  cfg.trials = 7;
  cfg.master_seed = 99;
  cfg.adversary.kind = "grid_extremal";
  cfg.adversary.spans = {{0, 10}, {100, 5}};
  const std::string text = run_config_to_json(cfg);
  const RunConfig back = run_config_from_json_text(text);
  CHECK(run_config_to_json(back) == text);
  CHECK(back.trials == 7);
  CHECK(back.adversary.spans.size() == 2);
  CHECK(back.adversary.spans[1].start == 100);
  CHECK(back.full.rate == Rational(3, 10));
  CHECK(back.partial.chunk.lc == 20);
}

TEST_CASE("strict parsing names the offending key and object") {
  auto msg_of = [](const std::string& text) {
    try {
      run_config_from_json_text(text);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(msg_of(R"({"trails": 5})") ==
        "config: unknown key 'trails' in top level");
  CHECK(msg_of(R"({"partial": {"lc": 20}})") ==
        "config: unknown key 'lc' in partial");
  CHECK(msg_of(R"({"full": {"rho": [1, 0]}})") ==
        "config: zero denominator for 'rho' in full");
  CHECK(msg_of(R"({"full": {"rho": "tenth"}})") ==
        "config: 'rho' in full must be [numerator, denominator]");
  CHECK(msg_of(
            R"({"mode": "run-partial-fb", "adversary": {"kind": "stage_greedy"}})")
            .find("stage_greedy") != std::string::npos);
  CHECK(msg_of(R"({"mode": "sweep", "sweep": [{"sweep": []}]})")
            .find("nest") != std::string::npos);
  CHECK(msg_of(R"({"mode": "sweep", "sweep": [{"trials": 1}]})")
            .find("run-full-fb or") != std::string::npos);
  // Absent keys keep calibrated defaults.
  const RunConfig overlay =
      run_config_from_json_text(R"({"partial": {"stage_cap": 5}})");
  CHECK(overlay.partial.stage_cap == 5);
  CHECK(overlay.partial.n == 16384);
  CHECK(overlay.partial.c_e == 8.0);
}

TEST_CASE("full-feedback reports are deterministic and well aggregated") {
  RunConfig cfg = default_run_config();
  cfg.mode = RunMode::full_fb;
  cfg.trials = 3;
  cfg.master_seed = 21;
  cfg.adversary.kind = "burst_front";
  const RunReport a = run_full_fb(cfg);
  const RunReport b = run_full_fb(cfg);
  CHECK(report_to_csv(a) == report_to_csv(b));
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(a.trials == 3);
  CHECK(a.msg_len == 1228);
  CHECK(a.budget == 409);

  // Aggregates are a pure fold of the rows.
  std::uint64_t fails = 0, lmax = 0;
  double lsum = 0;
  for (const auto& r : a.rows) {
    fails += r.success ? 0 : 1;
    lsum += double(r.list_size);
    lmax = std::max<std::uint64_t>(lmax, r.list_size);
  }
  CHECK(a.failures == fails);
  CHECK(a.max_list == lmax);
  CHECK(a.mean_list == doctest::Approx(lsum / 3.0));

  cfg.trials = 0;
  const RunReport empty = run_full_fb(cfg);
  CHECK(empty.rows.empty());
  CHECK(empty.failures == 0);
  CHECK(empty.failure_rate == 0.0);
}

TEST_CASE("csv escapes embedded commas and quotes in error fields") {
  RunReport r;
  r.mode = "run-full-fb";
  r.adversary = "null";
  TrialRow row;
  row.trial = 0;
  row.error = "bad, \"quoted\" thing";
  r.rows.push_back(row);
  r.recompute();
  const std::string csv = report_to_csv(r);
  CHECK(csv.find("\"bad, \"\"quoted\"\" thing\"") != std::string::npos);
}

TEST_CASE("one-cell sweep reproduces the direct run byte for byte") {
  RunConfig cfg = default_run_config();
  cfg.mode = RunMode::full_fb;
  cfg.trials = 2;
  cfg.master_seed = 33;
  cfg.adversary.kind = "stage_greedy";
  const RunReport direct = run_full_fb(cfg);

  RunConfig sweep_cfg = cfg;
  sweep_cfg.mode = RunMode::sweep;
  sweep_cfg.sweep_cells = {R"({"mode": "run-full-fb"})"};
  const auto cells = run_sweep(sweep_cfg);
  REQUIRE(cells.size() == 1);
  CHECK(report_to_csv(cells[0]) == report_to_csv(direct));
}

TEST_CASE("partial-feedback trial accounts feedback exactly") {
  RunConfig cfg = default_run_config();
  cfg.mode = RunMode::partial_fb;
  cfg.trials = 1;
  cfg.adversary.kind = "null";
  const RunReport rep = run_partial_fb(cfg);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].success);
  CHECK(rep.rows[0].list_size == 1);
  CHECK(rep.rows[0].feedback_symbols == 248576);
  CHECK(rep.feedback_per_trial == 248576);
  CHECK(rep.perm_storage_bits ==
        BigInt(16384) * BigInt(16384) * BigInt(16384) * 14);
}

TEST_CASE("plan tables reproduce the frozen session design") {
  const PlanParams pp;  // calibrated defaults
  const PlanTables t = make_plan(pp);
  CHECK(t.lambda == 4);
  CHECK(t.rate == Rational(131, 1000));
  CHECK(t.gamma == 0.4);
  CHECK(t.kappa_ok);
  CHECK(t.clean.terminated_at == 2);
  CHECK(t.clean.reason == TerminationReason::zyablov);
  CHECK(t.worst.terminated_at == 3);
  CHECK(t.worst.terminated_at <= t.lambda);
  CHECK(t.enumerated == 6);
  // Serialization is deterministic.
  CHECK(plan_to_json(t) == plan_to_json(make_plan(pp)));
  CHECK(plan_to_csv(t) == plan_to_csv(make_plan(pp)));
}

TEST_CASE("grid trajectory enumeration respects budgets and the leaf cap") {
  TrajectoryConfig cfg;
  cfg.q = 2;
  cfg.n = 4096;
  cfg.R = Rational(131, 1000);
  cfg.rho = Rational(1, 10);
  cfg.eps_z = 0.1;
  cfg.mode = StepMode::delta;
  cfg.delta = Rational(1, 4);
  cfg.stage_cap = 4;
  std::uint64_t leaves = 0;
  const Rational budget = cfg.rho * cfg.n;
  for_each_grid_trajectory(cfg, [&](const std::vector<Rational>& seq,
                                    const GapTrajectory& traj) {
    ++leaves;
    CHECK(traj.terminated_at == int(seq.size()) + 1);
    // Replaying the guesses never overspends the budget.
    Rational spent = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
      spent += seq[i] * traj.stages[i].ell;
    CHECK(spent <= budget);
  });
  CHECK(leaves == 6);
  CHECK_THROWS_AS(for_each_grid_trajectory(cfg, [](auto&, auto&) {}, 2),
                  infeasible_error);
}

TEST_CASE("component selftest passes end to end") {
  std::ostringstream log;
  CHECK(component_selftest(log));
  CHECK(log.str().find("FAIL") == std::string::npos);
}

}  // TEST_SUITE
