// =============================================================================
// Experiment harness: run configuration (JSON), Monte Carlo drivers for both
// feedback schemes, planner table generation with exhaustive grid worst-case
// search, statistics aggregation (Wilson intervals), and deterministic CSV /
// JSON report emission. Every random stream is derived from the config's
// master seed by counter, so identical configs produce byte-identical
// reports; wall-clock timings are kept out of the canonical artifacts.
// =============================================================================
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qfl/channel.hpp"
#include "qfl/common.hpp"
#include "qfl/planner.hpp"
#include "qfl/weldon_full.hpp"
#include "qfl/weldon_partial.hpp"

namespace qfl {

// -----------------------------------------------------------------------------
// Adversary specification
// -----------------------------------------------------------------------------

/// Declarative adversary choice for a run. Knobs irrelevant to the chosen
/// kind are ignored.
struct AdversarySpec {
  /// null | uniform_iid | burst_front | grid_extremal | stage_greedy
  std::string kind = "null";
  double p = 0.0;             ///< uniform_iid per-symbol corruption probability
  std::uint64_t count = 0;    ///< burst_front corruptions; 0 = whole budget
  double fraction = 0.75;     ///< stage_greedy front-load share of the budget
  /// grid_extremal spans; empty = mirror the scheme layout at one grid step
  /// per stage and drop the leftover into the termination region (full
  /// feedback only).
  std::vector<CorruptionSpan> spans;
};

/// Short human-readable tag, e.g. "uniform_iid(p=0.01)".
std::string adversary_label(const AdversarySpec& spec);

// -----------------------------------------------------------------------------
// Run configuration
// -----------------------------------------------------------------------------

enum class RunMode { plan, full_fb, partial_fb, selftest, sweep };

/// Wire names: plan, run-full-fb, run-partial-fb, component-selftest, sweep.
std::string run_mode_name(RunMode m);
RunMode parse_run_mode(const std::string& name);  ///< throws invalid_argument

/// Inputs of the `plan` mode: the asymptotic constants plus a concrete
/// session shape for the trajectory tables.
struct PlanParams {
  std::uint32_t q = 2;
  double eps = 0.4;          ///< capacity gap the session budgets for
  double gamma = 0.4;        ///< noise margin; 0 = use gamma_floor(eps, q)
  double descent_c = 0.243;  ///< descent denominator; 0 = default 64 ln q
  Rational n = 4096;         ///< session length for the trajectory tables
  Rational rho{1, 10};       ///< adversary budget fraction
  Rational delta{1, 4};      ///< estimate grid for the trajectory tables
  int stage_cap = 4;         ///< enumeration depth for the worst-case search
  bool enumerate_worst = true;  ///< skip the exhaustive search when false
};

/// Everything the `plan` mode reports.
struct PlanTables {
  PlanParams in;
  double gamma = 0;          ///< resolved margin (floor applied when asked)
  int lambda = 0;            ///< stage-count bound
  double delta_star = 0;     ///< analytic grid choice delta_choice(...)
  Rational rate;             ///< milli-rate floor(1000*(1 - H_q(rho) - eps))/1000
  bool kappa_ok = false;     ///< padding plan feasible
  KappaPlanRecord kappa;     ///< valid when kappa_ok
  std::string kappa_error;   ///< infeasibility message otherwise
  GapTrajectory clean;       ///< zero-noise reference trajectory
  std::vector<Rational> worst_p;  ///< grid sequence maximizing the stage count
  GapTrajectory worst;            ///< its trajectory
  std::uint64_t enumerated = 0;   ///< trajectories examined by the search
};

PlanTables make_plan(const PlanParams& pp);

/// Exhaustive walk over delta-grid noise sequences: every sequence that
/// spends within the budget (exact rationals) and extends until the
/// trajectory's own stopping rule fires or the stage cap is hit. `visit`
/// receives the sequence and its simulate_trajectory result. Throws
/// infeasible_error past max_leaves (runaway grids).
void for_each_grid_trajectory(
    const TrajectoryConfig& cfg,
    const std::function<void(const std::vector<Rational>&, const GapTrajectory&)>&
        visit,
    std::uint64_t max_leaves = 1u << 20);

/// One session configuration covering every mode; the modes read the parts
/// they need. Defaults are the calibrated binary desk-scale sessions.
struct RunConfig {
  RunMode mode = RunMode::selftest;
  std::uint64_t trials = 10;
  std::uint64_t master_seed = 1;
  std::string out_dir = "out";
  AdversarySpec adversary;
  FullFbParams full;
  PartialFbParams partial;
  PlanParams plan;
  /// Sweep cells: each entry is a JSON object (as text) merged over this
  /// config; the merged cell must set a run-* mode.
  std::vector<std::string> sweep_cells;
};

/// The calibrated defaults shared by tests, configs and the CLI.
RunConfig default_run_config();

/// Strict JSON loading: unknown keys, malformed values and parameter-web
/// violations are rejected with a message naming the offending key. Scheme
/// parameters are validated by constructing the scheme the mode needs.
RunConfig run_config_from_json_text(const std::string& text);
RunConfig load_run_config_file(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);

// -----------------------------------------------------------------------------
// Reports
// -----------------------------------------------------------------------------

/// Wilson score interval for a binomial failure count.
struct WilsonInterval {
  double lo = 0, hi = 0;
};
WilsonInterval wilson_interval(std::uint64_t failures, std::uint64_t trials,
                               double z = 1.96);

/// One Monte Carlo trial.
struct TrialRow {
  std::uint64_t trial = 0;
  bool success = false;            ///< message recovered in the decode list
  std::uint64_t list_size = 0;
  std::uint32_t stages = 0;        ///< stages before termination
  std::uint64_t budget_spent = 0;  ///< corruptions the channel delivered
  std::uint64_t feedback_symbols = 0;
  std::string error;               ///< diagnostics when the trial aborted
};

/// Per-run outcome table plus aggregates (recomputable from the rows).
struct RunReport {
  std::string mode;
  std::string adversary;
  std::uint64_t master_seed = 0;
  std::uint32_t q = 2;
  std::uint64_t n = 0, msg_len = 0, budget = 0;
  std::uint64_t trials = 0;
  std::vector<TrialRow> rows;

  std::uint64_t failures = 0;
  double failure_rate = 0;
  WilsonInterval wilson;
  double mean_list = 0;
  std::uint64_t max_list = 0;
  double mean_stages = 0;
  std::uint32_t max_stages = 0;
  /// Feedback cost fixed by the schedule (minimal-feedback runs; 0 when it
  /// varies per trial, see the rows).
  std::uint64_t feedback_per_trial = 0;
  /// Storage a materialized scrambler bank would need (minimal feedback).
  BigInt perm_storage_bits = 0;
  /// Measured wall clock; deliberately excluded from canonical artifacts.
  double runtime_seconds = 0;

  void recompute();  ///< refill aggregates from rows
};

RunReport run_full_fb(const RunConfig& cfg);
RunReport run_partial_fb(const RunConfig& cfg);
std::vector<RunReport> run_sweep(const RunConfig& cfg);

/// Canonical artifacts: deterministic given the report (no timestamps, no
/// wall clock, fixed float formatting).
std::string report_to_csv(const RunReport& r);
std::string report_to_json(const RunReport& r);
std::string sweep_summary_csv(const std::vector<RunReport>& cells);
std::string plan_to_json(const PlanTables& t);
std::string plan_to_csv(const PlanTables& t);

// -----------------------------------------------------------------------------
// Component selftest
// -----------------------------------------------------------------------------

/// Cheap end-to-end exercise of every component, one log line each.
/// Returns true iff every check passed.
bool component_selftest(std::ostream& log);

}  // namespace qfl
