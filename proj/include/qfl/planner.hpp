/// @file planner.hpp
/// @brief Stage recursion over exact rationals: clean/quantized/padded step
///        maps, termination measures (stage-count bound, admissible-gamma
///        floor, quantization grid, padding budget plan), and trajectory
///        simulation against a prescribed per-stage noise sequence.
///
/// State semantics: n_i is the channel budget still unspent when stage i
/// starts, ell_i the stage-i transmission length, R_i = ell_i / n_i the
/// stage rate, rho_i the adversary's remaining corruption budget as a
/// fraction of n_i, and eps_i = 1 - H_q(rho_i) - R_i the capacity gap.
/// Lengths here are real-valued (exact rationals); integer rounding lives
/// in the protocol layer.
#pragma once

#include <cstdint>
#include <vector>

#include "qfl/common.hpp"

namespace qfl {

struct PlannerState {
  std::uint32_t q = 2;
  Rational n = 0;      ///< remaining channel uses at stage start
  Rational ell = 0;    ///< stage transmission length
  Rational R = 0;      ///< stage rate ell / n
  Rational rho = 0;    ///< remaining adversary budget / n
  double eps = 0.0;    ///< capacity gap 1 - H_q(rho) - R
  int stage = 1;
};

/// Recompute eps from (rho, R) and return the completed state.
PlannerState finish_state(PlannerState s);

/// One stage of the exact recursion: the next stage retransmits the error
/// information of the current one at rate R' = R * H_q(p) / (1 - R), while
/// the adversary's unspent budget concentrates on the remaining channel:
/// rho' = (rho - R*p) / (1 - R), n' = n - ell. p is the fraction of the
/// current stage the adversary corrupted.
PlannerState step_clean(const PlannerState& s, const Rational& p);

/// Quantized step: the rate update uses the grid-rounded estimate
/// p_hat = ceil(p/delta)*delta, the budget update uses the true p.
PlannerState step_delta(const PlannerState& s, const Rational& p, const Rational& delta);

/// Padded step for block-synchronized transmission: the stage length is
/// first padded up to a whole number of blocks (ell_hat, with padded rate
/// R_hat = ell_hat / n; exact rational ceiling), then compressed at factor
/// H_q(p_hat) + eps_t. block_len is the fixed block length n_1 * kappa,
/// expressed relative to the same units as the state's lengths; p is the
/// fraction of the padded stage the adversary corrupted. Throws
/// infeasible_error when the padded stage no longer fits (ell_hat >= n).
PlannerState step_kappa(const PlannerState& s, const Rational& p, const Rational& delta,
                        const Rational& block_len, double eps_t);

/// Number of stages after which the recursion is guaranteed to reach a
/// terminable rate: ceil( ln(eps) / ln(1 - gamma^3/descent_c) + 1 ).
/// descent_c defaults to 64*ln(q); toy configurations may override it.
int lambda_tilde(double eps, double gamma, std::uint32_t q, double descent_c = 0.0);

/// Default descent denominator 64*ln(q).
double default_descent_c(std::uint32_t q);

/// Smallest certified gap constant: for gamma = sqrt(2*(ln q)*eps) the
/// capacity gap at noise fraction 1-1/q-gamma is at least eps
/// (1 - H_q(1-1/q-gamma) >= eps, by the Pinsker-style bound).
double gamma_floor(double eps, std::uint32_t q);

/// Quantization grid delta with (lambda_tilde - 1) * H_q(delta) <= eps/2:
/// inv_entropy_q(eps / (2*(lambda_tilde-1))), nudged down if floating-point
/// slop breaks the inequality. lambda_tilde == 1 returns 1 - 1/q.
double delta_choice(double eps, int lambda_tilde, std::uint32_t q);

/// Budget plan for the padded (kappa) recursion.
struct KappaPlanRecord {
  double eps = 0, gamma = 0;
  std::uint32_t q = 2;
  int lambda = 0;          ///< stage-count bound the plan covers
  double u_min = 0;        ///< gap floor the plan preserves
  double eps_t = 0;        ///< per-stage compression slack
  double b = 0;            ///< per-stage shrink factor u_min + eps_t
  double A = 0;            ///< gap amplification 1/(1-R_gamma)
  double M = 0;            ///< padding budget scale
  double kappa = 0;        ///< block-length fraction M * b^lambda
  double c_min = 0;        ///< certified floor b^(lambda-1)/2 on stage shrink
  std::vector<double> u;   ///< gap trajectory u_1..u_lambda
  std::vector<double> c;   ///< stage-size trajectory c_1..c_lambda
  std::vector<double> beta;///< padding ratios kappa/(c_i*u_i), i < lambda
};

/// Compute the padding plan: eps_t = eps/32, u_min = eps/16, b = 3*eps/32,
/// u_1 = eps - eps_t, A = 1/(1 - gamma^3/descent_c),
/// M = min(1/16, (A^(lambda-1)*u_1 - u_min) / (2*b*sum_{j<lambda} A^(lambda-1-j))),
/// kappa = M*b^lambda, with trajectories u_{i+1} = A*(u_i - kappa/c_i),
/// c_{i+1} = c_i*b - kappa. Throws infeasible_error when the amplified gap
/// cannot clear u_min.
KappaPlanRecord kappa_plan(double eps, double gamma, std::uint32_t q,
                           double descent_c = 0.0);

enum class StepMode { clean, delta, kappa };
enum class TerminationReason { zyablov, stage_cap, budget_exhausted };

struct GapTrajectory {
  std::vector<PlannerState> stages;  ///< states at the start of each stage
  int terminated_at = 0;             ///< stage index where the run stopped
  TerminationReason reason = TerminationReason::stage_cap;
};

struct TrajectoryConfig {
  std::uint32_t q = 2;
  Rational n = 1;
  Rational R = 0;        ///< initial rate
  Rational rho = 0;      ///< initial adversary budget fraction
  double eps_z = 0;      ///< termination-test margin (gamma/4)
  StepMode mode = StepMode::clean;
  Rational delta = 0;    ///< grid for delta/kappa modes
  Rational kappa = 0;    ///< padding fraction for kappa mode
  double eps_t = 0;      ///< compression slack for kappa mode
  int stage_cap = 64;
};

/// Run the recursion against a prescribed noise sequence (missing entries
/// are treated as 0). A stage terminates the run when its rate drops to the
/// concatenated-code rate achievable with the remaining adversary budget:
/// R_i <= zyablov_rate(rho_i, eps_z, q). Budget exhaustion (rho_i <= 0 with
/// the test not yet passed) and the stage cap are reported as their own
/// termination reasons.
GapTrajectory simulate_trajectory(const TrajectoryConfig& cfg,
                                  const std::vector<Rational>& p_seq);

/// Convenience: entropy of a rational argument (evaluated in double).
double entropy_q_rational(const Rational& p, std::uint32_t q);

/// Grid rounding p_hat = ceil(p/delta)*delta as an exact rational.
Rational grid_round_up(const Rational& p, const Rational& delta);

}  // namespace qfl
