#include "qfl/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qfl/qary_math.hpp"

namespace qfl {

double entropy_q_rational(const Rational& p, std::uint32_t q) {
  return entropy_q(static_cast<double>(p), q);
}

Rational grid_round_up(const Rational& p, const Rational& delta) {
  if (delta <= 0) throw std::domain_error("grid_round_up: delta must be > 0");
  if (p <= 0) return Rational(0);
  return Rational(ceil_rational(p / delta)) * delta;
}

PlannerState finish_state(PlannerState s) {
  // The gap is only defined for a budget fraction inside [0, 1]; a state
  // reached by an overspending noise sequence keeps NaN here (the exact
  // rational fields remain valid either way).
  if (s.rho < 0 || s.rho > 1)
    s.eps = std::numeric_limits<double>::quiet_NaN();
  else
    s.eps = 1.0 - entropy_q_rational(s.rho, s.q) - static_cast<double>(s.R);
  return s;
}

PlannerState step_clean(const PlannerState& s, const Rational& p) {
  if (s.R >= 1) throw infeasible_error("step_clean: rate must be < 1");
  PlannerState t;
  t.q = s.q;
  t.stage = s.stage + 1;
  const Rational one_minus_R = Rational(1) - s.R;
  // Entropy is evaluated in double and converted exactly to a rational so
  // all downstream arithmetic stays exact.
  const Rational h(entropy_q_rational(p, s.q));
  t.R = s.R * h / one_minus_R;
  t.rho = (s.rho - s.R * p) / one_minus_R;
  t.n = s.n - s.ell;
  t.ell = t.R * t.n;
  return finish_state(t);
}

PlannerState step_delta(const PlannerState& s, const Rational& p, const Rational& delta) {
  if (s.R >= 1) throw infeasible_error("step_delta: rate must be < 1");
  PlannerState t;
  t.q = s.q;
  t.stage = s.stage + 1;
  const Rational one_minus_R = Rational(1) - s.R;
  const Rational p_hat = grid_round_up(p, delta);
  const Rational h(entropy_q_rational(p_hat, s.q));
  t.R = s.R * h / one_minus_R;        // rate sized from the quantized estimate
  t.rho = (s.rho - s.R * p) / one_minus_R;  // budget drains by the true noise
  t.n = s.n - s.ell;
  t.ell = t.R * t.n;
  return finish_state(t);
}

PlannerState step_kappa(const PlannerState& s, const Rational& p, const Rational& delta,
                        const Rational& block_len, double eps_t) {
  if (block_len <= 0) throw std::domain_error("step_kappa: block length must be > 0");
  const Rational ell_hat = Rational(ceil_rational(s.ell / block_len)) * block_len;
  if (ell_hat >= s.n)
    throw infeasible_error("step_kappa: padded stage exceeds remaining channel");
  const Rational R_hat = ell_hat / s.n;
  const Rational p_hat = grid_round_up(p, delta);
  const Rational h(entropy_q_rational(p_hat, s.q));

  PlannerState t;
  t.q = s.q;
  t.stage = s.stage + 1;
  t.n = s.n - ell_hat;
  t.ell = ell_hat * (h + Rational(eps_t));
  t.R = t.ell / t.n;
  t.rho = (s.rho - R_hat * p) / (Rational(1) - R_hat);
  return finish_state(t);
}

double default_descent_c(std::uint32_t q) { return 64.0 * std::log(double(q)); }

int lambda_tilde(double eps, double gamma, std::uint32_t q, double descent_c) {
  if (eps <= 0.0 || eps > 1.0) throw std::domain_error("lambda_tilde: eps outside (0,1]");
  if (descent_c <= 0.0) descent_c = default_descent_c(q);
  const double r = gamma * gamma * gamma / descent_c;
  if (r <= 0.0 || r >= 1.0) throw std::domain_error("lambda_tilde: descent ratio outside (0,1)");
  return static_cast<int>(std::ceil(std::log(eps) / std::log(1.0 - r) + 1.0));
}

double gamma_floor(double eps, std::uint32_t q) {
  return std::sqrt(2.0 * std::log(double(q)) * eps);
}

double delta_choice(double eps, int lambda, std::uint32_t q) {
  if (lambda <= 1) return 1.0 - 1.0 / double(q);
  double target = eps / (2.0 * double(lambda - 1));
  if (target > 1.0) target = 1.0;
  double delta = inv_entropy_q(target, q);
  // Guard against bisection slop pushing H_q(delta) a hair above target.
  for (int i = 0; i < 64 && double(lambda - 1) * entropy_q(delta, q) > eps / 2.0; ++i)
    delta *= 1.0 - 1e-9;
  return delta;
}

KappaPlanRecord kappa_plan(double eps, double gamma, std::uint32_t q, double descent_c) {
  if (descent_c <= 0.0) descent_c = default_descent_c(q);
  KappaPlanRecord rec;
  rec.eps = eps;
  rec.gamma = gamma;
  rec.q = q;
  rec.lambda = lambda_tilde(eps, gamma, q, descent_c);
  rec.eps_t = eps / 32.0;
  rec.u_min = eps / 16.0;
  rec.b = rec.u_min + rec.eps_t;  // 3*eps/32
  const double r_gamma = gamma * gamma * gamma / descent_c;
  rec.A = 1.0 / (1.0 - r_gamma);
  const double u1 = eps - rec.eps_t;

  const int L = rec.lambda;
  if (L < 2) throw infeasible_error("kappa_plan: needs at least two stages");
  // S = sum_{j=1}^{L-1} A^(L-1-j)
  double S = 0.0, apow = 1.0;
  for (int j = L - 1; j >= 1; --j) {
    S += apow;
    apow *= rec.A;
  }
  const double head = std::pow(rec.A, double(L - 1)) * u1 - rec.u_min;
  if (head <= 0.0)
    throw infeasible_error("kappa_plan: amplified gap cannot clear the floor");
  rec.M = std::min(1.0 / 16.0, head / (2.0 * rec.b * S));
  rec.kappa = rec.M * std::pow(rec.b, double(L));
  rec.c_min = 0.5 * std::pow(rec.b, double(L - 1));

  rec.u.assign(std::size_t(L), 0.0);
  rec.c.assign(std::size_t(L), 0.0);
  rec.beta.assign(std::size_t(L > 0 ? L - 1 : 0), 0.0);
  rec.u[0] = u1;
  rec.c[0] = 1.0;
  for (int i = 0; i + 1 < L; ++i) {
    const double ci = rec.c[std::size_t(i)];
    // Very deep plans underflow b^L to zero; the padding cost is then exactly
    // negligible, so treat kappa/c as 0 rather than 0/0.
    double pad_cost = 0.0, beta = 0.0;
    if (rec.kappa > 0.0) {
      if (ci <= 0.0) throw infeasible_error("kappa_plan: stage size trajectory collapsed");
      pad_cost = rec.kappa / ci;
      beta = pad_cost / rec.u[std::size_t(i)];
    }
    rec.beta[std::size_t(i)] = beta;
    rec.u[std::size_t(i) + 1] = rec.A * (rec.u[std::size_t(i)] - pad_cost);
    rec.c[std::size_t(i) + 1] = ci * rec.b - rec.kappa;
  }
  return rec;
}

GapTrajectory simulate_trajectory(const TrajectoryConfig& cfg,
                                  const std::vector<Rational>& p_seq) {
  GapTrajectory traj;
  PlannerState s;
  s.q = cfg.q;
  s.n = cfg.n;
  s.R = cfg.R;
  s.rho = cfg.rho;
  s.ell = cfg.R * cfg.n;
  s.stage = 1;
  s = finish_state(s);
  const Rational block_len = cfg.n * cfg.kappa;

  for (int i = 1; i <= cfg.stage_cap; ++i) {
    traj.stages.push_back(s);
    traj.terminated_at = i;

    const double rz = zyablov_rate_or_zero(std::max(0.0, static_cast<double>(s.rho)),
                                           cfg.eps_z, cfg.q);
    if (static_cast<double>(s.R) <= rz) {
      traj.reason = TerminationReason::zyablov;
      return traj;
    }
    if (s.rho <= 0) {
      traj.reason = TerminationReason::budget_exhausted;
      return traj;
    }
    if (i == cfg.stage_cap) break;

    const Rational p = (std::size_t(i - 1) < p_seq.size()) ? p_seq[std::size_t(i - 1)]
                                                           : Rational(0);
    switch (cfg.mode) {
      case StepMode::clean:
        s = step_clean(s, p);
        break;
      case StepMode::delta:
        s = step_delta(s, p, cfg.delta);
        break;
      case StepMode::kappa:
        s = step_kappa(s, p, cfg.delta, block_len, cfg.eps_t);
        break;
    }
  }
  traj.reason = TerminationReason::stage_cap;
  return traj;
}

}  // namespace qfl
