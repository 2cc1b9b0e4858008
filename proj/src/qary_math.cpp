#include "qfl/qary_math.hpp"

#include <cmath>
#include <stdexcept>

namespace qfl {

double log_q(double x, std::uint32_t q) { return std::log(x) / std::log(double(q)); }

double entropy_q(double p, std::uint32_t q) {
  if (q < 2) throw std::domain_error("entropy_q: q must be >= 2");
  if (p < 0.0 || p > 1.0) throw std::domain_error("entropy_q: p outside [0,1]");
  const double lnq = std::log(double(q));
  double h = 0.0;
  if (p > 0.0) h += p * std::log(double(q - 1)) / lnq - p * std::log(p) / lnq;
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p) / lnq;
  return h;
}

double inv_entropy_q(double y, std::uint32_t q) {
  if (y < 0.0 || y > 1.0) throw std::domain_error("inv_entropy_q: y outside [0,1]");
  double lo = 0.0, hi = 1.0 - 1.0 / double(q);
  for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (entropy_q(mid, q) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double capacity_gap_lower_bound(double gamma, std::uint32_t q) {
  return gamma * gamma / (2.0 * std::log(double(q)));
}

namespace {

// Objective r * (1 - rho / (inv_entropy_q(1-r) - eps_z)); callers guarantee
// r is inside the feasible interval so the denominator is > rho >= 0.
double zyablov_objective(double r, double rho, double eps_z, std::uint32_t q) {
  const double d = inv_entropy_q(1.0 - r, q) - eps_z;
  if (d <= 0.0) return -1.0;
  return r * (1.0 - rho / d);
}

}  // namespace

double zyablov_rate(double rho, double eps_z, std::uint32_t q) {
  if (rho < 0.0) throw std::domain_error("zyablov_rate: rho < 0");
  const double r_hi = 1.0 - entropy_q(std::min(rho + eps_z, 1.0 - 1.0 / double(q)), q);
  if (rho + eps_z >= 1.0 - 1.0 / double(q) || r_hi <= 0.0)
    throw infeasible_error("zyablov_rate: empty feasible rate interval");

  // Coarse grid over (0, r_hi), then golden-section refinement around the
  // best grid point.
  const int kGrid = 1000;
  double best_r = 0.0, best_v = 0.0;
  for (int i = 1; i < kGrid; ++i) {
    const double r = r_hi * double(i) / double(kGrid);
    const double v = zyablov_objective(r, rho, eps_z, q);
    if (v > best_v) {
      best_v = v;
      best_r = r;
    }
  }
  if (best_v <= 0.0) return 0.0;

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(best_r - r_hi / kGrid, 1e-12);
  double b = std::min(best_r + r_hi / kGrid, r_hi - 1e-12);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = zyablov_objective(x1, rho, eps_z, q);
  double f2 = zyablov_objective(x2, rho, eps_z, q);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = zyablov_objective(x2, rho, eps_z, q);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = zyablov_objective(x1, rho, eps_z, q);
    }
  }
  return std::max(best_v, std::max(f1, f2));
}

double zyablov_rate_or_zero(double rho, double eps_z, std::uint32_t q) {
  try {
    return zyablov_rate(std::max(rho, 0.0), eps_z, q);
  } catch (const infeasible_error&) {
    return 0.0;
  }
}

BigInt pattern_count(std::uint64_t len, std::uint64_t w_max, std::uint32_t q) {
  if (w_max > len) w_max = len;
  BigInt total = 0;
  BigInt binom = 1;    // C(len, w)
  BigInt qpow = 1;     // (q-1)^w
  for (std::uint64_t w = 0; w <= w_max; ++w) {
    total += binom * qpow;
    // advance to w+1
    binom = binom * BigInt(len - w) / BigInt(w + 1);
    qpow *= BigInt(q - 1);
  }
  return total;
}

std::uint64_t pattern_index_symbols(std::uint64_t len, std::uint64_t w_max,
                                    std::uint32_t q) {
  // ceil(log_q count) = number of base-q digits of (count - 1) for count >= 2;
  // a single pattern (count == 1) needs 0 symbols.
  BigInt count = pattern_count(len, w_max, q);
  if (count <= 1) return 0;
  BigInt c = count - 1;
  std::uint64_t digits = 0;
  while (c > 0) {
    c /= q;
    ++digits;
  }
  return digits;
}

double eps_s_slack(std::uint64_t len, std::uint32_t q) {
  return double(kEpsSConstant) * log_q(double(len), q) / double(len);
}

}  // namespace qfl
