/// @file qary_math.hpp
/// @brief q-ary entropy, its inverse, capacity-gap and Zyablov-style bounds,
///        and exact counts of bounded-weight error patterns.
///
/// Conventions: all logarithms are base q, rates are in q-ary symbols per
/// channel use, and 0*log(0) := 0. Noise fractions live in [0, 1]; the
/// entropy function increases on [0, 1-1/q] and decreases beyond.
#pragma once

#include <cstdint>

#include "qfl/common.hpp"

namespace qfl {

/// log base q of x (x > 0).
double log_q(double x, std::uint32_t q);

/// q-ary entropy H_q(p) = p*log_q(q-1) - p*log_q(p) - (1-p)*log_q(1-p).
/// Domain [0, 1]; H_q(0) = 0, H_q(1-1/q) = 1, H_q(1) = log_q(q-1).
double entropy_q(double p, std::uint32_t q);

/// Inverse of entropy_q restricted to [0, 1-1/q]: the unique p in that
/// interval with H_q(p) = y, for y in [0, 1]. Bisection, 200 iterations,
/// absolute tolerance 1e-12.
double inv_entropy_q(double y, std::uint32_t q);

/// Pinsker-style lower bound on the capacity gap of the q-ary channel with
/// noise fraction 1-1/q-gamma:  1 - H_q(1-1/q-gamma) >= gamma^2 / (2 ln q).
double capacity_gap_lower_bound(double gamma, std::uint32_t q);

/// Best rate of a concatenated (outer MDS / inner random) code that corrects
/// a rho fraction of adversarial errors with inner-code margin eps_z:
///   max over r in (0, 1 - H_q(rho + eps_z)) of
///     r * (1 - rho / (inv_entropy_q(1 - r) - eps_z)).
/// Maximized on a 1000-point grid followed by golden-section refinement.
/// Throws infeasible_error when the feasible r-interval is empty
/// (rho + eps_z >= 1 - 1/q).
double zyablov_rate(double rho, double eps_z, std::uint32_t q);

/// As zyablov_rate, but returns 0 instead of throwing when infeasible and
/// accepts rho <= 0 (treated as a vanishing noise fraction).
double zyablov_rate_or_zero(double rho, double eps_z, std::uint32_t q);

/// Exact number of q-ary words of length len with at most w_max nonzero
/// symbols: sum over w <= w_max of C(len, w) * (q-1)^w.
BigInt pattern_count(std::uint64_t len, std::uint64_t w_max, std::uint32_t q);

/// Number of q-ary symbols needed to index a bounded-weight pattern:
/// ceil(log_q pattern_count(len, w_max, q)).
std::uint64_t pattern_index_symbols(std::uint64_t len, std::uint64_t w_max,
                                    std::uint32_t q);

/// Slack term eps_s(len) = C_S * log_q(len) / len added to the entropy when
/// sizing the stage that indexes a bounded-weight pattern. C_S is the
/// smallest integer for which
///   pattern_index_symbols(l, ceil(l*p), q) <= ceil(l*(H_q(p)+eps_s(l)))
/// holds for every l >= 8 and every grid noise fraction p <= 1-1/q
/// (verified in the unit tests).
inline constexpr int kEpsSConstant = 2;
double eps_s_slack(std::uint64_t len, std::uint32_t q);

}  // namespace qfl
