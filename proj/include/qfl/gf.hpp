/// @file gf.hpp
/// @brief Table-based Galois field arithmetic GF(p^m) for prime-power orders
///        up to ~2^20, with a process-wide field registry.
///
/// Element encoding: an element is the integer whose base-p digits are its
/// polynomial coefficients over GF(p) (digit i = coefficient of x^i). For
/// p = 2 this is the usual bit-vector encoding and addition is XOR. The same
/// encoding makes a word of m base-q digits (q = p^k) coincide with one
/// element of GF(q^m) = GF(p^(k*m)), so chunk packing is addition-compatible.
#pragma once

#include <cstdint>
#include <vector>

#include "qfl/common.hpp"

namespace qfl {

class GaloisField {
 public:
  /// Build GF(p^m). Uses a built-in primitive polynomial for p = 2 (m <= 16)
  /// and a deterministic irreducible/generator search otherwise.
  GaloisField(std::uint32_t p, std::uint32_t m);

  std::uint32_t p() const { return p_; }
  std::uint32_t m() const { return m_; }
  std::uint32_t order() const { return Q_; }          ///< p^m
  std::uint32_t generator() const { return exp_[1]; } ///< fixed primitive element

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (p_ == 2) return a ^ b;
    return add_slow(a, b);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    if (p_ == 2) return a ^ b;
    return sub_slow(a, b);
  }
  std::uint32_t neg(std::uint32_t a) const { return sub(0, a); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[std::uint32_t(log_[a]) + log_[b]];
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

  /// alpha^e for the fixed generator alpha (e may be any integer mod Q-1).
  std::uint32_t alpha_pow(std::int64_t e) const;
  /// Discrete log base alpha of a nonzero element.
  std::uint32_t log(std::uint32_t a) const;

  /// Process-wide cache: one immutable field object per (p, m).
  static const GaloisField& get(std::uint32_t p, std::uint32_t m);
  /// Factor Q into p^m; returns false when Q is not a prime power >= 2.
  static bool factor_prime_power(std::uint64_t Q, std::uint32_t& p, std::uint32_t& m);
  /// Field of the given prime-power order.
  static const GaloisField& of_order(std::uint64_t Q);

 private:
  std::uint32_t add_slow(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub_slow(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t p_, m_, Q_;
  std::vector<std::uint32_t> exp_;  // exp_[i] = alpha^i, i < 2*(Q-1)
  std::vector<std::uint32_t> log_;  // log_[a] for a != 0
};

}  // namespace qfl
