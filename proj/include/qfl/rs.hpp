/// @file rs.hpp
/// @brief Systematic Reed-Solomon codes over GF(p^m) with an
///        errors-and-erasures decoder guaranteeing recovery whenever
///        2*(errors) + (erasures) <= K' - K.
///
/// Code view: the classical polynomial-division construction, shortened to
/// length K' <= Q-1. The transmitted word is [data (K symbols) | parity
/// (K'-K symbols)]; internally data symbol i is the coefficient of
/// x^(K'-1-i), so the shortened prefix of the full-length cyclic code is
/// implicit leading zeros.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qfl/gf.hpp"

namespace qfl {

class RSCode {
 public:
  /// K data symbols, K' total symbols, over the given field.
  /// Requires 0 < K < K' <= Q-1 (rejected otherwise, never shrunk).
  RSCode(const GaloisField& field, std::uint32_t K, std::uint32_t Kprime);

  const GaloisField& field() const { return F_; }
  std::uint32_t K() const { return K_; }
  std::uint32_t Kprime() const { return Kp_; }
  std::uint32_t parity() const { return Kp_ - K_; }
  /// Minimum distance K' - K + 1 (MDS).
  std::uint32_t distance() const { return Kp_ - K_ + 1; }

  /// Systematic encoding: returns [data | parity], data.size() == K.
  std::vector<std::uint32_t> encode(const std::vector<std::uint32_t>& data) const;

  /// Errors-and-erasures decoding. erasures lists received-word positions
  /// (0-based, in the [data | parity] order) whose values are unreliable.
  /// Returns the corrected codeword, or nullopt when decoding fails or the
  /// corrected word is not a codeword. Success is guaranteed whenever the
  /// true codeword differs from `received` in e non-erased positions and
  /// the erasure list has s entries with 2e + s <= K' - K.
  std::optional<std::vector<std::uint32_t>> decode(
      const std::vector<std::uint32_t>& received,
      const std::vector<std::uint32_t>& erasures = {}) const;

  /// True iff the word is a codeword (all syndromes vanish).
  bool is_codeword(const std::vector<std::uint32_t>& word) const;

 private:
  const GaloisField& F_;
  std::uint32_t K_, Kp_;
  std::vector<std::uint32_t> gen_;  // generator polynomial, degree K'-K
};

}  // namespace qfl
