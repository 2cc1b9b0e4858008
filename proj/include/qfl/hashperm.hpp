/// @file hashperm.hpp
/// @brief Seeded q-ary hashing with prefix-consistent digests, the bad-seed
///        census for short chunks, and a lazily realized bank of seeded
///        permutations with quasi-uniformity measurement.
#pragma once

#include <cstdint>
#include <vector>

#include "qfl/common.hpp"

namespace qfl {

// ---------------------------------------------------------------------------
// Hash family
// ---------------------------------------------------------------------------

/// A keyed hash family over q-ary words. A digest position j depends only on
/// (master_seed, chunk_index, seed word, content, j), so truncating a digest
/// to a shorter output length yields exactly the shorter digest
/// (prefix-consistent), and digests for different chunk indices or seed
/// words are independent streams.
struct HashFamily {
  std::uint32_t q = 2;
  std::uint64_t master_seed = 0;

  /// Digest of `content` under per-chunk seed word `seed_r`, of length out_len.
  QaryWord eval(const QaryWord& content, std::uint64_t chunk_index,
                const QaryWord& seed_r, std::uint64_t out_len) const;

  /// Same with the seed word already packed to an integer (base q).
  QaryWord eval_packed(const QaryWord& content, std::uint64_t chunk_index,
                       std::uint64_t seed_value, std::uint64_t out_len) const;
};

/// Seed-word length for chunk length lc: floor(sqrt(lc)) symbols.
std::uint64_t seed_word_symbols(std::uint64_t lc);

/// Result of the exact bad-seed census for one (content, error) pair.
struct BadSeedStat {
  std::uint64_t num_bad = 0;    ///< seeds with a colliding impostor in the ball
  std::uint64_t num_seeds = 0;  ///< q^(seed word length)
  double threshold = 0.0;       ///< q^(sqrt(lc)/2), the census budget
};

/// Exact census: a seed r is bad for (x, s) when some word x' != x within
/// Hamming distance `radius` of y = x + s has the same digest as x under r.
/// Enumerates the whole ball and the whole seed space. digest_len symbols of
/// output are compared (full-range digest: digest_len = x.size()).
BadSeedStat count_bad_seeds(const HashFamily& fam, const QaryWord& x,
                            const QaryWord& s, std::uint64_t radius,
                            std::uint64_t chunk_index, std::uint64_t digest_len);

// ---------------------------------------------------------------------------
// Permutation bank
// ---------------------------------------------------------------------------

/// A conceptual bank of P = n^C_p seeded permutations of [n], realized
/// lazily: member j over a given domain size is the Fisher-Yates shuffle
/// seeded by (master_seed, j, domain). An LRU cache keeps recent members.
class PermBank {
 public:
  PermBank(std::uint64_t n, std::uint32_t c_p, std::uint64_t master_seed);

  std::uint64_t n() const { return n_; }
  /// Bank size P = n^C_p (exact).
  const BigInt& count() const { return count_; }
  /// Storage a fully materialized bank would need, in bits: P * n * ceil(log2 n).
  BigInt storage_bits() const;

  /// Member j (reduced mod P) over domain [domain]; forward table pi with
  /// entries pi[0..domain-1].
  std::vector<std::uint32_t> get(const BigInt& j, std::uint64_t domain) const;

  /// Gather application: out[i] = w[pi[i]].
  QaryWord apply(const QaryWord& w, const BigInt& j) const;
  /// Inverse: scatter back, apply(invert(w)) == w.
  QaryWord invert(const QaryWord& w, const BigInt& j) const;

 private:
  std::uint64_t n_;
  std::uint32_t c_p_;
  std::uint64_t master_seed_;
  BigInt count_;
};

/// Fraction of complete length-lc chunks of s whose symbol type differs from
/// the global symbol type of s by at most eps_T in every coordinate
/// (infinity norm over the q symbol frequencies).
double quasi_uniform_fraction(const QaryWord& s, std::uint64_t lc, double eps_T);

/// Concentration threshold eps_T(lc) = sqrt(6 * ln(lc) / lc) used by the
/// default quasi-uniformity checks (Hoeffding-style exponent, natural log).
double quasi_uniform_eps(std::uint64_t lc);

}  // namespace qfl
