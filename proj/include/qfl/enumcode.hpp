/// @file enumcode.hpp
/// @brief Enumerative coding of bounded-weight q-ary error patterns:
///        an exact bijection between {words of length len, weight <= w_max}
///        and {0, ..., pattern_count-1}, plus base-q index serialization.
///
/// Ordering: lexicographic with symbol order 0 < 1 < ... < q-1, so the
/// all-zero pattern always has rank 0. Index words carry the rank in base q,
/// least-significant digit first.
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qfl/common.hpp"

namespace qfl {

/// Rank/unrank codec for one (q, len, w_max) triple. Internally caches the
/// prefix-count table A(L, w) = #{length-L words of weight <= w}; entries
/// with w >= L collapse to q^L and are not stored.
class PatternCodec {
 public:
  PatternCodec(std::uint32_t q, std::uint64_t len, std::uint64_t w_max);

  std::uint32_t q() const { return q_; }
  std::uint64_t len() const { return len_; }
  std::uint64_t w_max() const { return w_max_; }

  /// pattern_count(len, w_max, q), computed by the table recursion.
  const BigInt& count() const { return count_; }

  /// Number of q-ary symbols in a serialized index word.
  std::uint64_t index_symbols() const { return index_symbols_; }

  /// Rank of a pattern (weight must be <= w_max, length must match).
  BigInt rank(const QaryWord& s) const;

  /// Pattern with the given rank (must be < count()).
  QaryWord unrank(BigInt v) const;

  /// Serialize rank(s) as an index word of index_symbols() symbols.
  QaryWord encode(const QaryWord& s) const;

  /// Deserialize an index word and unrank it. Returns false (out untouched)
  /// when the carried value is >= count(), i.e. the word is not a valid
  /// index — the structural failure signal used to prune decoder branches.
  bool try_decode(const QaryWord& index_word, QaryWord& out) const;

 private:
  const BigInt& suffix_count(std::uint64_t rem_len, std::int64_t w) const;

  std::uint32_t q_;
  std::uint64_t len_, w_max_;
  std::vector<std::vector<BigInt>> table_;  // table_[L][w], w < min(L, w_max+1)
  std::vector<BigInt> qpow_;                // q^L for L <= len
  BigInt count_;
  std::uint64_t index_symbols_;
  static const BigInt kZero;
};

/// Process-wide LRU cache of codecs (layout computations reuse the same
/// (q, len, w_max) triples across decoder branches and trials).
std::shared_ptr<const PatternCodec> get_pattern_codec(std::uint32_t q,
                                                      std::uint64_t len,
                                                      std::uint64_t w_max);

/// Value of an index word (base q, least-significant symbol first).
BigInt index_word_value(const QaryWord& w);

/// Index word of given length carrying value v (v < q^len).
QaryWord value_to_index_word(BigInt v, std::uint32_t q, std::uint64_t len);

}  // namespace qfl
