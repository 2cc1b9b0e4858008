// =============================================================================
// Enumerative coding of bounded-weight patterns: the rank must be a lex-order
// bijection onto [0, pattern_count), serialization must round-trip, and
// out-of-range index values must be rejected (they are the decoder's
// structural-failure signal).
// =============================================================================
#include <vector>

#include "doctest.h"
#include "qfl/enumcode.hpp"
#include "qfl/qary_math.hpp"

using namespace qfl;

namespace {

// Advance w to the lexicographically next word of weight <= w_max; returns
// false after the last one. Symbol order 0 < 1 < ... < q-1, leftmost symbol
// most significant.
bool next_bounded_word(QaryWord& w, std::uint64_t w_max) {
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w.sym[i] + 1u < w.q) {
      ++w.sym[i];
      if (w.weight() <= w_max) return true;
      // weight exceeded: this position just went 0 -> 1 with full budget
      // used elsewhere; reset and carry on.
      w.sym[i] = 0;
      continue;
    }
    w.sym[i] = 0;
  }
  return false;
}

}  // namespace

TEST_SUITE("enumcode") {

TEST_CASE("lex enumeration ranks sequentially and round-trips") {
  for (std::uint32_t q : {2u, 3u}) {
    for (std::uint64_t len = 1; len <= 9; ++len) {
      for (std::uint64_t w_max : {std::uint64_t(0), std::uint64_t(1), len / 2, len}) {
        auto codec = get_pattern_codec(q, len, w_max);
        CHECK(codec->count() == pattern_count(len, w_max, q));

        QaryWord w(q, len);
        BigInt expected_rank = 0;
        do {
          const BigInt r = codec->rank(w);
          REQUIRE(r == expected_rank);
          const QaryWord back = codec->unrank(r);
          REQUIRE(back == w);

          const QaryWord idx = codec->encode(w);
          REQUIRE(idx.size() == codec->index_symbols());
          QaryWord dec;
          REQUIRE(codec->try_decode(idx, dec));
          REQUIRE(dec == w);
          ++expected_rank;
        } while (next_bounded_word(w, w_max));
        CHECK(expected_rank == codec->count());
      }
    }
  }
}

TEST_CASE("out-of-range index values are rejected") {
  auto codec = get_pattern_codec(2, 6, 2);  // count = 1+6+15 = 22, 5 bits
  CHECK(codec->count() == BigInt(22));
  CHECK(codec->index_symbols() == 5);
  for (std::uint64_t v = 0; v < 32; ++v) {
    QaryWord idx = value_to_index_word(BigInt(v), 2, 5);
    QaryWord out;
    const bool ok = codec->try_decode(idx, out);
    CHECK(ok == (v < 22));
    if (ok) CHECK(codec->rank(out) == BigInt(v));
  }
}

TEST_CASE("index words use base-q little-endian digits") {
  const QaryWord w = value_to_index_word(BigInt(11), 3, 4);  // 11 = 2 + 0*3 + 1*9
  CHECK(w.sym == std::vector<Symbol>{2, 0, 1, 0});
  CHECK(index_word_value(w) == BigInt(11));
  CHECK_THROWS(value_to_index_word(BigInt(81), 3, 4));
}

TEST_CASE("large-length codec agrees with the closed-form count") {
  auto codec = get_pattern_codec(2, 300, 40);
  CHECK(codec->count() == pattern_count(300, 40, 2));
  // Round-trip a few specific patterns.
  QaryWord s(2, 300);
  for (std::size_t i : {0ull, 7ull, 64ull, 299ull}) s.sym[i] = 1;
  const BigInt r = codec->rank(s);
  CHECK(codec->unrank(r) == s);
  // The all-zero pattern is always rank 0.
  CHECK(codec->rank(QaryWord(2, 300)) == BigInt(0));
}

TEST_CASE("full-weight codec degenerates to plain base-q counting") {
  auto codec = get_pattern_codec(3, 5, 5);
  CHECK(codec->count() == BigInt(243));
  QaryWord w(3, 5);
  w.sym = {2, 1, 0, 0, 1};
  // Lex rank with most-significant symbol first.
  BigInt expect = 0;
  for (std::size_t i = 0; i < 5; ++i) expect = expect * 3 + w.sym[i];
  CHECK(codec->rank(w) == expect);
}

}  // TEST_SUITE
