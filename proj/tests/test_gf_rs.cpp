// =============================================================================
// Finite fields and Reed-Solomon: field axioms (exhaustive for small orders),
// the classic distance-5 example over GF(8), systematic structure, and the
// errors-and-erasures guarantee 2t + e <= K' - K verified at the boundary.
// =============================================================================
#include <random>
#include <set>

#include "doctest.h"
#include "qfl/gf.hpp"
#include "qfl/rs.hpp"

using namespace qfl;

namespace {

void check_axioms_exhaustive(const GaloisField& F) {
  const std::uint32_t Q = F.order();
  for (std::uint32_t a = 0; a < Q; ++a) {
    CHECK(F.add(a, 0) == a);
    CHECK(F.mul(a, 1) == a);
    CHECK(F.add(a, F.neg(a)) == 0);
    if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
  }
  for (std::uint32_t a = 0; a < Q; ++a)
    for (std::uint32_t b = 0; b < Q; ++b) {
      CHECK(F.add(a, b) == F.add(b, a));
      CHECK(F.mul(a, b) == F.mul(b, a));
      for (std::uint32_t c = 0; c < Q; c += (Q > 16 ? 5 : 1)) {
        CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
        CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
        CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      }
    }
  // Generator spans the multiplicative group.
  std::set<std::uint32_t> seen;
  std::uint32_t v = 1;
  for (std::uint32_t i = 0; i + 1 < Q; ++i) {
    seen.insert(v);
    v = F.mul(v, F.generator());
  }
  CHECK(seen.size() == Q - 1);
}

std::vector<std::uint32_t> random_message(const GaloisField& F, std::uint32_t K,
                                          std::mt19937_64& rng) {
  std::vector<std::uint32_t> m(K);
  for (auto& x : m) x = std::uint32_t(rng() % F.order());
  return m;
}

}  // namespace

TEST_SUITE("gf_rs") {

TEST_CASE("field axioms hold exhaustively for small orders") {
  check_axioms_exhaustive(GaloisField::get(2, 3));   // GF(8)
  check_axioms_exhaustive(GaloisField::get(2, 4));   // GF(16)
  check_axioms_exhaustive(GaloisField::get(3, 2));   // GF(9)
  check_axioms_exhaustive(GaloisField::get(5, 1));   // GF(5)
  check_axioms_exhaustive(GaloisField::get(3, 3));   // GF(27)
}

TEST_CASE("large characteristic-2 field: spot axioms") {
  const auto& F = GaloisField::get(2, 12);
  std::mt19937_64 rng(make_rng(3, "gf-spot")());
  for (int it = 0; it < 20000; ++it) {
    const std::uint32_t a = std::uint32_t(rng() % F.order());
    const std::uint32_t b = std::uint32_t(rng() % F.order());
    const std::uint32_t c = std::uint32_t(rng() % F.order());
    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
    if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
  }
}

TEST_CASE("prime power factoring") {
  std::uint32_t p = 0, m = 0;
  CHECK(GaloisField::factor_prime_power(16, p, m));
  CHECK(p == 2);
  CHECK(m == 4);
  CHECK(GaloisField::factor_prime_power(27, p, m));
  CHECK(p == 3);
  CHECK(m == 3);
  CHECK(GaloisField::factor_prime_power(17, p, m));
  CHECK(p == 17);
  CHECK(m == 1);
  CHECK_FALSE(GaloisField::factor_prime_power(12, p, m));
  CHECK_FALSE(GaloisField::factor_prime_power(1, p, m));
}

TEST_CASE("GF(8) [7,3] code has minimum distance exactly 5 (exhaustive)") {
  const auto& F = GaloisField::get(2, 3);
  RSCode rs(F, 3, 7);
  CHECK(rs.distance() == 5);
  std::uint32_t min_wt = 7;
  for (std::uint32_t msg = 1; msg < 512; ++msg) {
    std::vector<std::uint32_t> data{msg & 7u, (msg >> 3) & 7u, (msg >> 6) & 7u};
    const auto cw = rs.encode(data);
    std::uint32_t wt = 0;
    for (auto s : cw) wt += (s != 0);
    min_wt = std::min(min_wt, wt);
    CHECK(rs.is_codeword(cw));
  }
  CHECK(min_wt == 5);  // frozen: MDS distance K'-K+1
}

TEST_CASE("systematic prefix and parameter validation") {
  const auto& F = GaloisField::get(2, 4);
  RSCode rs(F, 7, 15);
  std::mt19937_64 rng(make_rng(5, "rs-sys")());
  const auto data = random_message(F, 7, rng);
  const auto cw = rs.encode(data);
  REQUIRE(cw.size() == 15);
  for (std::size_t i = 0; i < 7; ++i) CHECK(cw[i] == data[i]);

  CHECK_THROWS_AS(RSCode(F, 7, 16), std::domain_error);   // K' > Q-1 rejected
  CHECK_THROWS_AS(RSCode(F, 0, 10), std::domain_error);
  CHECK_THROWS_AS(RSCode(F, 10, 10), std::domain_error);
}

TEST_CASE("GF(16) [15,7]: exhaustive decoding of up to 2 errors") {
  const auto& F = GaloisField::get(2, 4);
  RSCode rs(F, 7, 15);
  std::mt19937_64 rng(make_rng(17, "rs-exh")());
  const auto data = random_message(F, 7, rng);
  const auto cw = rs.encode(data);

  // Single errors: every position, every wrong value.
  for (std::uint32_t pos = 0; pos < 15; ++pos) {
    for (std::uint32_t val = 0; val < 16; ++val) {
      if (val == cw[pos]) continue;
      auto r = cw;
      r[pos] = val;
      auto dec = rs.decode(r);
      REQUIRE(dec.has_value());
      CHECK(*dec == cw);
    }
  }
  // Double errors: every position pair, random wrong values.
  for (std::uint32_t p1 = 0; p1 < 15; ++p1)
    for (std::uint32_t p2 = p1 + 1; p2 < 15; ++p2)
      for (int rep = 0; rep < 6; ++rep) {
        auto r = cw;
        r[p1] = (r[p1] + 1 + rng() % 15) % 16;
        r[p2] = (r[p2] + 1 + rng() % 15) % 16;
        auto dec = rs.decode(r);
        REQUIRE(dec.has_value());
        CHECK(*dec == cw);
      }
}

TEST_CASE("errors-and-erasures at the exact boundary 2t + e = K' - K") {
  const auto& F = GaloisField::get(2, 4);
  RSCode rs(F, 7, 15);  // 8 check symbols
  std::mt19937_64 rng(make_rng(23, "rs-boundary")());
  for (int trial = 0; trial < 2000; ++trial) {
    const auto data = random_message(F, 7, rng);
    const auto cw = rs.encode(data);
    const std::uint32_t t = std::uint32_t(rng() % 5);  // 0..4
    const std::uint32_t e = 8 - 2 * t;
    // Choose t+e distinct positions; first t get errors, rest are erased
    // (erased positions get arbitrary garbage values).
    std::vector<std::uint32_t> idx(15);
    for (std::uint32_t i = 0; i < 15; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    auto r = cw;
    std::vector<std::uint32_t> erasures;
    for (std::uint32_t j = 0; j < t; ++j)
      r[idx[j]] = (r[idx[j]] + 1 + rng() % 15) % 16;
    for (std::uint32_t j = t; j < t + e; ++j) {
      erasures.push_back(idx[j]);
      r[idx[j]] = std::uint32_t(rng() % 16);
    }
    auto dec = rs.decode(r, erasures);
    REQUIRE(dec.has_value());
    CHECK(*dec == cw);
  }
}

TEST_CASE("odd-characteristic decoding (value formula has explicit signs)") {
  for (auto [p, m, K, Kp] : {std::tuple<int, int, int, int>{13, 1, 6, 12},
                             std::tuple<int, int, int, int>{3, 2, 4, 8}}) {
    const auto& F = GaloisField::get(std::uint32_t(p), std::uint32_t(m));
    RSCode rs(F, std::uint32_t(K), std::uint32_t(Kp));
    std::mt19937_64 rng(make_rng(31, "rs-oddchar", std::uint64_t(p))());
    for (int trial = 0; trial < 500; ++trial) {
      const auto data = random_message(F, std::uint32_t(K), rng);
      const auto cw = rs.encode(data);
      const std::uint32_t nsym = std::uint32_t(Kp - K);
      const std::uint32_t t = std::uint32_t(rng() % (nsym / 2 + 1));
      const std::uint32_t e = std::uint32_t(rng() % (nsym - 2 * t + 1));
      std::vector<std::uint32_t> idx(static_cast<std::size_t>(Kp));
      for (std::uint32_t i = 0; i < std::uint32_t(Kp); ++i) idx[i] = i;
      std::shuffle(idx.begin(), idx.end(), rng);
      auto r = cw;
      std::vector<std::uint32_t> erasures;
      for (std::uint32_t j = 0; j < t; ++j)
        r[idx[j]] = (r[idx[j]] + 1 + rng() % (F.order() - 1)) % F.order();
      for (std::uint32_t j = t; j < t + e; ++j) {
        erasures.push_back(idx[j]);
        r[idx[j]] = std::uint32_t(rng() % F.order());
      }
      auto dec = rs.decode(r, erasures);
      REQUIRE(dec.has_value());
      CHECK(*dec == cw);
    }
  }
}

TEST_CASE("decoding honesty beyond the radius") {
  const auto& F = GaloisField::get(2, 4);
  RSCode rs(F, 7, 15);
  std::mt19937_64 rng(make_rng(41, "rs-beyond")());
  int failures = 0, wrong_codeword = 0, right = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto data = random_message(F, 7, rng);
    const auto cw = rs.encode(data);
    auto r = cw;
    // 8 random errors: far beyond the 4-error radius.
    std::vector<std::uint32_t> idx(15);
    for (std::uint32_t i = 0; i < 15; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int j = 0; j < 8; ++j) r[idx[std::size_t(j)]] ^= 1 + std::uint32_t(rng() % 15);
    auto dec = rs.decode(r);
    if (!dec.has_value())
      ++failures;
    else if (*dec == cw)
      ++right;
    else {
      // Whatever is returned must at least be a codeword.
      CHECK(rs.is_codeword(*dec));
      ++wrong_codeword;
    }
  }
  CHECK(failures + wrong_codeword + right == 500);
  CHECK(failures > 350);  // typical garbage is rejected, not miscorrected
}

TEST_CASE("erasures-only at full budget") {
  const auto& F = GaloisField::get(2, 12);
  RSCode rs(F, 40, 60);
  std::mt19937_64 rng(make_rng(47, "rs-erasures")());
  const auto data = random_message(F, 40, rng);
  const auto cw = rs.encode(data);
  auto r = cw;
  std::vector<std::uint32_t> erasures;
  std::vector<std::uint32_t> idx(60);
  for (std::uint32_t i = 0; i < 60; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int j = 0; j < 20; ++j) {
    erasures.push_back(idx[std::size_t(j)]);
    r[idx[std::size_t(j)]] = std::uint32_t(rng() % F.order());
  }
  auto dec = rs.decode(r, erasures);
  REQUIRE(dec.has_value());
  CHECK(*dec == cw);
}

}  // TEST_SUITE
