// =============================================================================
// Termination code: certified inner distance, layout arithmetic, and
// recovery at exactly the certified corruption budget.
// =============================================================================
#include <random>

#include "doctest.h"
#include "qfl/termination.hpp"

using namespace qfl;

namespace {

TerminationParams small_params() {
  TerminationParams par;
  par.q = 2;
  par.inner_len = 15;
  par.inner_dim = 4;
  par.inner_dist = 5;
  par.master_seed = 7;
  return par;
}

QaryWord random_word(std::uint32_t q, std::size_t len, std::mt19937_64& rng) {
  QaryWord w(q, len);
  for (auto& s : w.sym) s = static_cast<Symbol>(rng() % q);
  return w;
}

/// Independent pairwise minimum distance over the public codeword accessor.
std::uint32_t oracle_min_distance(const TerminationCode& tc, std::uint64_t M) {
  std::uint32_t dmin = tc.params().inner_len + 1;
  for (std::uint64_t a = 0; a < M; ++a) {
    const QaryWord wa = tc.inner_codeword(a);
    for (std::uint64_t b = a + 1; b < M; ++b) {
      const QaryWord wb = tc.inner_codeword(b);
      std::uint32_t d = 0;
      for (std::size_t i = 0; i < wa.size(); ++i) d += (wa.sym[i] != wb.sym[i]);
      if (d < dmin) dmin = d;
    }
  }
  return dmin;
}

}  // namespace

TEST_SUITE("termination") {

TEST_CASE("inner codebook meets its distance target, certified exactly") {
  const TerminationCode tc(small_params());
  CHECK(tc.inner_distance() >= 5);
  CHECK(tc.inner_distance() == oracle_min_distance(tc, 16));
  CHECK(tc.draws_used() < 200);

  // Two instances with the same parameters draw the same codebook.
  const TerminationCode tc2(small_params());
  for (std::uint64_t m = 0; m < 16; ++m)
    CHECK(tc.inner_codeword(m) == tc2.inner_codeword(m));
}

TEST_CASE("unreachable distance targets are refused") {
  TerminationParams par = small_params();
  par.inner_dist = 12;  // beyond the Plotkin bound for a (15, 16) binary code
  CHECK_THROWS_AS(TerminationCode{par}, infeasible_error);
}

TEST_CASE("layout arithmetic and the corruption certificate") {
  TerminationParams par = small_params();
  const TerminationCode tc(par);
  const std::uint32_t d = tc.inner_distance();
  const auto lay = tc.layout(10, 200);
  CHECK(lay.k_out == 3);   // ceil(10 / 4)
  CHECK(lay.n_out == 13);  // floor(200 / 15)
  CHECK(lay.slack == 5);
  CHECK(lay.radius == (d - 1) / 2);
  const std::uint64_t parity = 10;
  CHECK(lay.certified == (lay.radius + 1) * (parity / 2 + 1) - 1);

  // Residual too large for the session remainder.
  CHECK_THROWS_AS(tc.layout(100, 120), infeasible_error);
}

TEST_CASE("round trip: clean, random noise at the certificate, slack abuse") {
  const TerminationCode tc(small_params());
  std::mt19937_64 rng(make_rng(30, "term-rt")());
  const QaryWord residual = random_word(2, 10, rng);
  const QaryWord sent = tc.encode(residual, 200);
  REQUIRE(sent.size() == 200);
  const auto lay = tc.layout(10, 200);

  // Clean.
  auto dec = tc.decode(sent, 10);
  REQUIRE(dec.has_value());
  CHECK(*dec == residual);

  // Exactly `certified` random flips, several patterns.
  for (int trial = 0; trial < 20; ++trial) {
    QaryWord noisy = sent;
    std::vector<std::size_t> pos(lay.n_out * 15);
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
    std::shuffle(pos.begin(), pos.end(), rng);
    for (std::uint64_t i = 0; i < lay.certified; ++i) noisy.sym[pos[i]] ^= 1;
    dec = tc.decode(noisy, 10);
    REQUIRE(dec.has_value());
    CHECK(*dec == residual);
  }

  // Concentrated: spoil whole blocks front to back with radius+1 flips each.
  {
    QaryWord noisy = sent;
    std::uint64_t left = lay.certified;
    for (std::uint64_t b = 0; b < lay.n_out && left > 0; ++b) {
      for (std::uint64_t i = 0; i < lay.radius + 1 && left > 0; ++i, --left)
        noisy.sym[b * 15 + i] ^= 1;
    }
    dec = tc.decode(noisy, 10);
    REQUIRE(dec.has_value());
    CHECK(*dec == residual);
  }

  // Corrupting only the ignored slack changes nothing.
  {
    QaryWord noisy = sent;
    for (std::uint64_t i = lay.n_out * 15; i < 200; ++i) noisy.sym[i] ^= 1;
    dec = tc.decode(noisy, 10);
    REQUIRE(dec.has_value());
    CHECK(*dec == residual);
  }

  // Far beyond the certificate: must return cleanly (any verdict).
  {
    QaryWord noisy = sent;
    for (std::uint64_t b = 0; b < 10; ++b) {
      const QaryWord other = tc.inner_codeword((b + 3) % 16);
      for (std::uint32_t i = 0; i < 15; ++i) noisy.sym[b * 15 + i] = other.sym[i];
    }
    CHECK_NOTHROW(tc.decode(noisy, 10));
  }
}

TEST_CASE("ternary inner code round trip") {
  TerminationParams par;
  par.q = 3;
  par.inner_len = 8;
  par.inner_dim = 2;
  par.inner_dist = 4;
  par.master_seed = 11;
  const TerminationCode tc(par);
  CHECK(tc.inner_distance() >= 4);
  CHECK(tc.inner_distance() == oracle_min_distance(tc, 9));

  std::mt19937_64 rng(make_rng(31, "term-q3")());
  const QaryWord residual = random_word(3, 5, rng);
  const QaryWord sent = tc.encode(residual, 100);
  const auto lay = tc.layout(5, 100);
  CHECK(lay.n_out == 8);  // capped by the field: 3^2 - 1

  QaryWord noisy = sent;
  std::vector<std::size_t> pos(lay.n_out * 8);
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
  std::shuffle(pos.begin(), pos.end(), rng);
  for (std::uint64_t i = 0; i < lay.certified; ++i)
    noisy.sym[pos[i]] = static_cast<Symbol>((noisy.sym[pos[i]] + 1 + rng() % 2) % 3);
  const auto dec = tc.decode(noisy, 5);
  REQUIRE(dec.has_value());
  CHECK(*dec == residual);
}

TEST_CASE("protocol-scale codebook draws quickly with real margins") {
  TerminationParams par;
  par.q = 2;
  par.inner_len = 63;
  par.inner_dim = 7;
  par.inner_dist = 22;
  par.master_seed = 5;
  const TerminationCode tc(par);
  CHECK(tc.inner_distance() >= 22);
  const auto lay = tc.layout(30, 2900);
  CHECK(lay.k_out == 5);
  CHECK(lay.n_out == 46);
  const std::uint64_t t = (tc.inner_distance() - 1) / 2;
  CHECK(lay.certified == (t + 1) * ((46 - 5) / 2 + 1) - 1);
}

}  // TEST_SUITE
