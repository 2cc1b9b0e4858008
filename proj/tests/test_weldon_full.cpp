#include <cstdint>
#include <vector>

#include "doctest.h"
#include "qfl/channel.hpp"
#include "qfl/common.hpp"
#include "qfl/planner.hpp"
#include "qfl/weldon_full.hpp"

using namespace qfl;

namespace {

// Binary toy session: n = 4096, message 1228 symbols, budget 409, eighth-step
// estimate grid, at most six stages, [63,7] inner blocks of distance >= 22.
FullFbParams toy_params() {
  FullFbParams par;
  par.q = 2;
  par.n = 4096;
  par.rate = Rational(3, 10);
  par.rho = Rational(1, 10);
  par.delta = Rational(1, 8);
  par.stage_cap = 6;
  par.term.q = 2;
  par.term.inner_len = 63;
  par.term.inner_dim = 7;
  par.term.inner_dist = 22;
  par.term.master_seed = 5;
  return par;
}

// Ternary smoke session: n = 700, message 175 symbols, budget 35.
FullFbParams ternary_params() {
  FullFbParams par;
  par.q = 3;
  par.n = 700;
  par.rate = Rational(1, 4);
  par.rho = Rational(1, 20);
  par.delta = Rational(1, 6);
  par.stage_cap = 6;
  par.term.q = 3;
  par.term.inner_len = 26;
  par.term.inner_dim = 3;
  par.term.inner_dist = 14;
  par.term.master_seed = 1;
  return par;
}

QaryWord random_message(const FullFbScheme& s, std::uint64_t seed) {
  auto rng = make_rng(seed, "wf-msg");
  QaryWord m(s.params().q, s.message_length());
  for (auto& v : m.sym) v = static_cast<Symbol>(rng() % s.params().q);
  return m;
}

bool contains(const std::vector<QaryWord>& list, const QaryWord& m) {
  for (const auto& c : list)
    if (c == m) return true;
  return false;
}

}  // namespace

TEST_SUITE("weldon_full") {

TEST_CASE("parameter validation") {
  FullFbParams par = toy_params();
  CHECK_NOTHROW(FullFbScheme{par});

  FullFbParams bad = par;
  bad.delta = Rational(2, 7);  // 1/delta not an integer
  CHECK_THROWS_AS(FullFbScheme{bad}, std::invalid_argument);
  bad = par;
  bad.rate = Rational(0);
  CHECK_THROWS_AS(FullFbScheme{bad}, std::invalid_argument);
  bad = par;
  bad.term.q = 3;  // termination alphabet must match
  CHECK_THROWS_AS(FullFbScheme{bad}, std::invalid_argument);

  FullFbScheme s(par);
  CHECK(s.message_length() == 1228);  // floor(4096 * 3/10)
  CHECK(s.budget() == 409);           // floor(4096 * 1/10)
  Channel ch(2, par.n, par.rho, make_null_adversary());
  QaryWord short_msg(2, 100);
  CHECK_THROWS_AS(s.transmit(short_msg, ch), std::invalid_argument);
  QaryWord bad_rx(2, 100);
  CHECK_THROWS_AS(s.decode(bad_rx), std::invalid_argument);
}

TEST_CASE("clean channel: single stage, singleton list") {
  const FullFbParams par = toy_params();
  const FullFbScheme s(par);
  const QaryWord msg = random_message(s, 11);
  Channel ch(par.q, par.n, par.rho, make_null_adversary());

  FullFbTranscript tr;
  const QaryWord y = s.transmit(msg, ch, &tr);
  CHECK(y.size() == par.n);
  // No corruption: the first stage's pattern is empty, so the recursion ends
  // immediately with an empty residual.
  CHECK(tr.stages.size() == 1);
  CHECK(tr.stages[0].flips == 0);
  CHECK(tr.stages[0].p_hat == 0);
  CHECK(tr.residual_len == 0);
  CHECK(tr.term_offset == s.message_length());
  CHECK(tr.term_len == par.n - s.message_length());

  FullFbDecodeStats st;
  const auto list = s.decode(y, &st);
  REQUIRE(list.size() == 1);  // every wrong-estimate branch dies
  CHECK(list[0] == msg);
  CHECK(st.leaves >= 1);
}

TEST_CASE("uniform iid noise round trips") {
  const FullFbParams par = toy_params();
  const FullFbScheme s(par);
  for (std::uint64_t trial = 0; trial < 12; ++trial) {
    const QaryWord msg = random_message(s, 100 + trial);
    Channel ch(par.q, par.n, par.rho,
               make_uniform_iid_adversary(par.q, 0.04, 500 + trial));
    FullFbTranscript tr;
    const QaryWord y = s.transmit(msg, ch, &tr);
    CHECK(tr.stages.size() <= par.stage_cap);
    CHECK(ch.spent() <= s.budget());
    const auto list = s.decode(y);
    CHECK(contains(list, msg));
    CHECK(list.size() <= 4);  // small list: a few corrupted-filler survivors
  }
}

TEST_CASE("front burst: whole budget on the message stage") {
  const FullFbParams par = toy_params();
  const FullFbScheme s(par);
  const QaryWord msg = random_message(s, 21);
  Channel ch(par.q, par.n, par.rho, make_burst_front_adversary(par.q, 409));
  FullFbTranscript tr;
  const QaryWord y = s.transmit(msg, ch, &tr);
  CHECK(ch.spent() == 409);
  // Stage 1 takes all 409 corruptions (fraction 1/3 rounds up to 3/8); the
  // index stage that follows is clean, so the recursion stops at two stages
  // with an empty residual.
  REQUIRE(tr.stages.size() == 2);
  CHECK(tr.stages[0].flips == 409);
  CHECK(tr.stages[0].p_hat == Rational(3, 8));
  CHECK(tr.stages[1].flips == 0);
  CHECK(tr.residual_len == 0);
  const auto list = s.decode(y);
  CHECK(contains(list, msg));
}

TEST_CASE("exact grid trajectory incl. termination-region corruption") {
  const FullFbParams par = toy_params();
  const FullFbScheme s(par);

  // Mirror the layout the scheme will compute when every stage carries
  // floor(length/8) corruptions (estimate 1/8 on the grid), and spend the
  // remaining budget inside the termination region.
  std::vector<CorruptionSpan> spans;
  std::vector<std::uint64_t> lens;
  std::uint64_t offset = 0, len = s.message_length(), spent = 0;
  Rational est(s.budget());
  std::uint32_t stages = 0;
  for (std::uint32_t stage = 1; stage <= par.stage_cap; ++stage) {
    const std::uint64_t w = len / 8;
    REQUIRE(w >= 1);
    REQUIRE(grid_round_up(Rational(w, len), par.delta) == Rational(1, 8));
    spans.push_back({offset, w});
    lens.push_back(len);
    spent += w;
    const auto w_max =
        static_cast<std::uint64_t>(ceil_rational(Rational(len, 8)));
    const std::uint64_t next = s.stage_index_len(len, w_max);
    offset += len;
    est -= Rational(len, 8);
    if (est < 0) est = 0;
    stages = stage;
    if (s.trigger_fires(next, par.n - offset, est)) break;
    if (stage < par.stage_cap) len = next;
  }
  const std::uint64_t leftover = s.budget() - spent;
  REQUIRE(leftover > 0);
  spans.push_back({offset, leftover});  // hits the termination region

  const QaryWord msg = random_message(s, 31);
  Channel ch(par.q, par.n, par.rho,
             make_grid_extremal_adversary(par.q, spans));
  FullFbTranscript tr;
  const QaryWord y = s.transmit(msg, ch, &tr);
  CHECK(ch.spent() == s.budget());  // the plan lands exactly on the budget
  REQUIRE(tr.stages.size() == stages);
  for (std::size_t i = 0; i < lens.size(); ++i) {
    CHECK(tr.stages[i].length == lens[i]);
    CHECK(tr.stages[i].flips == lens[i] / 8);
  }
  FullFbDecodeStats st;
  const auto list = s.decode(y, &st);
  CHECK(contains(list, msg));
  CHECK(st.term_decodes >= 1);
}

TEST_CASE("stage-greedy adversary driven by a layout tracker") {
  const FullFbParams par = toy_params();
  const FullFbScheme s(par);

  // The tracker mirrors the stage recursion so the adversary always knows
  // the upcoming stage boundary; returning 0 hands it the rest of the
  // session (the termination region) as its final stage.
  std::uint64_t track_offset = 0;
  Rational track_est(s.budget());
  std::uint32_t track_stage = 0;
  StageTracker tracker = [&, par](std::uint64_t stage_len,
                                  std::uint64_t flips) -> std::uint64_t {
    ++track_stage;
    track_offset += stage_len;
    const Rational p_hat =
        grid_round_up(Rational(flips, stage_len), par.delta);
    const auto w_max =
        static_cast<std::uint64_t>(ceil_rational(p_hat * stage_len));
    const std::uint64_t next = s.stage_index_len(stage_len, w_max);
    track_est -= p_hat * stage_len;
    if (track_est < 0) track_est = 0;
    if (track_stage >= par.stage_cap ||
        s.trigger_fires(next, par.n - track_offset, track_est))
      return 0;
    return next;
  };

  const QaryWord msg = random_message(s, 41);
  Channel ch(par.q, par.n, par.rho,
             make_stage_greedy_adversary(par.q, s.message_length(),
                                         s.budget(), 0.75, tracker));
  FullFbTranscript tr;
  const QaryWord y = s.transmit(msg, ch, &tr);
  CHECK(tr.stages.size() >= 2);
  CHECK(ch.spent() <= s.budget());
  CHECK(tr.stages[0].flips == 307);  // ceil(0.75 * 409)
  const auto list = s.decode(y);
  CHECK(contains(list, msg));
}

TEST_CASE("ternary session") {
  const FullFbParams par = ternary_params();
  const FullFbScheme s(par);
  CHECK(s.message_length() == 175);
  CHECK(s.budget() == 35);

  SUBCASE("clean") {
    const QaryWord msg = random_message(s, 51);
    Channel ch(par.q, par.n, par.rho, make_null_adversary());
    const QaryWord y = s.transmit(msg, ch);
    const auto list = s.decode(y);
    REQUIRE(list.size() == 1);
    CHECK(list[0] == msg);
  }
  SUBCASE("front burst") {
    const QaryWord msg = random_message(s, 52);
    Channel ch(par.q, par.n, par.rho, make_burst_front_adversary(par.q, 35));
    FullFbTranscript tr;
    const QaryWord y = s.transmit(msg, ch, &tr);
    REQUIRE(tr.stages.size() == 2);
    CHECK(tr.stages[0].p_hat == Rational(1, 3));  // 1/5 rounds up to 2/6
    CHECK(tr.stages[1].flips == 0);
    const auto list = s.decode(y);
    CHECK(contains(list, msg));
  }
  SUBCASE("uniform iid") {
    for (std::uint64_t trial = 0; trial < 6; ++trial) {
      const QaryWord msg = random_message(s, 60 + trial);
      Channel ch(par.q, par.n, par.rho,
                 make_uniform_iid_adversary(par.q, 0.02, 600 + trial));
      const QaryWord y = s.transmit(msg, ch);
      const auto list = s.decode(y);
      CHECK(contains(list, msg));
    }
  }
}

}  // TEST_SUITE
