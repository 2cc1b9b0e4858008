// =============================================================================
// Minimal-feedback stage-recursion scheme (see weldon_partial.hpp).
// =============================================================================
#include "qfl/weldon_partial.hpp"

#include <algorithm>
#include <stdexcept>

#include "qfl/planner.hpp"
#include "qfl/qary_math.hpp"

namespace qfl {

namespace {

QaryWord slice(const QaryWord& w, std::uint64_t offset, std::uint64_t len) {
  QaryWord out(w.q, len);
  for (std::uint64_t i = 0; i < len; ++i) out.sym[i] = w.sym[offset + i];
  return out;
}

void append(QaryWord& acc, const QaryWord& part) {
  acc.sym.insert(acc.sym.end(), part.sym.begin(), part.sym.end());
}

std::uint64_t hamming(const QaryWord& a, const QaryWord& b) {
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a.sym[i] != b.sym[i]);
  return d;
}

}  // namespace

// -----------------------------------------------------------------------------
// Decoder stack frame
// -----------------------------------------------------------------------------

struct PartialFbScheme::Frame {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  Rational p_hat = 0;
  std::uint64_t desc_len = 0;
};

// -----------------------------------------------------------------------------
// Construction
// -----------------------------------------------------------------------------

PartialFbScheme::PartialFbScheme(const PartialFbParams& par)
    : par_(par),
      hashes_{par.q, par.master_seed},
      bank_(par.n, par.c_p, par.master_seed),
      term_(par.term) {
  if (par.q < 2) throw std::invalid_argument("partial-fb: q must be >= 2");
  if (par.chunk.q != par.q)
    throw std::invalid_argument("partial-fb: chunk codec alphabet mismatch");
  if (par.term.q != par.q)
    throw std::invalid_argument("partial-fb: termination alphabet mismatch");
  if (par.block_len == 0 || par.n == 0 || par.n % par.block_len != 0)
    throw std::invalid_argument("partial-fb: block length must divide n");
  if (par.rate <= 0 || par.rate >= 1)
    throw std::invalid_argument("partial-fb: rate must be in (0, 1)");
  if (par.rho < 0 || par.rho > 1)
    throw std::invalid_argument("partial-fb: rho must be in [0, 1]");
  if (par.stage_cap == 0)
    throw std::invalid_argument("partial-fb: stage cap must be positive");
  if (par.delta <= 0 || par.delta > 1)
    throw std::invalid_argument("partial-fb: delta must be in (0, 1]");
  const Rational steps = Rational(1) / par.delta;
  if (boost::multiprecision::denominator(steps) != 1)
    throw std::invalid_argument("partial-fb: 1/delta must be an integer");
  if (par.c_e <= 0) throw std::invalid_argument("partial-fb: c_e must be positive");

  msg_len_ = floor_rational(par.rate * Rational(par.n));
  if (msg_len_ == 0 || msg_len_ >= par.n)
    throw std::invalid_argument("partial-fb: message length out of range");
  budget_ = floor_rational(par.rho * Rational(par.n));
  n_blocks_ = par.n / par.block_len;
  if (ceil_div(msg_len_, par.block_len) * par.block_len >= par.n)
    throw std::invalid_argument("partial-fb: first stage leaves no room");

  seed_space_ = 1;
  for (std::uint64_t i = 0; i < seed_word_symbols(par.chunk.lc); ++i)
    seed_space_ *= par.q;
  schedule_ = make_feedback_schedule(par.q, par.n, par.block_len, par.chunk.lc,
                                     par.c_e, par.c_p);

  const auto steps_i = static_cast<std::uint64_t>(
      boost::multiprecision::numerator(steps));
  for (std::uint64_t j = 0; j <= steps_i; ++j)
    grid_.push_back(Rational(j) * par.delta);
}

// -----------------------------------------------------------------------------
// Layout arithmetic
// -----------------------------------------------------------------------------

double PartialFbScheme::wire_p_hat(const Rational& p_hat) const {
  const double ph = static_cast<double>(p_hat);
  const std::uint64_t d = sw_digest_symbols(par_.chunk, ph);
  if (d + par_.verbatim_margin >= par_.chunk.lc)
    return 1.0 - 1.0 / par_.q;  // entropy cap: digest = lc, chunks verbatim
  return ph;
}

std::uint64_t PartialFbScheme::desc_length(std::uint64_t stage_len,
                                           const Rational& p_hat) const {
  return sw_encoded_length(par_.chunk, stage_len, wire_p_hat(p_hat));
}

bool PartialFbScheme::trigger_fires(std::uint64_t desc_len, std::uint64_t n_rem,
                                    const Rational& est_left) const {
  const auto lay = term_.try_layout(desc_len, n_rem);
  return lay.has_value() && lay->certified >= ceil_rational(est_left);
}

// -----------------------------------------------------------------------------
// Per-block feedback randomness
// -----------------------------------------------------------------------------

BlockRandomness PartialFbScheme::block_randomness(std::uint64_t block_index) const {
  auto rng = make_rng(par_.feedback_seed, "fb-block", block_index);
  BlockRandomness br;
  br.probe_positions.reserve(schedule_.probes);
  for (std::uint64_t i = 0; i < schedule_.probes; ++i)
    br.probe_positions.push_back(
        static_cast<std::uint32_t>(rng() % par_.block_len));
  br.perm_index = BigInt(rng()) % bank_.count();
  br.hash_seeds.reserve(schedule_.chunk_slots);
  for (std::uint64_t i = 0; i < schedule_.chunk_slots; ++i)
    br.hash_seeds.push_back(rng() % seed_space_);
  return br;
}

FeedbackPacket PartialFbScheme::make_packet(std::uint64_t block_index,
                                            const QaryWord& block_rx) const {
  if (block_rx.size() != par_.block_len)
    throw std::invalid_argument("partial-fb: packet needs one whole block");
  const BlockRandomness br = block_randomness(block_index);
  FeedbackPacket pkt;
  pkt.block_index = block_index;
  pkt.probe_positions = br.probe_positions;
  pkt.probe_values = QaryWord(par_.q, 0);
  pkt.probe_values.sym.reserve(br.probe_positions.size());
  for (const auto pos : br.probe_positions)
    pkt.probe_values.sym.push_back(block_rx.sym[pos]);
  pkt.perm_index = br.perm_index;
  pkt.hash_seeds = br.hash_seeds;
  return pkt;
}

// -----------------------------------------------------------------------------
// Encoder side
// -----------------------------------------------------------------------------

QaryWord PartialFbScheme::transmit(const QaryWord& msg, Channel& ch,
                                   PartialFbTranscript* log) const {
  if (msg.q != par_.q || msg.size() != msg_len_)
    throw std::invalid_argument("partial-fb: message has the wrong shape");
  const std::uint64_t B = par_.block_len;

  // Sends `content` block by block, collecting Bob's packets and pooling the
  // probe comparisons against what was actually sent.
  QaryWord rx_all(par_.q, 0);
  const auto send_blocks = [&](const QaryWord& content, std::uint64_t* mism,
                               std::uint64_t* samples) {
    for (std::uint64_t b0 = 0; b0 < content.size() / B; ++b0) {
      const std::uint64_t global_block = (ch.sent() / B);
      const QaryWord sent = slice(content, b0 * B, B);
      const QaryWord got = ch.transmit(sent);
      append(rx_all, got);
      const FeedbackPacket pkt = make_packet(global_block, got);
      ch.feedback(pkt);
      if (mism != nullptr) {
        for (std::size_t j = 0; j < pkt.probe_positions.size(); ++j) {
          ++*samples;
          *mism += (pkt.probe_values.sym[j] != sent.sym[pkt.probe_positions[j]]);
        }
      }
    }
  };

  QaryWord content(par_.q, ceil_div(msg_len_, B) * B);
  std::copy(msg.sym.begin(), msg.sym.end(), content.sym.begin());
  Rational est(budget_);

  for (std::uint32_t stage = 1;; ++stage) {
    const std::uint64_t offset = ch.sent();
    std::uint64_t mism = 0, samples = 0;
    send_blocks(content, &mism, &samples);

    PartialStageRecord rec;
    rec.offset = offset;
    rec.length = content.size();
    rec.samples = samples;
    rec.mismatches = mism;
    rec.p_tilde = Rational(mism, samples);
    rec.p_hat = grid_round_up(rec.p_tilde, par_.delta);
    est = est - rec.p_hat * Rational(content.size());
    if (est < 0) est = 0;

    // Fresh scrambler and seeds become available with the stage-final packet.
    const BlockRandomness br = block_randomness(ch.sent() / B - 1);
    const QaryWord desc =
        sw_encode(par_.chunk, content, bank_, br.perm_index, hashes_,
                  br.hash_seeds, wire_p_hat(rec.p_hat));
    rec.desc_len = desc.size();
    if (log != nullptr) log->stages.push_back(rec);

    const std::uint64_t n_rem = par_.n - ch.sent();
    const bool fired = trigger_fires(desc.size(), n_rem, est);
    if (fired || stage == par_.stage_cap) {
      const QaryWord tail = term_.encode(desc, n_rem);  // throws if infeasible
      send_blocks(tail, nullptr, nullptr);
      if (log != nullptr) {
        log->term_offset = par_.n - n_rem;
        log->term_content = desc.size();
        log->packets = ch.feedback_packets();
      }
      return rx_all;
    }
    const std::uint64_t next_len = ceil_div(desc.size(), B) * B;
    if (next_len > n_rem)
      throw infeasible_error("partial-fb: stage recursion ran out of room");
    QaryWord next(par_.q, next_len);
    std::copy(desc.sym.begin(), desc.sym.end(), next.sym.begin());
    content = next;
  }
}

// -----------------------------------------------------------------------------
// Decoder side
// -----------------------------------------------------------------------------

void PartialFbScheme::attempt_leaf(const std::vector<Frame>& path,
                                   std::uint64_t min_spent,
                                   const QaryWord& received,
                                   PartialFbDecodeStats& st, TermMemo& term_memo,
                                   std::vector<PartialFbEntry>& out) const {
  ++st.leaves;
  const Frame& last = path.back();
  const std::uint64_t term_off = last.offset + last.length;
  const std::uint64_t n_rem = par_.n - term_off;
  const auto key = std::make_pair(term_off, last.desc_len);

  auto it = term_memo.find(key);
  if (it == term_memo.end()) {
    TermEntry entry;
    entry.floor = term_.region_distance_floor(slice(received, term_off, n_rem),
                                              last.desc_len, budget_);
    it = term_memo.emplace(key, std::move(entry)).first;
  }
  // A mislocated region sits far from every inner codeword, so the floor
  // alone rules out nearly all wrong guesses before any real decoding.
  if (min_spent + it->second.floor > budget_) return;
  if (!it->second.decoded) {
    it->second.decoded = true;
    ++st.term_decodes;
    const QaryWord region = slice(received, term_off, n_rem);
    try {
      it->second.desc = term_.decode(region, last.desc_len);
      if (it->second.desc.has_value())
        it->second.dist =
            hamming(term_.encode(*it->second.desc, n_rem), region);
    } catch (const infeasible_error&) {
      it->second.desc.reset();
    }
  }
  if (!it->second.desc.has_value()) return;
  if (min_spent + it->second.dist > budget_) return;

  // Unwind the stage chain: each description reveals the previous stage's
  // exact content, whose distance to the received slice is real corruption.
  std::uint64_t spent = it->second.dist;
  QaryWord desc = *it->second.desc;
  QaryWord message(par_.q, 0);
  for (std::size_t j = path.size(); j-- > 0;) {
    const Frame& fr = path[j];
    const BlockRandomness br =
        block_randomness((fr.offset + fr.length) / par_.block_len - 1);
    const QaryWord noisy = slice(received, fr.offset, fr.length);
    ++st.sw_decodes;
    const std::optional<QaryWord> content =
        sw_decode(par_.chunk, noisy, desc, bank_, br.perm_index, hashes_,
                  br.hash_seeds, wire_p_hat(fr.p_hat));
    if (!content.has_value()) return;
    spent += hamming(*content, noisy);
    if (spent > budget_) return;
    const std::uint64_t keep = (j > 0) ? path[j - 1].desc_len : msg_len_;
    for (std::uint64_t i = keep; i < content->size(); ++i)
      if (content->sym[i] != 0) return;  // encoder pads stages with zeros
    if (j > 0)
      desc = slice(*content, 0, keep);
    else
      message = slice(*content, 0, keep);
  }

  PartialFbEntry entry;
  entry.message = message;
  entry.p_hats.reserve(path.size());
  for (const Frame& fr : path) entry.p_hats.push_back(fr.p_hat);
  for (const PartialFbEntry& e : out)
    if (e.message == entry.message && e.p_hats == entry.p_hats) return;
  out.push_back(std::move(entry));
}

void PartialFbScheme::dfs(std::uint64_t offset, std::uint64_t stage_len,
                          Rational est, std::uint64_t min_spent,
                          std::vector<Frame>& path, const QaryWord& received,
                          PartialFbDecodeStats& st, TermMemo& term_memo,
                          std::vector<PartialFbEntry>& out) const {
  ++st.nodes;
  const Rational slack = par_.delta * 2;  // grid round-up + probe deviation
  for (const Rational& p_hat : grid_) {
    std::uint64_t min_w = 0;
    if (p_hat > slack)
      min_w = ceil_rational((p_hat - slack) * Rational(stage_len));
    if (min_spent + min_w > budget_) {
      ++st.pruned;  // grid is ascending: every later guess is heavier
      break;
    }
    const std::uint64_t desc_len = desc_length(stage_len, p_hat);
    Rational est2 = est - p_hat * Rational(stage_len);
    if (est2 < 0) est2 = 0;
    const std::uint64_t n_rem = par_.n - offset - stage_len;
    const bool fired = trigger_fires(desc_len, n_rem, est2);
    const bool forced = path.size() + 1 == par_.stage_cap;

    path.push_back(Frame{offset, stage_len, p_hat, desc_len});
    if (fired || forced) {
      // The encoder terminates deterministically at the first firing stage
      // (or the cap), so this guess path ends here and nowhere else.
      attempt_leaf(path, min_spent + min_w, received, st, term_memo, out);
    } else {
      const std::uint64_t next_len =
          ceil_div(desc_len, par_.block_len) * par_.block_len;
      if (next_len <= n_rem) {
        dfs(offset + stage_len, next_len, est2, min_spent + min_w, path,
            received, st, term_memo, out);
      } else {
        ++st.pruned;
      }
    }
    path.pop_back();
  }
}

std::vector<PartialFbEntry> PartialFbScheme::decode(
    const QaryWord& received, PartialFbDecodeStats* stats) const {
  if (received.q != par_.q || received.size() != par_.n)
    throw std::invalid_argument("partial-fb: received word has the wrong shape");
  PartialFbDecodeStats local;
  PartialFbDecodeStats& st = (stats != nullptr) ? *stats : local;
  std::vector<PartialFbEntry> out;
  std::vector<Frame> path;
  TermMemo term_memo;
  dfs(0, ceil_div(msg_len_, par_.block_len) * par_.block_len, Rational(budget_),
      0, path, received, st, term_memo, out);
  return out;
}

}  // namespace qfl
