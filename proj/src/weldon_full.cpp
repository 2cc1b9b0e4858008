// =============================================================================
// Full-feedback stage-recursion scheme (see weldon_full.hpp).
// =============================================================================
#include "qfl/weldon_full.hpp"

#include <algorithm>
#include <stdexcept>

#include "qfl/enumcode.hpp"
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

}  // namespace

// -----------------------------------------------------------------------------
// Decoder stack frame
// -----------------------------------------------------------------------------

struct FullFbScheme::Frame {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::uint64_t w_max = 0;
  Rational p_hat = 0;
  std::uint64_t next_len = 0;
};

// -----------------------------------------------------------------------------
// Construction
// -----------------------------------------------------------------------------

FullFbScheme::FullFbScheme(const FullFbParams& par)
    : par_(par), term_(par.term) {
  if (par.q < 2) throw std::invalid_argument("full-fb: q must be >= 2");
  if (par.term.q != par.q)
    throw std::invalid_argument("full-fb: termination alphabet mismatch");
  if (par.rate <= 0 || par.rate >= 1)
    throw std::invalid_argument("full-fb: rate must be in (0, 1)");
  if (par.rho < 0 || par.rho > 1)
    throw std::invalid_argument("full-fb: rho must be in [0, 1]");
  if (par.stage_cap == 0)
    throw std::invalid_argument("full-fb: stage cap must be positive");
  if (par.delta <= 0 || par.delta > 1)
    throw std::invalid_argument("full-fb: delta must be in (0, 1]");
  const Rational steps = Rational(1) / par.delta;
  if (boost::multiprecision::denominator(steps) != 1)
    throw std::invalid_argument("full-fb: 1/delta must be an integer");
  msg_len_ = static_cast<std::uint64_t>(floor_rational(par.rate * par.n));
  if (msg_len_ == 0 || msg_len_ >= par.n)
    throw std::invalid_argument("full-fb: message length out of range");
  budget_ = static_cast<std::uint64_t>(floor_rational(par.rho * par.n));
  const auto m = static_cast<std::uint64_t>(
      boost::multiprecision::numerator(steps));
  grid_.reserve(m + 1);
  for (std::uint64_t j = 0; j <= m; ++j) grid_.push_back(par.delta * j);
}

const FullFbScheme::ClassInfo& FullFbScheme::class_info(
    std::uint64_t length, std::uint64_t w_max) const {
  const auto key = std::make_pair(length, w_max);
  auto it = class_cache_.find(key);
  if (it != class_cache_.end()) return it->second;
  ClassInfo info;
  info.count = pattern_count(length, w_max, par_.q);
  info.index_symbols = 0;
  BigInt cap = 1;
  while (cap < info.count) {
    cap *= par_.q;
    ++info.index_symbols;
  }
  return class_cache_.emplace(key, std::move(info)).first->second;
}

std::uint64_t FullFbScheme::stage_index_len(std::uint64_t length,
                                            std::uint64_t w_max) const {
  return class_info(length, w_max).index_symbols;
}

bool FullFbScheme::trigger_fires(std::uint64_t next_len, std::uint64_t n_rem,
                                 const Rational& est_left) const {
  if (next_len == 0) return true;  // nothing left to describe
  const auto lay = term_.try_layout(next_len, n_rem);
  if (!lay.has_value()) return false;
  return lay->certified >= static_cast<std::uint64_t>(ceil_rational(est_left));
}

// -----------------------------------------------------------------------------
// Alice
// -----------------------------------------------------------------------------

QaryWord FullFbScheme::transmit(const QaryWord& msg, Channel& ch,
                                FullFbTranscript* tr) const {
  if (msg.q != par_.q || msg.size() != msg_len_)
    throw std::invalid_argument("full-fb: message shape mismatch");
  if (ch.q() != par_.q || ch.n() != par_.n || ch.sent() != 0)
    throw std::invalid_argument("full-fb: channel must be fresh and matching");

  FullFbTranscript local;
  FullFbTranscript& t = tr ? *tr : local;
  t = FullFbTranscript{};

  QaryWord received(par_.q, 0);
  QaryWord x = msg;
  std::uint64_t offset = 0;
  Rational est = Rational(budget_);

  for (std::uint32_t stage = 1;; ++stage) {
    const std::uint64_t len = x.size();
    const QaryWord y = ch.transmit(x);
    append(received, y);
    const QaryWord e = qsub(y, x);  // y = x + e, so x = y - e on unwind
    const std::uint64_t w = e.weight();

    StageRecord rec;
    rec.offset = offset;
    rec.length = len;
    rec.flips = w;
    rec.p_hat = grid_round_up(Rational(w, len), par_.delta);
    rec.w_max = static_cast<std::uint64_t>(ceil_rational(rec.p_hat * len));
    rec.next_len = stage_index_len(len, rec.w_max);
    t.stages.push_back(rec);

    offset += len;
    const std::uint64_t n_rem = par_.n - offset;
    est -= rec.p_hat * len;
    if (est < 0) est = 0;

    const bool fired = trigger_fires(rec.next_len, n_rem, est);
    if (fired || stage == par_.stage_cap) {
      QaryWord residual(par_.q, 0);
      if (rec.next_len > 0) {
        const auto codec = get_pattern_codec(par_.q, len, rec.w_max);
        residual = codec->encode(e);
      }
      const QaryWord term_word = term_.encode(residual, n_rem);
      append(received, ch.transmit(term_word));
      t.term_offset = offset;
      t.term_len = n_rem;
      t.residual_len = rec.next_len;
      return received;
    }
    if (rec.next_len > n_rem)
      throw infeasible_error("full-fb: stage recursion exceeds the session");
    const auto codec = get_pattern_codec(par_.q, len, rec.w_max);
    x = codec->encode(e);
  }
}

// -----------------------------------------------------------------------------
// Bob
// -----------------------------------------------------------------------------

void FullFbScheme::attempt_leaf(const std::vector<Frame>& path,
                                std::uint64_t min_spent,
                                const QaryWord& received, FullFbDecodeStats& st,
                                TermMemo& term_memo,
                                std::vector<QaryWord>& out) const {
  ++st.leaves;
  const Frame& last = path.back();
  const std::uint64_t term_off = last.offset + last.length;
  const auto key = std::make_pair(term_off, last.next_len);
  auto it = term_memo.find(key);
  if (it == term_memo.end()) {
    ++st.term_decodes;
    const QaryWord region = slice(received, term_off, par_.n - term_off);
    TermEntry entry;
    entry.residual = term_.decode(region, last.next_len);
    if (entry.residual) {
      // Corruption the region must have absorbed if this layout is real.
      const QaryWord ref = term_.encode(*entry.residual, region.size());
      for (std::uint64_t i = 0; i < region.size(); ++i)
        entry.dist += (region.sym[i] != ref.sym[i]);
    }
    it = term_memo.emplace(key, std::move(entry)).first;
  }
  if (!it->second.residual) return;
  // The stages already account for at least min_spent corruptions, so a real
  // transcript cannot have absorbed more than the rest here.
  if (it->second.dist > budget_ - min_spent) return;

  QaryWord c = *it->second.residual;  // index word for the deepest pattern
  std::uint64_t spent = 0;
  for (std::size_t i = path.size(); i-- > 0;) {
    const Frame& fr = path[i];
    QaryWord e(par_.q, 0);
    const BigInt v = index_word_value(c);
    if (v == 0) {
      e = QaryWord(par_.q, fr.length);  // rank 0 is the all-zero pattern
    } else {
      if (v >= class_info(fr.length, fr.w_max).count) return;
      const auto codec = get_pattern_codec(par_.q, fr.length, fr.w_max);
      e = codec->unrank(v);
    }
    const std::uint64_t w = e.weight();
    if (grid_round_up(Rational(w, fr.length), par_.delta) != fr.p_hat) return;
    spent += w;
    if (spent > budget_) return;
    c = qsub(slice(received, fr.offset, fr.length), e);
  }
  if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
}

void FullFbScheme::dfs(std::uint64_t offset, std::uint64_t length,
                       Rational est_left, std::uint64_t min_spent,
                       std::vector<Frame>& path, const QaryWord& received,
                       FullFbDecodeStats& st, TermMemo& term_memo,
                       std::vector<QaryWord>& out) const {
  for (const Rational& p_hat : grid_) {
    // Smallest corruption count consistent with this grid estimate: the
    // round-up property gives w/length > p_hat - delta for p_hat > 0.
    std::uint64_t min_w = 0;
    if (p_hat > 0)
      min_w = static_cast<std::uint64_t>(
                  floor_rational((p_hat - par_.delta) * length)) +
              1;
    if (min_w > length || min_spent + min_w > budget_) {
      ++st.pruned;  // larger estimates only get worse
      break;
    }
    Frame fr;
    fr.offset = offset;
    fr.length = length;
    fr.p_hat = p_hat;
    fr.w_max = static_cast<std::uint64_t>(ceil_rational(p_hat * length));
    fr.next_len = stage_index_len(length, fr.w_max);

    const std::uint64_t n_rem = par_.n - (offset + length);
    Rational est = est_left - p_hat * length;
    if (est < 0) est = 0;
    const bool fired = trigger_fires(fr.next_len, n_rem, est);
    const bool forced = path.size() + 1 == par_.stage_cap;

    path.push_back(fr);
    if (fired || forced) {
      attempt_leaf(path, min_spent + min_w, received, st, term_memo, out);
    } else if (fr.next_len <= n_rem) {
      dfs(offset + length, fr.next_len, est, min_spent + min_w, path, received,
          st, term_memo, out);
    } else {
      ++st.pruned;  // Alice could not have fit the next stage
    }
    path.pop_back();
  }
}

std::vector<QaryWord> FullFbScheme::decode(const QaryWord& received,
                                           FullFbDecodeStats* stats) const {
  if (received.q != par_.q || received.size() != par_.n)
    throw std::invalid_argument("full-fb: received word shape mismatch");
  FullFbDecodeStats local;
  FullFbDecodeStats& st = stats ? *stats : local;
  st = FullFbDecodeStats{};
  std::vector<QaryWord> out;
  std::vector<Frame> path;
  TermMemo term_memo;
  dfs(0, msg_len_, Rational(budget_), 0, path, received, st, term_memo, out);
  return out;
}

}  // namespace qfl
