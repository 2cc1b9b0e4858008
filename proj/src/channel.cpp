// =============================================================================
// Budgeted adversarial channel and feedback-packet accounting.
// =============================================================================
#include "qfl/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "qfl/hashperm.hpp"
#include "qfl/qary_math.hpp"

namespace qfl {

// -----------------------------------------------------------------------------
// Feedback schedule
// -----------------------------------------------------------------------------

FeedbackSchedule make_feedback_schedule(std::uint32_t q, std::uint64_t n,
                                        std::uint64_t block_len, std::uint64_t lc,
                                        double c_e, std::uint32_t c_p) {
  if (q < 2) throw std::domain_error("feedback_schedule: q must be >= 2");
  if (block_len < 2 || block_len > n)
    throw std::domain_error("feedback_schedule: block length outside [2, n]");
  if (lc < 2) throw std::domain_error("feedback_schedule: chunk length too small");

  FeedbackSchedule s;
  s.q = q;
  s.n = n;
  s.block_len = block_len;
  s.n_blocks = ceil_div(n, block_len);
  s.lc = lc;
  const double logq_b = std::log(double(block_len)) / std::log(double(q));
  const double logq_n = std::log(double(n)) / std::log(double(q));
  s.probes = static_cast<std::uint64_t>(std::ceil(c_e * logq_b));
  s.pos_symbols = static_cast<std::uint64_t>(std::ceil(logq_b - 1e-12));
  s.chunk_slots = ceil_div(n, lc);
  s.fa = s.probes * s.pos_symbols;
  s.fb = s.probes;
  s.fc = static_cast<std::uint64_t>(std::ceil(double(c_p) * logq_n - 1e-12));
  s.fd = s.chunk_slots * seed_word_symbols(lc);
  return s;
}

std::uint64_t FeedbackSchedule::packet_symbols(const FeedbackPacket& pkt) const {
  return pkt.probe_positions.size() * pos_symbols + pkt.probe_values.size() +
         fc + pkt.hash_seeds.size() * seed_word_symbols(lc);
}

// -----------------------------------------------------------------------------
// Channel
// -----------------------------------------------------------------------------

Channel::Channel(std::uint32_t q, std::uint64_t n, const Rational& rho,
                 std::unique_ptr<Adversary> adv)
    : q_(q), n_(n), adv_(std::move(adv)), x_(q, 0), y_(q, 0) {
  if (q < 2) throw std::domain_error("Channel: q must be >= 2");
  if (rho < 0 || rho > 1) throw std::domain_error("Channel: rho outside [0, 1]");
  if (!adv_) throw std::invalid_argument("Channel: null adversary");
  budget_ = static_cast<std::uint64_t>(floor_rational(Rational(n) * rho));
}

QaryWord Channel::transmit(const QaryWord& seg) {
  if (seg.q != q_) throw std::invalid_argument("Channel::transmit: alphabet mismatch");
  if (x_.size() + seg.size() > n_)
    throw std::length_error("Channel::transmit: session length exceeded");

  SegmentLog log;
  log.offset = x_.size();
  log.length = seg.size();

  QaryWord out(q_, seg.size());
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const Symbol x = seg.sym[i];
    if (x >= q_) throw std::invalid_argument("Channel::transmit: symbol out of range");
    const std::uint64_t pos = x_.size();
    Symbol y = adv_->corrupt(pos, x);
    if (y >= q_) throw std::logic_error("Channel: adversary emitted an invalid symbol");
    if (y != x) {
      if (spent_ < budget_) {
        ++spent_;
        ++log.flips;
      } else {
        ++clamped_;
        y = x;  // budget exhausted: the symbol passes through unchanged
      }
    }
    x_.sym.push_back(x);
    y_.sym.push_back(y);
    out.sym[i] = y;
  }
  segments_.push_back(log);
  return out;
}

void Channel::feedback(const FeedbackPacket& pkt) {
  ++packets_;
  adv_->notify_feedback(pkt);
}

std::uint64_t Channel::flips_in(std::uint64_t offset, std::uint64_t len) const {
  if (offset + len > x_.size())
    throw std::out_of_range("Channel::flips_in: range beyond transcript");
  std::uint64_t c = 0;
  for (std::uint64_t i = offset; i < offset + len; ++i)
    if (x_.sym[i] != y_.sym[i]) ++c;
  return c;
}

}  // namespace qfl
