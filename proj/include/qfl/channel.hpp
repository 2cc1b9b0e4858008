// =============================================================================
// Adversarial q-ary channel with a global corruption budget, plus the
// feedback-packet schedule used by the minimal-feedback scheme and a set of
// adversary strategies for stress testing.
// =============================================================================
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "qfl/common.hpp"

namespace qfl {

// -----------------------------------------------------------------------------
// Feedback packets
// -----------------------------------------------------------------------------

/// Contents of the feedback Bob returns after each transmission block in the
/// minimal-feedback scheme. All components ride a public noiseless channel;
/// the adversary observes every packet.
struct FeedbackPacket {
  std::uint64_t block_index = 0;
  /// Sampled probe positions within the block (with replacement).
  std::vector<std::uint32_t> probe_positions;
  /// Bob's received symbol at each probe position.
  QaryWord probe_values;
  /// Scrambler member to use for the next stage.
  BigInt perm_index = 0;
  /// Fresh per-chunk hash seed words, packed base q. One slot per possible
  /// chunk of a full session, so the packet size is fixed.
  std::vector<std::uint64_t> hash_seeds;
};

/// Fixed per-block symbol accounting for feedback packets.
///
/// With block length B, chunk length lc and constants C_e (probe density) and
/// C_p (scrambler bank exponent):
///   probes       = ceil(C_e * log_q B)
///   pos_symbols  = ceil(log_q B)               per probe position
///   fa           = probes * pos_symbols        probe positions
///   fb           = probes                      probe values
///   fc           = ceil(C_p * log_q n)         scrambler index
///   fd           = ceil(n / lc) * floor(sqrt(lc))   seed words
struct FeedbackSchedule {
  std::uint32_t q = 2;
  std::uint64_t n = 0;
  std::uint64_t block_len = 0;
  std::uint64_t n_blocks = 0;
  std::uint64_t lc = 0;
  std::uint64_t probes = 0;
  std::uint64_t pos_symbols = 0;
  std::uint64_t chunk_slots = 0;
  std::uint64_t fa = 0, fb = 0, fc = 0, fd = 0;

  std::uint64_t per_block() const { return fa + fb + fc + fd; }
  std::uint64_t total() const { return n_blocks * per_block(); }

  /// Wire size in q-ary symbols of a concrete packet under this schedule.
  std::uint64_t packet_symbols(const FeedbackPacket& pkt) const;
};

FeedbackSchedule make_feedback_schedule(std::uint32_t q, std::uint64_t n,
                                        std::uint64_t block_len, std::uint64_t lc,
                                        double c_e, std::uint32_t c_p);

// -----------------------------------------------------------------------------
// Adversary interface
// -----------------------------------------------------------------------------

/// A corruption strategy. The channel consults it once per transmitted symbol,
/// in session order, and enforces the global budget on top of its choices.
class Adversary {
 public:
  virtual ~Adversary() = default;

  /// The symbol Bob should receive when Alice sends `x` at absolute session
  /// position `pos`. Returning `x` leaves the symbol intact.
  virtual Symbol corrupt(std::uint64_t pos, Symbol x) = 0;

  /// Called for every feedback packet (the feedback channel is public).
  virtual void notify_feedback(const FeedbackPacket& pkt) { (void)pkt; }
};

// -----------------------------------------------------------------------------
// Channel
// -----------------------------------------------------------------------------

/// One contiguous transmit() call and its noise tally.
struct SegmentLog {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::uint64_t flips = 0;
};

/// Forward channel for one session of up to n symbols with corruption budget
/// floor(n * rho). Adversary proposals beyond the budget are clamped back to
/// the transmitted symbol and counted.
class Channel {
 public:
  Channel(std::uint32_t q, std::uint64_t n, const Rational& rho,
          std::unique_ptr<Adversary> adv);

  /// Send a segment; returns what Bob receives. Throws if the session length
  /// n would be exceeded or a symbol is out of range.
  QaryWord transmit(const QaryWord& seg);

  /// Deliver a feedback packet to the adversary.
  void feedback(const FeedbackPacket& pkt);

  std::uint32_t q() const { return q_; }
  std::uint64_t n() const { return n_; }
  std::uint64_t budget() const { return budget_; }
  std::uint64_t sent() const { return x_.size(); }
  std::uint64_t spent() const { return spent_; }
  std::uint64_t clamped() const { return clamped_; }
  std::uint64_t feedback_packets() const { return packets_; }

  const QaryWord& sent_word() const { return x_; }
  const QaryWord& received_word() const { return y_; }
  const std::vector<SegmentLog>& segments() const { return segments_; }

  /// Number of corrupted positions in [offset, offset + len).
  std::uint64_t flips_in(std::uint64_t offset, std::uint64_t len) const;

 private:
  std::uint32_t q_;
  std::uint64_t n_;
  std::uint64_t budget_;
  std::uint64_t spent_ = 0;
  std::uint64_t clamped_ = 0;
  std::uint64_t packets_ = 0;
  std::unique_ptr<Adversary> adv_;
  QaryWord x_, y_;
  std::vector<SegmentLog> segments_;
};

// -----------------------------------------------------------------------------
// Strategies
// -----------------------------------------------------------------------------

/// Leaves every symbol intact.
std::unique_ptr<Adversary> make_null_adversary();

/// Corrupts each position independently with probability p, replacing the
/// symbol with a uniformly random different one. Deterministic given seed.
std::unique_ptr<Adversary> make_uniform_iid_adversary(std::uint32_t q, double p,
                                                      std::uint64_t seed);

/// Corrupts the first num_corrupt positions of the session (adds 1 mod q).
std::unique_ptr<Adversary> make_burst_front_adversary(std::uint32_t q,
                                                      std::uint64_t num_corrupt);

/// A planned corruption span: corrupt the first `count` positions of
/// [start, start + count).
struct CorruptionSpan {
  std::uint64_t start = 0;
  std::uint64_t count = 0;
};

/// Corrupts exactly the positions listed in `spans` (which must be disjoint
/// and sorted by start). Used to realize exact per-stage noise fractions.
std::unique_ptr<Adversary> make_grid_extremal_adversary(
    std::uint32_t q, std::vector<CorruptionSpan> spans);

/// Predicts the next stage length from the current stage length and the
/// number of symbols the adversary corrupted in it; returning 0 means "treat
/// the rest of the session as one final stage".
using StageTracker =
    std::function<std::uint64_t(std::uint64_t stage_len, std::uint64_t flips)>;

/// Front-loads corruption: at the start of each stage it commits
/// min(stage_len, ceil(fraction * remaining_budget)) corruptions to the
/// leading positions of the stage. Stage boundaries come from `next_len`.
std::unique_ptr<Adversary> make_stage_greedy_adversary(
    std::uint32_t q, std::uint64_t first_stage_len, std::uint64_t budget,
    double fraction, StageTracker next_len);

}  // namespace qfl
