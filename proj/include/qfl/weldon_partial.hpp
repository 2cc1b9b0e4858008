// =============================================================================
// Minimal-feedback stage-recursion scheme. Alice sends the message in stage
// 1; Bob returns a short feedback packet after every fixed-length block
// (probe positions and values, a scrambler index, fresh hash seeds). Alice
// pools the probes of a stage into a quantized noise estimate and compresses
// the whole stage with the side-information chunk codec; the compressed
// description, zero-padded to a block multiple, becomes the next stage.
// Once the remaining-budget certificate of the termination code covers the
// implied leftover corruption budget, the current description is carried by
// the termination code over all remaining symbols. Bob, who cannot see
// Alice's estimates, list-decodes by searching the quantized-estimate grid
// backward from the termination region.
// =============================================================================
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qfl/channel.hpp"
#include "qfl/common.hpp"
#include "qfl/hashperm.hpp"
#include "qfl/sw_codec.hpp"
#include "qfl/termination.hpp"

namespace qfl {

/// Session parameters for the minimal-feedback scheme.
struct PartialFbParams {
  std::uint32_t q = 2;
  std::uint64_t n = 16384;        ///< session length in channel symbols
  std::uint64_t block_len = 256;  ///< feedback granularity; must divide n
  Rational rate{3, 20};           ///< message length = floor(n * rate)
  Rational rho{1, 50};            ///< adversary budget = floor(n * rho)
  Rational delta{1, 32};          ///< estimate quantization grid step
  std::uint32_t stage_cap = 8;    ///< forced termination depth
  double c_e = 6.0;               ///< probe density constant
  std::uint32_t c_p = 2;          ///< scrambler bank exponent (P = n^c_p)
  std::uint64_t master_seed = 1;    ///< hash family / scrambler bank seed
  std::uint64_t feedback_seed = 2;  ///< Bob's per-block packet randomness
  /// Digests shorter than the chunk length by at most this margin are
  /// rounded up to verbatim chunks: the few symbols saved never justify the
  /// candidate-window ambiguity of a near-full-entropy digest.
  std::uint64_t verbatim_margin = 2;
  ChunkCodecParams chunk;  ///< stage compression codec (chunk.q must equal q)
  TerminationParams term;  ///< residual carrier (term.q must equal q)
};

/// One stage as the encoder saw it.
struct PartialStageRecord {
  std::uint64_t offset = 0;      ///< absolute start of the stage
  std::uint64_t length = 0;      ///< padded on-wire length (block multiple)
  std::uint64_t samples = 0;     ///< pooled probe count for the estimate
  std::uint64_t mismatches = 0;  ///< probes whose value differed from sent
  Rational p_tilde{0};           ///< raw pooled estimate mismatches/samples
  Rational p_hat{0};             ///< estimate rounded up to the delta grid
  std::uint64_t desc_len = 0;    ///< compressed description length (symbols)
};

/// Encoder-side session log.
struct PartialFbTranscript {
  std::vector<PartialStageRecord> stages;
  std::uint64_t term_offset = 0;   ///< where the termination region starts
  std::uint64_t term_content = 0;  ///< residual description length it carries
  std::uint64_t packets = 0;       ///< feedback packets emitted (one per block)
};

/// One decoded candidate: the message together with the estimate-grid
/// guesses that produced it.
struct PartialFbEntry {
  QaryWord message;
  std::vector<Rational> p_hats;
};

/// Decoder-side work counters.
struct PartialFbDecodeStats {
  std::uint64_t nodes = 0;         ///< guess-tree nodes visited
  std::uint64_t pruned = 0;        ///< branches cut by length/budget bounds
  std::uint64_t leaves = 0;        ///< termination layouts attempted
  std::uint64_t term_decodes = 0;  ///< distinct termination decodes run
  std::uint64_t sw_decodes = 0;    ///< stage decompressions run
};

/// Per-block randomness Bob commits to obliviously (independent of traffic).
struct BlockRandomness {
  std::vector<std::uint32_t> probe_positions;
  BigInt perm_index = 0;
  std::vector<std::uint64_t> hash_seeds;
};

class PartialFbScheme {
 public:
  explicit PartialFbScheme(const PartialFbParams& par);

  const PartialFbParams& params() const { return par_; }
  std::uint64_t message_length() const { return msg_len_; }
  std::uint64_t budget() const { return budget_; }
  std::uint64_t n_blocks() const { return n_blocks_; }
  const FeedbackSchedule& schedule() const { return schedule_; }
  const TerminationCode& termination() const { return term_; }

  /// The seeded draw behind block b's packet; both sides can compute it.
  BlockRandomness block_randomness(std::uint64_t block_index) const;

  /// Bob's packet for block b given the symbols he received in it.
  FeedbackPacket make_packet(std::uint64_t block_index,
                             const QaryWord& block_rx) const;

  /// Runs Alice's side of a session. Returns Bob's received word; fills
  /// `log` if given. Throws infeasible_error when the recursion runs out of
  /// room before the termination certificate covers the leftover budget.
  QaryWord transmit(const QaryWord& msg, Channel& ch,
                    PartialFbTranscript* log = nullptr) const;

  /// List-decodes a full received session word.
  std::vector<PartialFbEntry> decode(const QaryWord& received,
                                     PartialFbDecodeStats* stats = nullptr) const;

  // --- layout arithmetic shared by encoder and decoder ---

  /// The noise parameter handed to the chunk codec for an estimate p_hat:
  /// p_hat itself, or full entropy (forcing verbatim chunks) once the digest
  /// would come within verbatim_margin of the chunk length.
  double wire_p_hat(const Rational& p_hat) const;

  /// Compressed description length of a stage of `stage_len` symbols under
  /// estimate p_hat.
  std::uint64_t desc_length(std::uint64_t stage_len, const Rational& p_hat) const;

  /// Termination trigger: the certified corruption tolerance of a layout
  /// carrying `desc_len` symbols over `n_rem` remaining ones covers the
  /// implied leftover budget. False when no layout fits.
  bool trigger_fires(std::uint64_t desc_len, std::uint64_t n_rem,
                     const Rational& est_left) const;

 private:
  struct Frame;
  /// Memoized termination work for one (region start, content length):
  /// first the cheap distance floor, then (only if some path affords that
  /// floor) the full decode and exact re-encode distance.
  struct TermEntry {
    std::uint64_t floor = 0;  ///< lower bound on the region distance
    bool decoded = false;     ///< full decode has been attempted
    std::optional<QaryWord> desc;
    std::uint64_t dist = 0;  ///< re-encode distance to the received region
  };
  using TermMemo = std::map<std::pair<std::uint64_t, std::uint64_t>, TermEntry>;

  void dfs(std::uint64_t offset, std::uint64_t stage_len, Rational est,
           std::uint64_t min_spent, std::vector<Frame>& path,
           const QaryWord& received, PartialFbDecodeStats& st,
           TermMemo& term_memo, std::vector<PartialFbEntry>& out) const;

  void attempt_leaf(const std::vector<Frame>& path, std::uint64_t min_spent,
                    const QaryWord& received, PartialFbDecodeStats& st,
                    TermMemo& term_memo, std::vector<PartialFbEntry>& out) const;

  PartialFbParams par_;
  std::uint64_t msg_len_ = 0;
  std::uint64_t budget_ = 0;
  std::uint64_t n_blocks_ = 0;
  std::uint64_t seed_space_ = 0;  ///< q^floor(sqrt(lc)) seed words per slot
  FeedbackSchedule schedule_;
  HashFamily hashes_;
  PermBank bank_;
  TerminationCode term_;
  std::vector<Rational> grid_;  ///< 0, delta, 2*delta, ..., 1
};

}  // namespace qfl
