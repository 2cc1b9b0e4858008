// =============================================================================
// Full-feedback stage-recursion scheme. Alice sends the message uncoded,
// learns the corruption of each stage through the (noiseless) feedback of the
// received word, and sends next a bounded-weight enumerative index of that
// corruption pattern. Stage lengths therefore shrink geometrically while the
// noise fraction stays below the entropy ceiling. A final residual index is
// carried by the certified-radius termination code over all remaining
// channel uses. Bob decodes backward: he walks a pruned tree of per-stage
// grid noise estimates, reproduces the implied layout for each guess,
// decodes the termination region, and unwinds the stages; every surviving
// leaf contributes one list entry. The true estimate sequence always
// reproduces Alice's layout exactly, so the transmitted message survives
// whenever the termination region stays inside its certified corruption
// count.
// =============================================================================
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qfl/channel.hpp"
#include "qfl/common.hpp"
#include "qfl/termination.hpp"

namespace qfl {

// -----------------------------------------------------------------------------
// Parameters
// -----------------------------------------------------------------------------

struct FullFbParams {
  std::uint32_t q = 2;
  std::uint64_t n = 4096;        // session length in channel symbols
  Rational rate{3, 10};          // first-stage (message) fraction of n
  Rational rho{1, 10};           // adversary corruption budget fraction
  Rational delta{1, 8};          // noise-estimate grid step (1/delta integral)
  std::uint32_t stage_cap = 6;   // maximum number of stages before forcing
                                 // termination
  TerminationParams term{};      // inner/outer termination code shape
};

// -----------------------------------------------------------------------------
// Transcripts and statistics
// -----------------------------------------------------------------------------

/// One stage of Alice's forward pass.
struct StageRecord {
  std::uint64_t offset = 0;    // absolute start of the stage
  std::uint64_t length = 0;    // stage length in symbols
  std::uint64_t flips = 0;     // corruptions observed through feedback
  Rational p_hat = 0;          // grid round-up of flips / length
  std::uint64_t w_max = 0;     // pattern-class weight bound ceil(length*p_hat)
  std::uint64_t next_len = 0;  // index symbols describing this stage's pattern
};

struct FullFbTranscript {
  std::vector<StageRecord> stages;
  std::uint64_t term_offset = 0;   // start of the termination region
  std::uint64_t term_len = 0;      // its length (runs to the session end)
  std::uint64_t residual_len = 0;  // content symbols carried by termination
};

struct FullFbDecodeStats {
  std::uint64_t leaves = 0;        // estimate sequences fully evaluated
  std::uint64_t pruned = 0;        // branches cut before evaluation
  std::uint64_t term_decodes = 0;  // distinct termination regions decoded
};

// -----------------------------------------------------------------------------
// Scheme
// -----------------------------------------------------------------------------

class FullFbScheme {
 public:
  /// Validates parameters and draws the termination inner codebook.
  explicit FullFbScheme(const FullFbParams& par);

  const FullFbParams& params() const { return par_; }
  std::uint64_t message_length() const { return msg_len_; }
  std::uint64_t budget() const { return budget_; }
  const TerminationCode& termination() const { return term_; }

  /// Alice's forward pass over a fresh channel session. Returns Bob's full
  /// received word (always exactly n symbols). Throws infeasible_error if
  /// the forced termination at the stage cap cannot fit the residual.
  QaryWord transmit(const QaryWord& msg, Channel& ch,
                    FullFbTranscript* tr = nullptr) const;

  /// Bob's backward list decode of a received session.
  std::vector<QaryWord> decode(const QaryWord& received,
                               FullFbDecodeStats* stats = nullptr) const;

  /// Index symbols describing a pattern of the class (length, w_max);
  /// memoized. Exposed so tests and adversary trackers can mirror layouts.
  std::uint64_t stage_index_len(std::uint64_t length, std::uint64_t w_max) const;

  /// Deterministic termination trigger shared by both sides: fires when the
  /// next index fits the remaining session with a certified corruption count
  /// covering the whole implied remaining adversary budget.
  bool trigger_fires(std::uint64_t next_len, std::uint64_t n_rem,
                     const Rational& est_left) const;

 private:
  struct Frame;  // decoder stack frame, defined in the implementation

  /// Memoized termination attempt for one (offset, content length) region:
  /// the decoded residual plus the distance between the received region and
  /// its re-encoding (the corruption the region must have absorbed).
  struct TermEntry {
    std::optional<QaryWord> residual;
    std::uint64_t dist = 0;
  };
  using TermMemo = std::map<std::pair<std::uint64_t, std::uint64_t>, TermEntry>;

  /// Cached per-class layout facts: index length and exact pattern count.
  struct ClassInfo {
    std::uint64_t index_symbols = 0;
    BigInt count;
  };

  const ClassInfo& class_info(std::uint64_t length, std::uint64_t w_max) const;

  void dfs(std::uint64_t offset, std::uint64_t length, Rational est_left,
           std::uint64_t min_spent, std::vector<Frame>& path,
           const QaryWord& received, FullFbDecodeStats& st, TermMemo& term_memo,
           std::vector<QaryWord>& out) const;

  void attempt_leaf(const std::vector<Frame>& path, std::uint64_t min_spent,
                    const QaryWord& received, FullFbDecodeStats& st,
                    TermMemo& term_memo, std::vector<QaryWord>& out) const;

  FullFbParams par_;
  std::uint64_t msg_len_ = 0;
  std::uint64_t budget_ = 0;
  std::vector<Rational> grid_;  // 0, delta, 2*delta, ..., 1
  TerminationCode term_;
  mutable std::map<std::pair<std::uint64_t, std::uint64_t>, ClassInfo>
      class_cache_;
};

}  // namespace qfl
