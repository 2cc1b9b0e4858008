// =============================================================================
// Termination code: carries the final residual word of the stage recursion
// across the remaining (noisy) session symbols. A seeded random inner
// codebook with an exactly-certified minimum distance is concatenated with a
// systematic Reed-Solomon outer code; the decoder corrects inner blocks
// within the unique-decoding radius and cleans the rest up with
// errors-and-erasures decoding. The exact corruption count that guarantees
// recovery is certified at layout time.
// =============================================================================
#pragma once

#include <optional>
#include <vector>

#include "qfl/common.hpp"

namespace qfl {

class GaloisField;

struct TerminationParams {
  std::uint32_t q = 2;
  std::uint32_t inner_len = 63;   // symbols per inner block
  std::uint32_t inner_dim = 7;    // information symbols per inner block
  std::uint32_t inner_dist = 22;  // required exact minimum distance
  std::uint64_t master_seed = 1;
  std::uint32_t max_seed_draws = 200;  // redraw budget for the codebook
};

/// Derived per-use geometry and its corruption certificate.
struct TerminationLayout {
  std::uint64_t k_out = 0;      // outer data symbols
  std::uint64_t n_out = 0;      // outer codeword length (inner blocks)
  std::uint64_t slack = 0;      // trailing symbols the decoder ignores
  std::uint64_t radius = 0;     // inner unique-decoding radius (d-1)/2
  std::uint64_t certified = 0;  // max corruption count with guaranteed recovery
};

class TerminationCode {
 public:
  /// Draws inner codebooks from the seed until one meets the distance
  /// target, verifying the minimum pairwise distance exhaustively.
  explicit TerminationCode(const TerminationParams& par);

  const TerminationParams& params() const { return par_; }
  /// Exact minimum distance of the drawn inner codebook.
  std::uint32_t inner_distance() const { return dist_; }
  /// Seed draws consumed before the distance target was met.
  std::uint32_t draws_used() const { return draws_; }
  /// Inner codeword for a message index (diagnostics).
  QaryWord inner_codeword(std::uint64_t msg) const;

  /// Geometry for carrying `content_len` residual symbols inside `n_total`
  /// channel symbols. Throws infeasible_error when the capacity or the
  /// outer field cannot accommodate it.
  TerminationLayout layout(std::uint64_t content_len, std::uint64_t n_total) const;

  /// Same geometry without the failure exception: nullopt when it does not
  /// fit. Decoder guess loops probe many infeasible layouts, so this path
  /// stays cheap.
  std::optional<TerminationLayout> try_layout(std::uint64_t content_len,
                                              std::uint64_t n_total) const;

  /// Lower bound on the Hamming distance between `noisy` and *any* encoding
  /// of a content_len-symbol residual over the same span: per inner block
  /// the distance to the nearest codeword, plus the weight of the zero
  /// slack tail. Returns cap + 1 as soon as the bound exceeds `cap` (also
  /// when no layout fits). Used to discard mislocated termination regions
  /// without running the full decoder.
  std::uint64_t region_distance_floor(const QaryWord& noisy,
                                      std::uint64_t content_len,
                                      std::uint64_t cap) const;

  /// Encodes the residual into exactly n_total symbols (zero slack padding).
  QaryWord encode(const QaryWord& residual, std::uint64_t n_total) const;

  /// Recovers the residual from a noisy copy; content_len is known to the
  /// decoder from the stage recursion. Guaranteed whenever the corruption
  /// count is at most layout(...).certified.
  std::optional<QaryWord> decode(const QaryWord& noisy,
                                 std::uint64_t content_len) const;

 private:
  std::uint64_t inner_decode(const QaryWord& noisy, std::size_t offset,
                             bool& ok) const;

  TerminationParams par_;
  std::uint32_t dist_ = 0;
  std::uint32_t draws_ = 0;
  std::uint64_t codebook_size_ = 0;
  // Codewords by message index: packed bits for the binary fast path,
  // symbol-per-entry otherwise.
  std::vector<std::uint64_t> packed_;
  std::vector<Symbol> symbols_;
};

}  // namespace qfl
