// =============================================================================
// Side-information compression codec: a word known to the encoder is conveyed
// to a decoder that already holds a noisy copy, using per-chunk seeded hash
// digests plus systematic Reed-Solomon parity chunks for cleanup. The
// content is scrambled by a bank permutation first so adversarial noise is
// spread quasi-uniformly across chunks.
// =============================================================================
#pragma once

#include <optional>
#include <vector>

#include "qfl/common.hpp"
#include "qfl/hashperm.hpp"

namespace qfl {

/// Codec configuration. The chunk length lc fixes the cleanup field
/// GF(q^lc); digests spend lc * (H_q(p_hat) + eps_h) symbols per chunk; the
/// decoder accepts candidates whose distance from its noisy copy lies within
/// lc * (p_hat +- eps_d); parity_overhead Theta sizes the cleanup code as
/// K' = ceil(K / (1 - Theta)).
///
/// Two small-regime guards, both off (0) by default:
///  - digest_floor raises every digest below it to at least that many
///    symbols. At low noise estimates the entropy term shrinks the digest
///    until the candidate window (size ~ lc * (q-1) choose few) times
///    q^-digest makes hash collisions within the window routine; the floor
///    keeps that product small without touching high-estimate digests.
///  - parity_min guarantees at least that many parity chunks. Short stages
///    otherwise get only ceil(K / (1 - Theta)) - K ~ 2-4 parity chunks,
///    too few to absorb ordinary erasure fluctuations.
struct ChunkCodecParams {
  std::uint32_t q = 2;
  std::uint64_t lc = 12;
  double eps_h = 0.2;
  double eps_d = 0.1;
  double parity_overhead = 0.2;
  std::uint64_t digest_floor = 0;
  std::uint64_t parity_min = 0;
};

// -----------------------------------------------------------------------------
// Size arithmetic
// -----------------------------------------------------------------------------

/// Digest length ceil(lc * (H_q(p_hat) + eps_h)), capped at lc. At the cap
/// the codec degenerates to sending chunks verbatim.
std::uint64_t sw_digest_symbols(const ChunkCodecParams& par, double p_hat);

/// Number of data chunks K = ceil(content_len / lc).
std::uint64_t sw_data_chunks(const ChunkCodecParams& par, std::uint64_t content_len);

/// Total chunk count K' = ceil(K / (1 - parity_overhead)), validated against
/// the field size (K' <= q^lc - 1).
std::uint64_t sw_total_chunks(const ChunkCodecParams& par, std::uint64_t data_chunks);

/// Asymptotic sizing rule K' = K / (1 - (4 q^(-sqrt(lc)/2) + 2 eps_n)),
/// rounded up. Only well-defined once the parenthesized loss is < 1, which
/// requires chunk lengths far beyond what the explicit parity_overhead knob
/// is used for at bench scale.
std::uint64_t sw_total_chunks_theory(std::uint32_t q, std::uint64_t lc,
                                     std::uint64_t data_chunks, double eps_n);

/// Encoded payload length in symbols: K * digest + (K' - K) * lc.
std::uint64_t sw_encoded_length(const ChunkCodecParams& par,
                                std::uint64_t content_len, double p_hat);

/// Two-sided failure bound for a probe-based noise estimate:
/// P(|estimate - truth| >= eps) <= 2 exp(-samples * eps^2 / 2).
double noise_estimate_failure_bound(std::uint64_t samples, double eps);

// -----------------------------------------------------------------------------
// Single-chunk primitives
// -----------------------------------------------------------------------------

/// Digest of one length-lc chunk under the given per-chunk seed.
QaryWord sw_chunk_digest(const ChunkCodecParams& par, const HashFamily& hashes,
                         const QaryWord& chunk, std::uint64_t chunk_index,
                         std::uint64_t seed, double p_hat);

/// Searches the typicality window around `noisy_chunk` for the unique word
/// whose digest matches. Returns nullopt when no candidate or more than one
/// matches; `ambiguous` (if given) distinguishes the two.
std::optional<QaryWord> sw_chunk_recover(const ChunkCodecParams& par,
                                         const HashFamily& hashes,
                                         const QaryWord& noisy_chunk,
                                         const QaryWord& digest,
                                         std::uint64_t chunk_index,
                                         std::uint64_t seed, double p_hat,
                                         bool* ambiguous = nullptr);

// -----------------------------------------------------------------------------
// Whole-stage codec
// -----------------------------------------------------------------------------

/// Decoder-side diagnostics.
struct SwDecodeInfo {
  std::uint64_t erasures = 0;    // chunks with no unique candidate
  std::uint64_t ambiguous = 0;   // of those, chunks with multiple candidates
  bool verbatim = false;         // digest cap reached; chunks sent raw
  bool rs_used = false;
};

/// Compresses `content`: scramble with bank member `perm_index`, pad to a
/// chunk multiple, emit per-chunk digests keyed by `seeds`, then append
/// Reed-Solomon parity chunks verbatim.
QaryWord sw_encode(const ChunkCodecParams& par, const QaryWord& content,
                   const PermBank& bank, const BigInt& perm_index,
                   const HashFamily& hashes,
                   const std::vector<std::uint64_t>& seeds, double p_hat);

/// Recovers the encoder's content from a noisy copy of it plus the exact
/// compressed word. Returns nullopt on structural failure (bad sizes, RS
/// failure, or a digest mismatch after cleanup).
std::optional<QaryWord> sw_decode(const ChunkCodecParams& par,
                                  const QaryWord& noisy,
                                  const QaryWord& compressed,
                                  const PermBank& bank, const BigInt& perm_index,
                                  const HashFamily& hashes,
                                  const std::vector<std::uint64_t>& seeds,
                                  double p_hat, SwDecodeInfo* info = nullptr);

}  // namespace qfl
