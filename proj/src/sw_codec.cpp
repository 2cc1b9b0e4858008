// =============================================================================
// Chunk-hash compression with scrambling and Reed-Solomon cleanup.
// =============================================================================
#include "qfl/sw_codec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "qfl/gf.hpp"
#include "qfl/qary_math.hpp"
#include "qfl/rs.hpp"

namespace qfl {

namespace {

/// Candidate-search explosion guard for the brute-force window scan.
constexpr std::uint64_t kMaxWindowCandidates = std::uint64_t(1) << 22;

void validate(const ChunkCodecParams& par) {
  if (par.q < 2) throw std::domain_error("chunk codec: q must be >= 2");
  if (par.lc < 2) throw std::domain_error("chunk codec: chunk length too small");
  if (!(par.parity_overhead > 0.0) || !(par.parity_overhead < 1.0))
    throw std::domain_error("chunk codec: parity overhead outside (0, 1)");
  if (par.eps_h < 0.0 || par.eps_d < 0.0)
    throw std::domain_error("chunk codec: negative slack");
}

/// Field-element index of a chunk: base-q positional value, little-endian.
std::uint32_t pack_chunk(const QaryWord& w, std::size_t offset, std::uint64_t lc,
                         std::uint32_t q) {
  std::uint32_t v = 0;
  for (std::uint64_t i = lc; i-- > 0;)
    v = v * q + w.sym[offset + i];
  return v;
}

/// Inverse of pack_chunk, written into w at offset.
void unpack_chunk(std::uint32_t v, QaryWord& w, std::size_t offset,
                  std::uint64_t lc, std::uint32_t q) {
  for (std::uint64_t i = 0; i < lc; ++i) {
    w.sym[offset + i] = static_cast<Symbol>(v % q);
    v /= q;
  }
}

/// Integer weight window [lo, hi] for lc * (p_hat +- eps_d), clamped to
/// [0, lc]. A small tolerance keeps exactly-integer endpoints inside.
void weight_window(const ChunkCodecParams& par, double p_hat, std::uint64_t& lo,
                   std::uint64_t& hi) {
  const double l = double(par.lc) * (p_hat - par.eps_d);
  const double h = double(par.lc) * (p_hat + par.eps_d);
  lo = l <= 0.0 ? 0 : static_cast<std::uint64_t>(std::ceil(l - 1e-9));
  const double hf = std::floor(h + 1e-9);
  hi = hf >= double(par.lc) ? par.lc
                            : (hf < 0.0 ? 0 : static_cast<std::uint64_t>(hf));
}

}  // namespace

// -----------------------------------------------------------------------------
// Size arithmetic
// -----------------------------------------------------------------------------

std::uint64_t sw_digest_symbols(const ChunkCodecParams& par, double p_hat) {
  validate(par);
  if (p_hat < 0.0 || p_hat > 1.0)
    throw std::domain_error("sw_digest_symbols: p_hat outside [0, 1]");
  const double raw =
      double(par.lc) * (entropy_q(p_hat, par.q) + par.eps_h);
  auto d = static_cast<std::uint64_t>(std::ceil(raw - 1e-9));
  if (d < par.digest_floor) d = par.digest_floor;
  return d >= par.lc ? par.lc : (d == 0 ? 1 : d);
}

std::uint64_t sw_data_chunks(const ChunkCodecParams& par, std::uint64_t content_len) {
  validate(par);
  if (content_len == 0) throw std::domain_error("sw_data_chunks: empty content");
  return ceil_div(content_len, par.lc);
}

std::uint64_t sw_total_chunks(const ChunkCodecParams& par, std::uint64_t data_chunks) {
  validate(par);
  const double kd = double(data_chunks) / (1.0 - par.parity_overhead);
  auto kp = static_cast<std::uint64_t>(std::ceil(kd - 1e-9));
  if (kp < data_chunks + par.parity_min) kp = data_chunks + par.parity_min;
  const double field_order = std::pow(double(par.q), double(par.lc));
  if (double(kp) > field_order - 1.0)
    throw infeasible_error("chunk codec: cleanup code longer than the field allows");
  return kp;
}

std::uint64_t sw_total_chunks_theory(std::uint32_t q, std::uint64_t lc,
                                     std::uint64_t data_chunks, double eps_n) {
  const double loss =
      4.0 * std::pow(double(q), -std::sqrt(double(lc)) / 2.0) + 2.0 * eps_n;
  if (loss >= 1.0)
    throw infeasible_error("chunk codec: sizing rule needs longer chunks");
  return static_cast<std::uint64_t>(std::ceil(double(data_chunks) / (1.0 - loss)));
}

std::uint64_t sw_encoded_length(const ChunkCodecParams& par,
                                std::uint64_t content_len, double p_hat) {
  const std::uint64_t K = sw_data_chunks(par, content_len);
  const std::uint64_t Kp = sw_total_chunks(par, K);
  return K * sw_digest_symbols(par, p_hat) + (Kp - K) * par.lc;
}

double noise_estimate_failure_bound(std::uint64_t samples, double eps) {
  return 2.0 * std::exp(-double(samples) * eps * eps / 2.0);
}

// -----------------------------------------------------------------------------
// Single-chunk primitives
// -----------------------------------------------------------------------------

QaryWord sw_chunk_digest(const ChunkCodecParams& par, const HashFamily& hashes,
                         const QaryWord& chunk, std::uint64_t chunk_index,
                         std::uint64_t seed, double p_hat) {
  if (chunk.size() != par.lc)
    throw std::invalid_argument("sw_chunk_digest: wrong chunk length");
  return hashes.eval_packed(chunk, chunk_index, seed,
                            sw_digest_symbols(par, p_hat));
}

std::optional<QaryWord> sw_chunk_recover(const ChunkCodecParams& par,
                                         const HashFamily& hashes,
                                         const QaryWord& noisy_chunk,
                                         const QaryWord& digest,
                                         std::uint64_t chunk_index,
                                         std::uint64_t seed, double p_hat,
                                         bool* ambiguous) {
  if (noisy_chunk.size() != par.lc)
    throw std::invalid_argument("sw_chunk_recover: wrong chunk length");
  if (ambiguous) *ambiguous = false;
  const std::uint64_t d = sw_digest_symbols(par, p_hat);
  if (digest.size() != d) return std::nullopt;

  std::uint64_t w_lo = 0, w_hi = 0;
  weight_window(par, p_hat, w_lo, w_hi);
  if (pattern_count(par.lc, w_hi, par.q) > BigInt(kMaxWindowCandidates))
    throw infeasible_error("chunk codec: typicality window too large to scan");

  const std::uint32_t q = par.q;
  QaryWord cand = noisy_chunk;
  std::optional<QaryWord> found;
  bool multiple = false;

  // Try every word at distance w in [w_lo, w_hi] from the noisy chunk:
  // choose the support, then every nonzero per-position offset.
  std::function<bool(std::uint64_t, std::uint64_t)> scan =
      [&](std::uint64_t next_pos, std::uint64_t remaining) -> bool {
    if (remaining == 0) {
      if (hashes.eval_packed(cand, chunk_index, seed, d) == digest) {
        if (found) {
          multiple = true;
          return false;  // second match: abort the scan
        }
        found = cand;
      }
      return true;
    }
    for (std::uint64_t pos = next_pos; pos + remaining <= par.lc; ++pos) {
      const Symbol base = noisy_chunk.sym[pos];
      for (std::uint32_t off = 1; off < q; ++off) {
        cand.sym[pos] = static_cast<Symbol>((base + off) % q);
        if (!scan(pos + 1, remaining - 1)) {
          cand.sym[pos] = base;
          return false;
        }
      }
      cand.sym[pos] = base;
    }
    return true;
  };

  for (std::uint64_t w = w_lo; w <= w_hi && !multiple; ++w) scan(0, w);

  if (multiple) {
    if (ambiguous) *ambiguous = true;
    return std::nullopt;
  }
  return found;
}

// -----------------------------------------------------------------------------
// Whole-stage codec
// -----------------------------------------------------------------------------

QaryWord sw_encode(const ChunkCodecParams& par, const QaryWord& content,
                   const PermBank& bank, const BigInt& perm_index,
                   const HashFamily& hashes,
                   const std::vector<std::uint64_t>& seeds, double p_hat) {
  validate(par);
  if (content.q != par.q) throw std::invalid_argument("sw_encode: alphabet mismatch");
  const std::uint64_t N = content.size();
  const std::uint64_t K = sw_data_chunks(par, N);
  const std::uint64_t Kp = sw_total_chunks(par, K);
  const std::uint64_t d = sw_digest_symbols(par, p_hat);
  if (seeds.size() < K)
    throw std::invalid_argument("sw_encode: not enough chunk seeds");

  // Scramble, then pad with zeros to a whole number of chunks.
  QaryWord padded = bank.apply(content, perm_index);
  padded.sym.resize(K * par.lc, 0);

  const auto& field = GaloisField::of_order(
      static_cast<std::uint64_t>(std::llround(std::pow(double(par.q), double(par.lc)))));
  RSCode rs(field, static_cast<std::uint32_t>(K), static_cast<std::uint32_t>(Kp));
  std::vector<std::uint32_t> data(K);
  for (std::uint64_t i = 0; i < K; ++i)
    data[i] = pack_chunk(padded, i * par.lc, par.lc, par.q);
  const std::vector<std::uint32_t> code = rs.encode(data);

  QaryWord out(par.q, 0);
  out.sym.reserve(K * d + (Kp - K) * par.lc);
  QaryWord chunk(par.q, par.lc);
  for (std::uint64_t i = 0; i < K; ++i) {
    if (d == par.lc) {
      // Verbatim mode: the digest budget covers the chunk itself.
      out.sym.insert(out.sym.end(), padded.sym.begin() + long(i * par.lc),
                     padded.sym.begin() + long((i + 1) * par.lc));
    } else {
      std::copy(padded.sym.begin() + long(i * par.lc),
                padded.sym.begin() + long((i + 1) * par.lc), chunk.sym.begin());
      const QaryWord dig = hashes.eval_packed(chunk, i, seeds[i], d);
      out.sym.insert(out.sym.end(), dig.sym.begin(), dig.sym.end());
    }
  }
  QaryWord parity_sym(par.q, par.lc);
  for (std::uint64_t i = K; i < Kp; ++i) {
    unpack_chunk(code[i], parity_sym, 0, par.lc, par.q);
    out.sym.insert(out.sym.end(), parity_sym.sym.begin(), parity_sym.sym.end());
  }
  return out;
}

std::optional<QaryWord> sw_decode(const ChunkCodecParams& par,
                                  const QaryWord& noisy,
                                  const QaryWord& compressed,
                                  const PermBank& bank, const BigInt& perm_index,
                                  const HashFamily& hashes,
                                  const std::vector<std::uint64_t>& seeds,
                                  double p_hat, SwDecodeInfo* info) {
  validate(par);
  if (noisy.q != par.q || compressed.q != par.q)
    throw std::invalid_argument("sw_decode: alphabet mismatch");
  const std::uint64_t N = noisy.size();
  if (N == 0) return std::nullopt;
  const std::uint64_t K = sw_data_chunks(par, N);
  const std::uint64_t Kp = sw_total_chunks(par, K);
  const std::uint64_t d = sw_digest_symbols(par, p_hat);
  if (seeds.size() < K) return std::nullopt;
  if (compressed.size() != K * d + (Kp - K) * par.lc) return std::nullopt;

  SwDecodeInfo local;
  local.verbatim = (d == par.lc);

  QaryWord ypad = bank.apply(noisy, perm_index);
  ypad.sym.resize(K * par.lc, 0);

  const auto& field = GaloisField::of_order(
      static_cast<std::uint64_t>(std::llround(std::pow(double(par.q), double(par.lc)))));
  RSCode rs(field, static_cast<std::uint32_t>(K), static_cast<std::uint32_t>(Kp));

  std::vector<std::uint32_t> received(Kp, 0);
  std::vector<std::uint32_t> erasures;
  QaryWord noisy_chunk(par.q, par.lc), digest(par.q, d);
  for (std::uint64_t i = 0; i < K; ++i) {
    std::copy(compressed.sym.begin() + long(i * d),
              compressed.sym.begin() + long(i * d + d), digest.sym.begin());
    if (local.verbatim) {
      received[i] = pack_chunk(digest, 0, par.lc, par.q);
      continue;
    }
    std::copy(ypad.sym.begin() + long(i * par.lc),
              ypad.sym.begin() + long((i + 1) * par.lc), noisy_chunk.sym.begin());
    bool amb = false;
    const auto cand = sw_chunk_recover(par, hashes, noisy_chunk, digest, i,
                                       seeds[i], p_hat, &amb);
    if (cand) {
      received[i] = pack_chunk(*cand, 0, par.lc, par.q);
    } else {
      erasures.push_back(static_cast<std::uint32_t>(i));
      ++local.erasures;
      if (amb) ++local.ambiguous;
    }
  }
  const std::uint64_t parity_base = K * d;
  QaryWord parity_sym(par.q, par.lc);
  for (std::uint64_t i = K; i < Kp; ++i) {
    std::copy(compressed.sym.begin() + long(parity_base + (i - K) * par.lc),
              compressed.sym.begin() + long(parity_base + (i - K + 1) * par.lc),
              parity_sym.sym.begin());
    received[i] = pack_chunk(parity_sym, 0, par.lc, par.q);
  }

  local.rs_used = true;
  const auto decoded = rs.decode(received, erasures);
  if (info) *info = local;
  if (!decoded) return std::nullopt;

  QaryWord padded(par.q, K * par.lc);
  for (std::uint64_t i = 0; i < K; ++i)
    unpack_chunk((*decoded)[i], padded, i * par.lc, par.lc, par.q);

  // Honesty checks: recovered chunks must reproduce the digests, and the
  // padding must be the zeros the encoder appended.
  QaryWord chunk(par.q, par.lc);
  for (std::uint64_t i = 0; i < K; ++i) {
    std::copy(padded.sym.begin() + long(i * par.lc),
              padded.sym.begin() + long((i + 1) * par.lc), chunk.sym.begin());
    std::copy(compressed.sym.begin() + long(i * d),
              compressed.sym.begin() + long(i * d + d), digest.sym.begin());
    if (local.verbatim) {
      if (!(chunk == digest)) return std::nullopt;
    } else if (hashes.eval_packed(chunk, i, seeds[i], d) != digest) {
      return std::nullopt;
    }
  }
  for (std::uint64_t i = N; i < K * par.lc; ++i)
    if (padded.sym[i] != 0) return std::nullopt;

  padded.sym.resize(N);
  return bank.invert(padded, perm_index);
}

}  // namespace qfl
