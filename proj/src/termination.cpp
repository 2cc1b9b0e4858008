// =============================================================================
// Concatenated termination code with an exactly-certified corruption budget.
// =============================================================================
#include "qfl/termination.hpp"

#include <bit>
#include <random>
#include <stdexcept>

#include "qfl/gf.hpp"
#include "qfl/rs.hpp"

namespace qfl {

namespace {

std::uint64_t ipow64(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TerminationCode::TerminationCode(const TerminationParams& par) : par_(par) {
  if (par.q < 2) throw std::domain_error("termination: q must be >= 2");
  if (par.inner_dim == 0 || par.inner_dist == 0)
    throw std::domain_error("termination: degenerate inner code");
  if (par.inner_dist > par.inner_len)
    throw std::domain_error("termination: distance exceeds block length");
  const bool packed = (par.q == 2 && par.inner_len <= 64);
  if (!packed && par.inner_len > 4096)
    throw std::domain_error("termination: inner block too long");
  codebook_size_ = ipow64(par.q, par.inner_dim);
  if (codebook_size_ > (std::uint64_t(1) << 20))
    throw std::domain_error("termination: inner codebook too large");

  const std::uint64_t M = codebook_size_;
  const std::uint32_t L = par.inner_len;
  const std::uint32_t k = par.inner_dim;
  // Symbol arithmetic for the linear combination; any prime-power alphabet.
  const GaloisField& gfq = GaloisField::of_order(par.q);

  // Random linear codebooks: the minimum distance equals the minimum weight
  // over nonzero codewords, so far fewer bad events per draw than a random
  // nonlinear codebook would produce.
  for (draws_ = 0; draws_ < par.max_seed_draws; ++draws_) {
    auto rng = make_rng(par.master_seed, "term-inner", draws_);
    std::vector<Symbol> gen(std::size_t(k) * L);
    for (auto& g : gen) g = static_cast<Symbol>(rng() % par.q);

    symbols_.assign(M * L, 0);
    std::uint32_t dmin = L + 1;
    for (std::uint64_t msg = 1; msg < M; ++msg) {
      std::uint64_t rem = msg;
      Symbol* cw = &symbols_[msg * L];
      for (std::uint32_t row = 0; row < k; ++row) {
        const auto digit = static_cast<std::uint32_t>(rem % par.q);
        rem /= par.q;
        if (digit == 0) continue;
        const Symbol* g = &gen[std::size_t(row) * L];
        for (std::uint32_t i = 0; i < L; ++i)
          cw[i] = static_cast<Symbol>(
              gfq.add(cw[i], gfq.mul(digit, g[i])));
      }
      std::uint32_t w = 0;
      for (std::uint32_t i = 0; i < L; ++i) w += (cw[i] != 0);
      if (w < dmin) {
        dmin = w;
        if (dmin < par.inner_dist) break;
      }
    }
    if (dmin >= par.inner_dist) {
      dist_ = dmin;
      if (packed) {
        packed_.assign(M, 0);
        for (std::uint64_t msg = 0; msg < M; ++msg)
          for (std::uint32_t i = 0; i < L; ++i)
            packed_[msg] |= std::uint64_t(symbols_[msg * L + i] & 1) << i;
        symbols_.clear();
      }
      return;
    }
  }
  throw infeasible_error("termination: no codebook met the distance target");
}

QaryWord TerminationCode::inner_codeword(std::uint64_t msg) const {
  if (msg >= codebook_size_)
    throw std::out_of_range("termination: message index out of range");
  QaryWord w(par_.q, par_.inner_len);
  if (!packed_.empty()) {
    for (std::uint32_t i = 0; i < par_.inner_len; ++i)
      w.sym[i] = static_cast<Symbol>((packed_[msg] >> i) & 1);
  } else {
    for (std::uint32_t i = 0; i < par_.inner_len; ++i)
      w.sym[i] = symbols_[msg * par_.inner_len + i];
  }
  return w;
}

std::optional<TerminationLayout> TerminationCode::try_layout(
    std::uint64_t content_len, std::uint64_t n_total) const {
  TerminationLayout lay;
  if (content_len == 0) {
    // Empty residual: the whole span is ignorable filler, so any corruption
    // count is tolerated.
    lay.slack = n_total;
    lay.radius = (dist_ - 1) / 2;
    lay.certified = n_total;
    return lay;
  }
  lay.k_out = ceil_div(content_len, par_.inner_dim);
  const std::uint64_t field_cap = codebook_size_ - 1;
  lay.n_out = n_total / par_.inner_len;
  if (lay.n_out > field_cap) lay.n_out = field_cap;
  lay.slack = n_total - lay.n_out * par_.inner_len;
  if (lay.n_out <= lay.k_out) return std::nullopt;
  lay.radius = (dist_ - 1) / 2;
  // Spoiling a block (wrong symbol: damage 2; erasure: damage 1) costs at
  // least radius+1 corruptions, and errors-and-erasures decoding survives
  // damage up to the parity count.
  const std::uint64_t parity = lay.n_out - lay.k_out;
  lay.certified = (lay.radius + 1) * (parity / 2 + 1) - 1;
  return lay;
}

TerminationLayout TerminationCode::layout(std::uint64_t content_len,
                                          std::uint64_t n_total) const {
  const auto lay = try_layout(content_len, n_total);
  if (!lay.has_value())
    throw infeasible_error("termination: residual exceeds session capacity");
  return *lay;
}

std::uint64_t TerminationCode::region_distance_floor(const QaryWord& noisy,
                                                     std::uint64_t content_len,
                                                     std::uint64_t cap) const {
  const auto lay = try_layout(content_len, noisy.size());
  if (!lay.has_value()) return cap + 1;
  const std::uint32_t L = par_.inner_len;
  std::uint64_t floor = 0;
  for (std::uint64_t b = 0; b < lay->n_out; ++b) {
    std::uint64_t best_d = L;
    if (!packed_.empty()) {
      std::uint64_t r = 0;
      for (std::uint32_t i = 0; i < L; ++i)
        r |= std::uint64_t(noisy.sym[b * L + i] & 1) << i;
      for (std::uint64_t msg = 0; msg < codebook_size_; ++msg) {
        const auto d = std::uint64_t(std::popcount(r ^ packed_[msg]));
        if (d < best_d) best_d = d;
      }
    } else {
      for (std::uint64_t msg = 0; msg < codebook_size_; ++msg) {
        std::uint64_t d = 0;
        for (std::uint32_t i = 0; i < L && d < best_d; ++i)
          d += (noisy.sym[b * L + i] != symbols_[msg * L + i]);
        if (d < best_d) best_d = d;
      }
    }
    floor += best_d;
    if (floor > cap) return cap + 1;
  }
  for (std::uint64_t i = lay->n_out * L; i < noisy.size(); ++i) {
    floor += (noisy.sym[i] != 0);  // encoder leaves the slack tail zero
    if (floor > cap) return cap + 1;
  }
  return floor;
}

QaryWord TerminationCode::encode(const QaryWord& residual,
                                 std::uint64_t n_total) const {
  if (residual.q != par_.q)
    throw std::invalid_argument("termination: alphabet mismatch");
  const TerminationLayout lay = layout(residual.size(), n_total);
  if (residual.size() == 0) return QaryWord(par_.q, n_total);  // filler only
  const std::uint32_t m = par_.inner_dim;
  const std::uint32_t L = par_.inner_len;

  // Pack residual symbols into outer field elements, zero-padded.
  std::vector<std::uint32_t> data(lay.k_out, 0);
  for (std::uint64_t i = 0; i < lay.k_out; ++i) {
    std::uint32_t v = 0;
    for (std::uint32_t j = m; j-- > 0;) {
      const std::uint64_t pos = i * m + j;
      v = v * par_.q + (pos < residual.size() ? residual.sym[pos] : 0);
    }
    data[i] = v;
  }
  const auto& field = GaloisField::of_order(codebook_size_);
  RSCode rs(field, static_cast<std::uint32_t>(lay.k_out),
            static_cast<std::uint32_t>(lay.n_out));
  const std::vector<std::uint32_t> code = rs.encode(data);

  QaryWord out(par_.q, n_total);
  for (std::uint64_t b = 0; b < lay.n_out; ++b) {
    const std::uint64_t msg = code[b];
    if (!packed_.empty()) {
      const std::uint64_t w = packed_[msg];
      for (std::uint32_t i = 0; i < L; ++i)
        out.sym[b * L + i] = static_cast<Symbol>((w >> i) & 1);
    } else {
      for (std::uint32_t i = 0; i < L; ++i)
        out.sym[b * L + i] = symbols_[msg * L + i];
    }
  }
  return out;  // trailing slack stays zero
}

std::uint64_t TerminationCode::inner_decode(const QaryWord& noisy,
                                            std::size_t offset, bool& ok) const {
  const std::uint32_t L = par_.inner_len;
  const std::uint64_t radius = (dist_ - 1) / 2;
  std::uint64_t best = 0, best_d = L + 1;
  if (!packed_.empty()) {
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < L; ++i)
      r |= std::uint64_t(noisy.sym[offset + i] & 1) << i;
    for (std::uint64_t msg = 0; msg < codebook_size_; ++msg) {
      const auto d = std::uint64_t(std::popcount(r ^ packed_[msg]));
      if (d < best_d) {
        best_d = d;
        best = msg;
      }
    }
  } else {
    for (std::uint64_t msg = 0; msg < codebook_size_; ++msg) {
      std::uint64_t d = 0;
      for (std::uint32_t i = 0; i < L && d < best_d; ++i)
        d += (noisy.sym[offset + i] != symbols_[msg * L + i]);
      if (d < best_d) {
        best_d = d;
        best = msg;
      }
    }
  }
  ok = best_d <= radius;
  return best;
}

std::optional<QaryWord> TerminationCode::decode(const QaryWord& noisy,
                                                std::uint64_t content_len) const {
  if (noisy.q != par_.q)
    throw std::invalid_argument("termination: alphabet mismatch");
  if (content_len == 0) return QaryWord(par_.q, 0);  // filler carries nothing
  TerminationLayout lay;
  try {
    lay = layout(content_len, noisy.size());
  } catch (const infeasible_error&) {
    return std::nullopt;
  }
  const std::uint32_t m = par_.inner_dim;
  const std::uint32_t L = par_.inner_len;

  std::vector<std::uint32_t> received(lay.n_out, 0);
  std::vector<std::uint32_t> erasures;
  for (std::uint64_t b = 0; b < lay.n_out; ++b) {
    bool ok = false;
    const std::uint64_t msg = inner_decode(noisy, b * L, ok);
    if (ok)
      received[b] = static_cast<std::uint32_t>(msg);
    else
      erasures.push_back(static_cast<std::uint32_t>(b));
  }
  const auto& field = GaloisField::of_order(codebook_size_);
  RSCode rs(field, static_cast<std::uint32_t>(lay.k_out),
            static_cast<std::uint32_t>(lay.n_out));
  const auto decoded = rs.decode(received, erasures);
  if (!decoded) return std::nullopt;

  QaryWord out(par_.q, content_len);
  for (std::uint64_t i = 0; i < lay.k_out; ++i) {
    std::uint32_t v = (*decoded)[i];
    for (std::uint32_t j = 0; j < m; ++j) {
      const std::uint64_t pos = i * m + j;
      const auto s = static_cast<Symbol>(v % par_.q);
      v /= par_.q;
      if (pos < content_len) {
        out.sym[pos] = s;
      } else if (s != 0) {
        return std::nullopt;  // padding must decode to zero
      }
    }
  }
  return out;
}

}  // namespace qfl
