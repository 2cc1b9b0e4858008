#include "qfl/hashperm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <list>
#include <mutex>
#include <stdexcept>

namespace qfl {

// ---------------------------------------------------------------------------
// Hash family
// ---------------------------------------------------------------------------

namespace {

std::uint64_t pack_seed_word(const QaryWord& seed_r) {
  std::uint64_t v = 0;
  for (std::size_t i = seed_r.size(); i-- > 0;)
    v = v * seed_r.q + seed_r.sym[i];
  return v;
}

}  // namespace

QaryWord HashFamily::eval_packed(const QaryWord& content, std::uint64_t chunk_index,
                                 std::uint64_t seed_value, std::uint64_t out_len) const {
  // Absorb: sequential sponge over the content symbols.
  std::uint64_t state = derive_seed(master_seed, "chunk-hash", chunk_index, seed_value);
  for (Symbol s : content.sym)
    state = splitmix64(state ^ (std::uint64_t(s) + 0x9E3779B97F4A7C15ULL));
  // Squeeze: digest position j depends only on (state, j).
  QaryWord out(q, out_len);
  for (std::uint64_t j = 0; j < out_len; ++j)
    out.sym[j] = static_cast<Symbol>(splitmix64(state ^ ((j + 1) * 0xC2B2AE3D27D4EB4FULL)) % q);
  return out;
}

QaryWord HashFamily::eval(const QaryWord& content, std::uint64_t chunk_index,
                          const QaryWord& seed_r, std::uint64_t out_len) const {
  return eval_packed(content, chunk_index, pack_seed_word(seed_r), out_len);
}

std::uint64_t seed_word_symbols(std::uint64_t lc) {
  return static_cast<std::uint64_t>(std::floor(std::sqrt(double(lc))));
}

BadSeedStat count_bad_seeds(const HashFamily& fam, const QaryWord& x,
                            const QaryWord& s, std::uint64_t radius,
                            std::uint64_t chunk_index, std::uint64_t digest_len) {
  const std::uint32_t q = fam.q;
  const std::uint64_t lc = x.size();
  if (s.size() != lc) throw std::invalid_argument("count_bad_seeds: size mismatch");
  if (s.weight() > radius)
    throw std::invalid_argument("count_bad_seeds: error weight exceeds the radius");

  QaryWord y(q, lc);
  for (std::uint64_t i = 0; i < lc; ++i)
    y.sym[i] = static_cast<Symbol>((x.sym[i] + s.sym[i]) % q);

  const std::uint64_t slen = seed_word_symbols(lc);
  std::uint64_t num_seeds = 1;
  for (std::uint64_t i = 0; i < slen; ++i) num_seeds *= q;

  // Enumerate the ball B(y, radius) \ {x} exactly: for each support size d,
  // choose the d disturbed positions combinationally, then all nonzero
  // offsets from y at those positions.
  std::vector<QaryWord> ball;
  std::vector<std::uint64_t> positions;
  std::function<void(std::size_t, QaryWord&)> rec_val = [&](std::size_t k, QaryWord& w) {
    if (k == positions.size()) {
      if (!(w == x)) ball.push_back(w);
      return;
    }
    const std::uint64_t p = positions[k];
    for (std::uint32_t off = 1; off < q; ++off) {
      w.sym[p] = static_cast<Symbol>((y.sym[p] + off) % q);
      rec_val(k + 1, w);
    }
    w.sym[p] = y.sym[p];
  };
  for (std::uint64_t d = 0; d <= radius; ++d) {
    std::vector<std::uint64_t> comb(d);
    std::function<void(std::uint64_t, std::uint64_t)> choose = [&](std::uint64_t start,
                                                                   std::uint64_t k) {
      if (k == d) {
        positions = comb;
        QaryWord w = y;
        rec_val(0, w);
        return;
      }
      for (std::uint64_t i = start; i + (d - k) <= lc; ++i) {
        comb[k] = i;
        choose(i + 1, k + 1);
      }
    };
    choose(0, 0);
  }

  BadSeedStat stat;
  stat.num_seeds = num_seeds;
  stat.threshold = std::pow(double(q), std::sqrt(double(lc)) / 2.0);
  for (std::uint64_t seed = 0; seed < num_seeds; ++seed) {
    const QaryWord hx = fam.eval_packed(x, chunk_index, seed, digest_len);
    bool bad = false;
    for (const QaryWord& cand : ball) {
      if (fam.eval_packed(cand, chunk_index, seed, digest_len) == hx) {
        bad = true;
        break;
      }
    }
    if (bad) ++stat.num_bad;
  }
  return stat;
}

// ---------------------------------------------------------------------------
// Permutation bank
// ---------------------------------------------------------------------------

namespace {

struct PermKey {
  std::uint64_t master, jmod, domain;
  bool operator==(const PermKey& o) const {
    return master == o.master && jmod == o.jmod && domain == o.domain;
  }
};

std::mutex g_perm_mutex;
std::list<std::pair<PermKey, std::vector<std::uint32_t>>> g_perm_cache;
constexpr std::size_t kPermCacheCap = 64;

}  // namespace

PermBank::PermBank(std::uint64_t n, std::uint32_t c_p, std::uint64_t master_seed)
    : n_(n), c_p_(c_p), master_seed_(master_seed) {
  if (n < 2) throw std::domain_error("PermBank: domain too small");
  count_ = 1;
  for (std::uint32_t i = 0; i < c_p; ++i) count_ *= BigInt(n);
}

BigInt PermBank::storage_bits() const {
  std::uint64_t bits = 0;
  while ((1ull << bits) < n_) ++bits;  // ceil(log2 n)
  return count_ * BigInt(n_) * BigInt(bits);
}

std::vector<std::uint32_t> PermBank::get(const BigInt& j, std::uint64_t domain) const {
  if (domain < 1 || domain > n_)
    throw std::domain_error("PermBank::get: domain outside [1, n]");
  const std::uint64_t jmod = static_cast<std::uint64_t>(j % count_);
  const PermKey key{master_seed_, jmod, domain};
  {
    std::lock_guard<std::mutex> lock(g_perm_mutex);
    for (auto it = g_perm_cache.begin(); it != g_perm_cache.end(); ++it) {
      if (it->first == key) {
        g_perm_cache.splice(g_perm_cache.begin(), g_perm_cache, it);
        return g_perm_cache.front().second;
      }
    }
  }
  std::vector<std::uint32_t> pi(domain);
  for (std::uint64_t i = 0; i < domain; ++i) pi[i] = static_cast<std::uint32_t>(i);
  auto rng = make_rng(master_seed_, "perm-bank", jmod, domain);
  // Fisher-Yates, back to front.
  for (std::uint64_t i = domain; i-- > 1;) {
    const std::uint64_t k = rng() % (i + 1);
    std::swap(pi[i], pi[k]);
  }
  {
    std::lock_guard<std::mutex> lock(g_perm_mutex);
    g_perm_cache.emplace_front(key, pi);
    if (g_perm_cache.size() > kPermCacheCap) g_perm_cache.pop_back();
  }
  return pi;
}

QaryWord PermBank::apply(const QaryWord& w, const BigInt& j) const {
  const auto pi = get(j, w.size());
  QaryWord out(w.q, w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.sym[i] = w.sym[pi[i]];
  return out;
}

QaryWord PermBank::invert(const QaryWord& w, const BigInt& j) const {
  const auto pi = get(j, w.size());
  QaryWord out(w.q, w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.sym[pi[i]] = w.sym[i];
  return out;
}

// ---------------------------------------------------------------------------
// Quasi-uniformity
// ---------------------------------------------------------------------------

double quasi_uniform_fraction(const QaryWord& s, std::uint64_t lc, double eps_T) {
  if (lc == 0 || s.size() < lc) return 1.0;
  const std::uint32_t q = s.q;
  std::vector<double> global(q, 0.0);
  for (Symbol v : s.sym) global[v] += 1.0;
  for (auto& g : global) g /= double(s.size());

  const std::uint64_t chunks = s.size() / lc;  // complete chunks only
  std::uint64_t good = 0;
  std::vector<std::uint64_t> cnt(q);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    std::fill(cnt.begin(), cnt.end(), 0);
    for (std::uint64_t i = 0; i < lc; ++i) ++cnt[s.sym[c * lc + i]];
    bool ok = true;
    for (std::uint32_t v = 0; v < q && ok; ++v)
      ok = std::abs(double(cnt[v]) / double(lc) - global[v]) <= eps_T;
    good += ok;
  }
  return double(good) / double(chunks);
}

double quasi_uniform_eps(std::uint64_t lc) {
  return std::sqrt(6.0 * std::log(double(lc)) / double(lc));
}

}  // namespace qfl
