#include "qfl/enumcode.hpp"

#include <list>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "qfl/qary_math.hpp"

namespace qfl {

const BigInt PatternCodec::kZero = 0;

PatternCodec::PatternCodec(std::uint32_t q, std::uint64_t len, std::uint64_t w_max)
    : q_(q), len_(len), w_max_(w_max > len ? len : w_max) {
  qpow_.resize(len + 1);
  qpow_[0] = 1;
  for (std::uint64_t l = 1; l <= len; ++l) qpow_[l] = qpow_[l - 1] * q;

  // A(L, w) for w < min(L, w_max+1); A(L, w>=L) = q^L, A(L, w<0) = 0.
  table_.resize(len + 1);
  for (std::uint64_t l = 0; l <= len; ++l) {
    const std::uint64_t cols = std::min<std::uint64_t>(l, w_max_ + 1);
    table_[l].resize(cols);
    for (std::uint64_t w = 0; w < cols; ++w) {
      if (w == 0)
        table_[l][w] = 1;
      else
        table_[l][w] = suffix_count(l - 1, std::int64_t(w)) +
                       BigInt(q - 1) * suffix_count(l - 1, std::int64_t(w) - 1);
    }
  }
  count_ = suffix_count(len, std::int64_t(w_max_));
  index_symbols_ = 0;
  if (count_ > 1) {
    BigInt c = count_ - 1;
    while (c > 0) {
      c /= q_;
      ++index_symbols_;
    }
  }
}

const BigInt& PatternCodec::suffix_count(std::uint64_t rem_len, std::int64_t w) const {
  if (w < 0) return kZero;
  if (std::uint64_t(w) >= rem_len) return qpow_[rem_len];
  if (std::uint64_t(w) > w_max_) w = std::int64_t(w_max_);
  if (std::uint64_t(w) >= rem_len) return qpow_[rem_len];
  return table_[rem_len][std::size_t(w)];
}

BigInt PatternCodec::rank(const QaryWord& s) const {
  if (s.size() != len_) throw std::invalid_argument("PatternCodec::rank: length mismatch");
  BigInt r = 0;
  std::int64_t w_rem = std::int64_t(w_max_);
  for (std::uint64_t i = 0; i < len_; ++i) {
    const std::uint64_t rem = len_ - 1 - i;
    const Symbol c = s.sym[i];
    if (c > 0) {
      if (w_rem <= 0)
        throw std::invalid_argument("PatternCodec::rank: weight exceeds w_max");
      r += suffix_count(rem, w_rem);
      if (c > 1) r += BigInt(std::uint32_t(c - 1)) * suffix_count(rem, w_rem - 1);
      --w_rem;
    }
  }
  return r;
}

QaryWord PatternCodec::unrank(BigInt v) const {
  if (v < 0 || v >= count_) throw std::invalid_argument("PatternCodec::unrank: rank out of range");
  QaryWord s(q_, len_);
  std::int64_t w_rem = std::int64_t(w_max_);
  for (std::uint64_t i = 0; i < len_; ++i) {
    const std::uint64_t rem = len_ - 1 - i;
    const BigInt& zero_block = suffix_count(rem, w_rem);
    if (v < zero_block) {
      s.sym[i] = 0;
      continue;
    }
    v -= zero_block;
    const BigInt& nz_block = suffix_count(rem, w_rem - 1);
    BigInt k = v / nz_block;  // which nonzero symbol, 0-based
    s.sym[i] = static_cast<Symbol>(1 + std::uint64_t(k));
    v -= k * nz_block;
    --w_rem;
  }
  return s;
}

QaryWord PatternCodec::encode(const QaryWord& s) const {
  return value_to_index_word(rank(s), q_, index_symbols_);
}

bool PatternCodec::try_decode(const QaryWord& index_word, QaryWord& out) const {
  if (index_word.size() != index_symbols_)
    throw std::invalid_argument("PatternCodec::try_decode: index length mismatch");
  BigInt v = index_word_value(index_word);
  if (v >= count_) return false;
  out = unrank(std::move(v));
  return true;
}

// ---------------------------------------------------------------- LRU cache

namespace {

struct CacheEntry {
  std::tuple<std::uint32_t, std::uint64_t, std::uint64_t> key;
  std::shared_ptr<const PatternCodec> codec;
};

std::mutex g_cache_mutex;
std::list<CacheEntry> g_cache;  // front = most recently used
constexpr std::size_t kCacheCap = 16;

}  // namespace

std::shared_ptr<const PatternCodec> get_pattern_codec(std::uint32_t q,
                                                      std::uint64_t len,
                                                      std::uint64_t w_max) {
  if (w_max > len) w_max = len;
  const auto key = std::make_tuple(q, len, w_max);
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  for (auto it = g_cache.begin(); it != g_cache.end(); ++it) {
    if (it->key == key) {
      g_cache.splice(g_cache.begin(), g_cache, it);
      return g_cache.front().codec;
    }
  }
  auto codec = std::make_shared<const PatternCodec>(q, len, w_max);
  g_cache.push_front({key, codec});
  if (g_cache.size() > kCacheCap) g_cache.pop_back();
  return codec;
}

BigInt index_word_value(const QaryWord& w) {
  BigInt v = 0;
  for (std::size_t i = w.size(); i-- > 0;) v = v * w.q + w.sym[i];
  return v;
}

QaryWord value_to_index_word(BigInt v, std::uint32_t q, std::uint64_t len) {
  QaryWord w(q, len);
  for (std::uint64_t i = 0; i < len; ++i) {
    w.sym[i] = static_cast<Symbol>(std::uint64_t(v % q));
    v /= q;
  }
  if (v != 0) throw std::invalid_argument("value_to_index_word: value does not fit");
  return w;
}

}  // namespace qfl
