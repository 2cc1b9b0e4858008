/// @file common.hpp
/// @brief Shared basic types: q-ary words, exact arithmetic aliases,
///        deterministic seed derivation, small integer helpers.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace qfl {

using Symbol = std::uint16_t;
using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Thrown when a configuration or parameter set is outside the regime the
/// scheme supports (empty feasible intervals, impossible code sizes, ...).
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// A word over the alphabet {0, ..., q-1}.
struct QaryWord {
  std::uint32_t q = 2;
  std::vector<Symbol> sym;

  QaryWord() = default;
  QaryWord(std::uint32_t q_, std::size_t len) : q(q_), sym(len, 0) {}
  QaryWord(std::uint32_t q_, std::vector<Symbol> s) : q(q_), sym(std::move(s)) {}

  std::size_t size() const { return sym.size(); }
  Symbol& operator[](std::size_t i) { return sym[i]; }
  Symbol operator[](std::size_t i) const { return sym[i]; }
  bool operator==(const QaryWord& o) const { return q == o.q && sym == o.sym; }

  /// Number of nonzero symbols.
  std::size_t weight() const {
    std::size_t w = 0;
    for (Symbol s : sym) w += (s != 0);
    return w;
  }
};

/// Symbol-wise difference a - b mod q (the error word left by an additive channel).
inline QaryWord qsub(const QaryWord& a, const QaryWord& b) {
  QaryWord d(a.q, a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    d.sym[i] = static_cast<Symbol>((a.sym[i] + a.q - b.sym[i]) % a.q);
  return d;
}

/// Symbol-wise sum a + b mod q.
inline QaryWord qadd(const QaryWord& a, const QaryWord& b) {
  QaryWord s(a.q, a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    s.sym[i] = static_cast<Symbol>((a.sym[i] + b.sym[i]) % a.q);
  return s;
}

// ---------------------------------------------------------------------------
// Deterministic seed derivation.
//
// Every random stream in the project is an mt19937_64 seeded by
//   derive_seed(master, tag, a, b)
// where `tag` is a fixed ASCII label for the stream's role and (a, b) are
// integer coordinates (trial index, stage index, chunk index, ...). The
// derivation is two rounds of the splitmix64 finalizer over the FNV-1a hash
// of the tag mixed with the coordinates, so streams are independent of
// scheduling order and reproducible across runs and platforms.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(master ^ fnv1a(tag));
  h = splitmix64(h ^ (a * 0x9E3779B97F4A7C15ULL));
  h = splitmix64(h ^ (b * 0xC2B2AE3D27D4EB4FULL));
  return h;
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::string_view tag,
                                std::uint64_t a = 0, std::uint64_t b = 0) {
  return std::mt19937_64(derive_seed(master, tag, a, b));
}

// ------------------------------------------------------------ small helpers

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

/// Exact ceiling of a nonnegative rational.
inline std::int64_t ceil_rational(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  BigInt quo = num / den;             // truncates toward zero; r >= 0 here
  if (quo * den != num) quo += 1;
  return static_cast<std::int64_t>(quo);
}

/// Exact floor of a nonnegative rational.
inline std::int64_t floor_rational(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  return static_cast<std::int64_t>(num / den);
}

}  // namespace qfl
