#include "qfl/gf.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace qfl {

namespace {

// Primitive polynomials over GF(2), poly bitmask with bit i = coeff of x^i.
const std::uint32_t kBinPrimitive[17] = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,  0x11D,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};

// Polynomial helpers over GF(p), coefficient vectors (index = degree).
using Poly = std::vector<std::uint32_t>;

Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  // b is monic of degree db.
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint32_t lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    if (lead != 0) {
      for (std::size_t i = 0; i <= db; ++i) {
        std::uint64_t v = a[shift + i] + std::uint64_t(p) * p - std::uint64_t(lead) * b[i] % p;
        a[shift + i] = static_cast<std::uint32_t>(v % p);
      }
    }
    a.pop_back();
  }
  while (a.size() > 1 && a.back() == 0) a.pop_back();
  return a;
}

bool poly_is_zero(const Poly& a) {
  for (std::uint32_t c : a)
    if (c != 0) return false;
  return true;
}

Poly poly_from_index(std::uint64_t idx, std::uint32_t p, std::uint32_t deg) {
  // Monic polynomial of given degree whose lower coefficients are the base-p
  // digits of idx.
  Poly f(deg + 1, 0);
  for (std::uint32_t i = 0; i < deg; ++i) {
    f[i] = static_cast<std::uint32_t>(idx % p);
    idx /= p;
  }
  f[deg] = 1;
  return f;
}

bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::uint32_t deg = static_cast<std::uint32_t>(f.size() - 1);
  if (deg == 0) return false;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (std::uint32_t d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly g = poly_from_index(idx, p, d);
      if (poly_is_zero(poly_mod(f, g, p))) return false;
    }
  }
  return true;
}

std::uint32_t poly_to_value(const Poly& f, std::uint32_t p) {
  std::uint32_t v = 0;
  for (std::size_t i = f.size(); i-- > 0;) v = v * p + f[i];
  return v;
}

}  // namespace

GaloisField::GaloisField(std::uint32_t p, std::uint32_t m) : p_(p), m_(m) {
  if (p < 2 || m < 1) throw std::domain_error("GaloisField: bad (p, m)");
  std::uint64_t Q = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    Q *= p;
    if (Q > (1u << 21)) throw std::domain_error("GaloisField: order too large");
  }
  Q_ = static_cast<std::uint32_t>(Q);

  exp_.assign(2 * (Q_ - 1), 0);
  log_.assign(Q_, 0);

  if (p == 2 && m <= 16) {
    // Generator alpha = x; multiplication by x is shift + conditional xor.
    const std::uint32_t poly = kBinPrimitive[m];
    std::uint32_t v = 1;
    for (std::uint32_t i = 0; i < Q_ - 1; ++i) {
      exp_[i] = v;
      log_[v] = i;
      v <<= 1;
      if (v & Q_) v ^= poly;
    }
    if (v != 1) throw std::logic_error("GaloisField: primitive polynomial table broken");
  } else {
    // Deterministic search: smallest irreducible monic polynomial of degree m,
    // then the smallest primitive element.
    Poly irr;
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < m; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly f = poly_from_index(idx, p, m);
      if (is_irreducible(f, p)) {
        irr = f;
        break;
      }
    }
    if (irr.empty()) throw std::logic_error("GaloisField: no irreducible polynomial found");

    // Multiplication mod irr via schoolbook polynomials (setup only).
    auto mul_poly = [&](std::uint32_t a, std::uint32_t b) {
      Poly fa(m, 0), fb(m, 0), prod(2 * m - 1, 0);
      std::uint32_t ta = a, tb = b;
      for (std::uint32_t i = 0; i < m; ++i) {
        fa[i] = ta % p;
        ta /= p;
        fb[i] = tb % p;
        tb /= p;
      }
      for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = 0; j < m; ++j)
          prod[i + j] = static_cast<std::uint32_t>(
              (prod[i + j] + std::uint64_t(fa[i]) * fb[j]) % p);
      return poly_to_value(poly_mod(prod, irr, p), p);
    };

    // Find a primitive element by brute-force order check.
    std::uint32_t gen = 0;
    for (std::uint32_t cand = 2; cand < Q_; ++cand) {
      std::uint32_t v = cand;
      std::uint32_t ord = 1;
      while (v != 1) {
        v = mul_poly(v, cand);
        ++ord;
        if (ord > Q_) throw std::logic_error("GaloisField: order search diverged");
      }
      if (ord == Q_ - 1) {
        gen = cand;
        break;
      }
    }
    if (gen == 0) throw std::logic_error("GaloisField: no primitive element found");

    std::uint32_t v = 1;
    for (std::uint32_t i = 0; i < Q_ - 1; ++i) {
      exp_[i] = v;
      log_[v] = i;
      v = mul_poly(v, gen);
    }
  }
  for (std::uint32_t i = 0; i < Q_ - 1; ++i) exp_[Q_ - 1 + i] = exp_[i];
}

std::uint32_t GaloisField::add_slow(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t out = 0, mul = 1;
  while (a != 0 || b != 0) {
    out += ((a + b) % p_) * mul;
    a /= p_;
    b /= p_;
    mul *= p_;
  }
  return out;
}

std::uint32_t GaloisField::sub_slow(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t out = 0, mul = 1;
  while (a != 0 || b != 0) {
    out += ((a % p_ + p_ - b % p_) % p_) * mul;
    a /= p_;
    b /= p_;
    mul *= p_;
  }
  return out;
}

std::uint32_t GaloisField::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("GaloisField::inv(0)");
  return exp_[(Q_ - 1) - log_[a]];
}

std::uint32_t GaloisField::pow(std::uint32_t a, std::uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  const std::uint64_t le = (std::uint64_t(log_[a]) * (e % (Q_ - 1))) % (Q_ - 1);
  return exp_[static_cast<std::uint32_t>(le)];
}

std::uint32_t GaloisField::alpha_pow(std::int64_t e) const {
  const std::int64_t n = Q_ - 1;
  std::int64_t r = e % n;
  if (r < 0) r += n;
  return exp_[static_cast<std::uint32_t>(r)];
}

std::uint32_t GaloisField::log(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("GaloisField::log(0)");
  return log_[a];
}

const GaloisField& GaloisField::get(std::uint32_t p, std::uint32_t m) {
  static std::mutex mx;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, GaloisField*> cache;
  std::lock_guard<std::mutex> lock(mx);
  auto key = std::make_pair(p, m);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, new GaloisField(p, m)).first;
  return *it->second;
}

bool GaloisField::factor_prime_power(std::uint64_t Q, std::uint32_t& p, std::uint32_t& m) {
  if (Q < 2) return false;
  std::uint64_t base = 0;
  for (std::uint64_t d = 2; d * d <= Q; ++d) {
    if (Q % d == 0) {
      base = d;
      break;
    }
  }
  if (base == 0) {
    p = static_cast<std::uint32_t>(Q);
    m = 1;
    return true;
  }
  std::uint32_t mm = 0;
  std::uint64_t v = Q;
  while (v % base == 0) {
    v /= base;
    ++mm;
  }
  if (v != 1) return false;
  // base must itself be prime (it is the smallest divisor, hence prime).
  p = static_cast<std::uint32_t>(base);
  m = mm;
  return true;
}

const GaloisField& GaloisField::of_order(std::uint64_t Q) {
  std::uint32_t p = 0, m = 0;
  if (!factor_prime_power(Q, p, m))
    throw std::domain_error("GaloisField::of_order: not a prime power");
  return get(p, m);
}

}  // namespace qfl
