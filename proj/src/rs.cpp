#include "qfl/rs.hpp"

#include <algorithm>
#include <stdexcept>

namespace qfl {

RSCode::RSCode(const GaloisField& field, std::uint32_t K, std::uint32_t Kprime)
    : F_(field), K_(K), Kp_(Kprime) {
  if (K == 0 || K >= Kprime)
    throw std::domain_error("RSCode: need 0 < K < K'");
  if (Kprime > F_.order() - 1)
    throw std::domain_error("RSCode: K' exceeds Q-1 for the chosen field");

  // g(x) = prod_{j=1}^{K'-K} (x - alpha^j)
  const std::uint32_t nsym = Kp_ - K_;
  gen_.assign(1, 1);
  for (std::uint32_t j = 1; j <= nsym; ++j) {
    const std::uint32_t root = F_.alpha_pow(j);
    std::vector<std::uint32_t> next(gen_.size() + 1, 0);
    for (std::size_t i = 0; i < gen_.size(); ++i) {
      next[i + 1] = F_.add(next[i + 1], gen_[i]);                    // x * gen
      next[i] = F_.sub(next[i], F_.mul(root, gen_[i]));              // - root * gen
    }
    gen_ = std::move(next);
  }
}

std::vector<std::uint32_t> RSCode::encode(const std::vector<std::uint32_t>& data) const {
  if (data.size() != K_) throw std::invalid_argument("RSCode::encode: data size != K");
  const std::uint32_t nsym = Kp_ - K_;
  // Long division of data(x) * x^nsym by g(x); rem holds the running
  // remainder coefficients, highest degree first.
  std::vector<std::uint32_t> rem(nsym, 0);  // rem[0] = highest coefficient
  for (std::uint32_t i = 0; i < K_; ++i) {
    const std::uint32_t feedback = F_.add(data[i], rem[0]);
    for (std::uint32_t j = 0; j + 1 < nsym; ++j)
      rem[j] = F_.sub(rem[j + 1], F_.mul(feedback, gen_[nsym - 1 - j]));
    rem[nsym - 1] = F_.sub(0, F_.mul(feedback, gen_[0]));
  }
  std::vector<std::uint32_t> out(Kp_);
  std::copy(data.begin(), data.end(), out.begin());
  // codeword = data(x)*x^nsym - rem(x); parity symbols are -rem, highest first.
  for (std::uint32_t j = 0; j < nsym; ++j) out[K_ + j] = F_.neg(rem[j]);
  return out;
}

bool RSCode::is_codeword(const std::vector<std::uint32_t>& word) const {
  if (word.size() != Kp_) return false;
  const std::uint32_t nsym = Kp_ - K_;
  for (std::uint32_t j = 1; j <= nsym; ++j) {
    const std::uint32_t x = F_.alpha_pow(j);
    std::uint32_t acc = 0;  // Horner: word[0] is the highest coefficient
    for (std::uint32_t i = 0; i < Kp_; ++i) acc = F_.add(F_.mul(acc, x), word[i]);
    if (acc != 0) return false;
  }
  return true;
}

std::optional<std::vector<std::uint32_t>> RSCode::decode(
    const std::vector<std::uint32_t>& received,
    const std::vector<std::uint32_t>& erasures) const {
  if (received.size() != Kp_)
    throw std::invalid_argument("RSCode::decode: word size != K'");
  const std::uint32_t nsym = Kp_ - K_;

  // Validate erasure list (dedup, range check).
  std::vector<std::uint32_t> er(erasures);
  std::sort(er.begin(), er.end());
  er.erase(std::unique(er.begin(), er.end()), er.end());
  if (!er.empty() && er.back() >= Kp_)
    throw std::invalid_argument("RSCode::decode: erasure position out of range");
  if (er.size() > nsym) return std::nullopt;
  const std::uint32_t e = static_cast<std::uint32_t>(er.size());

  // Syndromes S_j = r(alpha^j), j = 1..nsym (stored 0-based).
  std::vector<std::uint32_t> synd(nsym);
  bool all_zero = true;
  for (std::uint32_t j = 1; j <= nsym; ++j) {
    const std::uint32_t x = F_.alpha_pow(j);
    std::uint32_t acc = 0;
    for (std::uint32_t i = 0; i < Kp_; ++i) acc = F_.add(F_.mul(acc, x), received[i]);
    synd[j - 1] = acc;
    all_zero = all_zero && acc == 0;
  }
  if (all_zero) return received;

  // Erasure locators: api position i corresponds to degree Kp_-1-i.
  std::vector<std::uint32_t> eloc(er.size());
  for (std::size_t l = 0; l < er.size(); ++l) eloc[l] = F_.alpha_pow(Kp_ - 1 - er[l]);

  // Erasure locator polynomial Gamma(x) = prod (1 - X_l x), ascending coeffs.
  std::vector<std::uint32_t> gamma{1};
  for (std::uint32_t X : eloc) {
    std::vector<std::uint32_t> next(gamma.size() + 1, 0);
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      next[i] = F_.add(next[i], gamma[i]);
      next[i + 1] = F_.sub(next[i + 1], F_.mul(X, gamma[i]));
    }
    gamma = std::move(next);
  }

  // Forney syndromes: strip erasure contributions; effective length nsym - e.
  std::vector<std::uint32_t> fs(synd);
  for (std::uint32_t X : eloc)
    for (std::uint32_t t = 0; t + 1 < nsym; ++t)
      fs[t] = F_.sub(fs[t + 1], F_.mul(X, fs[t]));
  const std::uint32_t len_f = nsym - e;

  // Berlekamp-Massey on fs[0..len_f-1] for the error locator sigma.
  std::vector<std::uint32_t> sigma{1}, B{1};
  std::uint32_t L = 0, mshift = 1, bdisc = 1;
  for (std::uint32_t i = 0; i < len_f; ++i) {
    std::uint32_t delta = fs[i];
    for (std::uint32_t j = 1; j <= L && j < sigma.size(); ++j)
      delta = F_.add(delta, F_.mul(sigma[j], fs[i - j]));
    if (delta == 0) {
      ++mshift;
    } else if (2 * L <= i) {
      std::vector<std::uint32_t> T(sigma);
      const std::uint32_t coef = F_.div(delta, bdisc);
      if (sigma.size() < B.size() + mshift) sigma.resize(B.size() + mshift, 0);
      for (std::size_t j = 0; j < B.size(); ++j)
        sigma[j + mshift] = F_.sub(sigma[j + mshift], F_.mul(coef, B[j]));
      L = i + 1 - L;
      B = std::move(T);
      bdisc = delta;
      mshift = 1;
    } else {
      const std::uint32_t coef = F_.div(delta, bdisc);
      if (sigma.size() < B.size() + mshift) sigma.resize(B.size() + mshift, 0);
      for (std::size_t j = 0; j < B.size(); ++j)
        sigma[j + mshift] = F_.sub(sigma[j + mshift], F_.mul(coef, B[j]));
      ++mshift;
    }
  }
  while (sigma.size() > 1 && sigma.back() == 0) sigma.pop_back();
  if (sigma.size() - 1 != L || 2 * L > len_f) return std::nullopt;

  // Errata locator psi = sigma * Gamma.
  std::vector<std::uint32_t> psi(sigma.size() + gamma.size() - 1, 0);
  for (std::size_t i = 0; i < sigma.size(); ++i)
    for (std::size_t j = 0; j < gamma.size(); ++j)
      psi[i + j] = F_.add(psi[i + j], F_.mul(sigma[i], gamma[j]));
  const std::uint32_t errata = static_cast<std::uint32_t>(psi.size() - 1);

  // Chien search restricted to valid (shortened) positions.
  std::vector<std::uint32_t> pos, ploc;
  for (std::uint32_t i = 0; i < Kp_; ++i) {
    const std::uint32_t X = F_.alpha_pow(Kp_ - 1 - i);
    const std::uint32_t Xi = F_.inv(X);
    std::uint32_t acc = 0;  // psi(Xi), ascending Horner
    for (std::size_t j = psi.size(); j-- > 0;) acc = F_.add(F_.mul(acc, Xi), psi[j]);
    if (acc == 0) {
      pos.push_back(i);
      ploc.push_back(X);
    }
  }
  if (pos.size() != errata) return std::nullopt;

  // Errata evaluator Omega = (S * psi) mod x^nsym, S(x) = sum synd[j] x^j.
  std::vector<std::uint32_t> omega(nsym, 0);
  for (std::uint32_t i = 0; i < nsym; ++i) {
    std::uint32_t acc = 0;
    for (std::size_t j = 0; j <= i && j < psi.size(); ++j)
      acc = F_.add(acc, F_.mul(psi[j], synd[i - j]));
    omega[i] = acc;
  }

  // Formal derivative psi'.
  std::vector<std::uint32_t> dpsi;
  for (std::size_t j = 1; j < psi.size(); ++j) {
    const std::uint32_t scalar = static_cast<std::uint32_t>(j % F_.p());
    dpsi.push_back(F_.mul(psi[j], scalar));
  }

  // Forney: Y_l = -Omega(X_l^{-1}) / psi'(X_l^{-1}).
  std::vector<std::uint32_t> corrected(received);
  for (std::size_t l = 0; l < pos.size(); ++l) {
    const std::uint32_t Xi = F_.inv(ploc[l]);
    std::uint32_t onum = 0, oden = 0;
    for (std::size_t j = omega.size(); j-- > 0;) onum = F_.add(F_.mul(onum, Xi), omega[j]);
    for (std::size_t j = dpsi.size(); j-- > 0;) oden = F_.add(F_.mul(oden, Xi), dpsi[j]);
    if (oden == 0) return std::nullopt;
    const std::uint32_t Y = F_.neg(F_.div(onum, oden));
    corrected[pos[l]] = F_.sub(corrected[pos[l]], Y);
  }

  if (!is_codeword(corrected)) return std::nullopt;
  return corrected;
}

}  // namespace qfl
