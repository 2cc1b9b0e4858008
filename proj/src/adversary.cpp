// =============================================================================
// Adversary strategies: identity, i.i.d. symbol corruption, a front burst,
// planned corruption spans, and a greedy stage-aware spender.
// =============================================================================
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qfl/channel.hpp"

namespace qfl {

namespace {

// -----------------------------------------------------------------------------
// Null
// -----------------------------------------------------------------------------

class NullAdversary final : public Adversary {
 public:
  Symbol corrupt(std::uint64_t, Symbol x) override { return x; }
};

// -----------------------------------------------------------------------------
// I.i.d. corruption
// -----------------------------------------------------------------------------

class UniformIidAdversary final : public Adversary {
 public:
  UniformIidAdversary(std::uint32_t q, double p, std::uint64_t seed)
      : q_(q), rng_(seed), hit_(p), offset_(1, q - 1) {
    if (p < 0.0 || p > 1.0)
      throw std::domain_error("uniform_iid adversary: p outside [0, 1]");
  }

  Symbol corrupt(std::uint64_t, Symbol x) override {
    if (!hit_(rng_)) return x;
    const std::uint32_t off = offset_(rng_);
    return static_cast<Symbol>((x + off) % q_);
  }

 private:
  std::uint32_t q_;
  std::mt19937_64 rng_;
  std::bernoulli_distribution hit_;
  std::uniform_int_distribution<std::uint32_t> offset_;
};

// -----------------------------------------------------------------------------
// Front burst
// -----------------------------------------------------------------------------

class BurstFrontAdversary final : public Adversary {
 public:
  BurstFrontAdversary(std::uint32_t q, std::uint64_t num) : q_(q), num_(num) {}

  Symbol corrupt(std::uint64_t pos, Symbol x) override {
    if (pos >= num_) return x;
    return static_cast<Symbol>((x + 1) % q_);
  }

 private:
  std::uint32_t q_;
  std::uint64_t num_;
};

// -----------------------------------------------------------------------------
// Planned spans
// -----------------------------------------------------------------------------

class GridExtremalAdversary final : public Adversary {
 public:
  GridExtremalAdversary(std::uint32_t q, std::vector<CorruptionSpan> spans)
      : q_(q), spans_(std::move(spans)) {
    std::uint64_t prev_end = 0;
    for (const auto& sp : spans_) {
      if (sp.start < prev_end)
        throw std::invalid_argument("grid adversary: spans overlap or unsorted");
      prev_end = sp.start + sp.count;
    }
  }

  Symbol corrupt(std::uint64_t pos, Symbol x) override {
    // Positions arrive in increasing order, so a single cursor suffices.
    while (cursor_ < spans_.size() &&
           pos >= spans_[cursor_].start + spans_[cursor_].count)
      ++cursor_;
    if (cursor_ < spans_.size() && pos >= spans_[cursor_].start)
      return static_cast<Symbol>((x + 1) % q_);
    return x;
  }

 private:
  std::uint32_t q_;
  std::vector<CorruptionSpan> spans_;
  std::size_t cursor_ = 0;
};

// -----------------------------------------------------------------------------
// Greedy stage-aware spender
// -----------------------------------------------------------------------------

class StageGreedyAdversary final : public Adversary {
 public:
  StageGreedyAdversary(std::uint32_t q, std::uint64_t first_stage_len,
                       std::uint64_t budget, double fraction, StageTracker next)
      : q_(q),
        budget_left_(budget),
        fraction_(fraction),
        next_(std::move(next)),
        stage_len_(first_stage_len) {
    if (first_stage_len == 0)
      throw std::domain_error("stage-greedy adversary: empty first stage");
    if (fraction <= 0.0 || fraction > 1.0)
      throw std::domain_error("stage-greedy adversary: fraction outside (0, 1]");
    begin_stage();
  }

  Symbol corrupt(std::uint64_t pos, Symbol x) override {
    while (pos >= stage_start_ + stage_len_) advance_stage();
    if (pos - stage_start_ < target_ && budget_left_ > 0) {
      --budget_left_;
      ++flips_;
      return static_cast<Symbol>((x + 1) % q_);
    }
    return x;
  }

 private:
  void begin_stage() {
    const double want = std::ceil(fraction_ * double(budget_left_));
    target_ = std::min<std::uint64_t>(stage_len_,
                                      static_cast<std::uint64_t>(want));
    flips_ = 0;
  }

  void advance_stage() {
    stage_start_ += stage_len_;
    std::uint64_t nl = next_ ? next_(stage_len_, flips_) : 0;
    if (nl == 0) {
      nl = ~std::uint64_t(0) - stage_start_;  // rest of the session
      next_ = nullptr;
    }
    stage_len_ = nl;
    begin_stage();
  }

  std::uint32_t q_;
  std::uint64_t budget_left_;
  double fraction_;
  StageTracker next_;
  std::uint64_t stage_start_ = 0;
  std::uint64_t stage_len_;
  std::uint64_t target_ = 0;
  std::uint64_t flips_ = 0;
};

}  // namespace

std::unique_ptr<Adversary> make_null_adversary() {
  return std::make_unique<NullAdversary>();
}

std::unique_ptr<Adversary> make_uniform_iid_adversary(std::uint32_t q, double p,
                                                      std::uint64_t seed) {
  return std::make_unique<UniformIidAdversary>(q, p, seed);
}

std::unique_ptr<Adversary> make_burst_front_adversary(std::uint32_t q,
                                                      std::uint64_t num_corrupt) {
  return std::make_unique<BurstFrontAdversary>(q, num_corrupt);
}

std::unique_ptr<Adversary> make_grid_extremal_adversary(
    std::uint32_t q, std::vector<CorruptionSpan> spans) {
  return std::make_unique<GridExtremalAdversary>(q, std::move(spans));
}

std::unique_ptr<Adversary> make_stage_greedy_adversary(
    std::uint32_t q, std::uint64_t first_stage_len, std::uint64_t budget,
    double fraction, StageTracker next_len) {
  return std::make_unique<StageGreedyAdversary>(q, first_stage_len, budget,
                                                fraction, std::move(next_len));
}

}  // namespace qfl
