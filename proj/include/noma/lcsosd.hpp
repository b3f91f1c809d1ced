#pragma once

// Low-complexity soft-output OSD: success-probability (SP) evaluation of
// codeword estimates, TEP discarding, early termination, and extrinsic LLR
// synthesis. All probability work happens in the log domain; with up to
// n - k = 48 factors the linear-domain products underflow.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "noma/common.hpp"
#include "noma/osd.hpp"

namespace noma {

// P(i) = (1 + exp(|ell_i|))^-1: probability the hard decision of ell_i is
// wrong. Value in (0, 0.5].
inline double bit_error_prob(double ell) { return logistic_neg(std::abs(ell)); }

// P(e) = prod_{e_i != 0} p_i * prod_{e_i = 0} (1 - p_i), log-domain.
inline double tep_prior(const Tep& e, std::span<const double> p) {
  double lp = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    lp += e.pattern.get(i) ? std::log(p[i]) : std::log1p(-p[i]);
  return std::exp(lp);
}

// Default discard statistic: the TEP prior normalised by the zero pattern's,
// prod_{i in supp(e)} p_i / (1 - p_i). True means skip without re-encoding;
// lambda_p = 0 disables discarding.
inline bool discard_check(const Tep& e, std::span<const double> p, double lambda_p) {
  double ls = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (e.pattern.get(i)) ls += std::log(p[i]) - std::log1p(-p[i]);
  return std::exp(ls) <= lambda_p;
}

// Optional replacement for the discard statistic: given a TEP support and
// the MRB bit-error probabilities, return the value compared against
// lambda_p.
using DiscardStat =
    std::function<double(std::span<const int> support, std::span<const double> p_err_mrb)>;

struct LcSosdParams {
  int order = 2;
  double lambda_s = 0.99;  // success threshold in [0.5, 1]; 1 disables early exit
  double lambda_p = 1e-5;  // discard threshold; 0 disables discarding
  DiscardStat discard_stat;  // empty -> normalised-prior default

  void validate() const {
    if (lambda_s < 0.5 || lambda_s > 1.0)
      throw std::invalid_argument("LcSosdParams: lambda_s must be in [0.5, 1]");
    if (lambda_p < 0.0) throw std::invalid_argument("LcSosdParams: lambda_p must be >= 0");
    if (order < 0) throw std::invalid_argument("LcSosdParams: order must be >= 0");
  }
};

// Per-decode SP evaluator. Bit-error probabilities are derived once from the
// ordered LLRs; each SP costs O(weight + |parity disagreement|) additions
// because log(p_i / (1 - p_i)) = -alpha_i.
class SpCalculator {
 public:
  explicit SpCalculator(const OrderedState& st)
      : k_(st.k()), n_(st.n()), alpha_(st.alpha_tilde) {
    double base_mrb = 0.0, base_par = 0.0;
    log_1mp_.resize(n_);
    p_err_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      log_1mp_[i] = -log1p_exp(-alpha_[i]);  // log(1 - P(i))
      p_err_[i] = bit_error_prob(alpha_[i]);
      if (i < k_)
        base_mrb += log_1mp_[i];
      else
        base_par += log_1mp_[i];
    }
    base_mrb_ = base_mrb;
    base_par_ = base_par;
    k_minus_n_ln2_ =
        (static_cast<double>(k_) - static_cast<double>(n_)) * kLn2;
    parity_mask_.assign(words_for_bits(n_), ~std::uint64_t{0});
    for (std::size_t i = 0; i < k_; ++i)
      parity_mask_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    if (n_ % 64 != 0) parity_mask_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::span<const double> p_err_mrb() const { return {p_err_.data(), k_}; }

  // log SP from the two alpha sums: over the TEP support (MRB) and over the
  // parity positions where the estimate disagrees with y.
  double log_sp(double sum_alpha_support, double sum_alpha_parity_diff) const {
    const double log_pe = base_mrb_ - sum_alpha_support;
    const double a = log1m_exp(log_pe) + k_minus_n_ln2_ - log_pe -
                     (base_par_ - sum_alpha_parity_diff);
    return -log1p_exp(a);
  }

  double sum_alpha_support(std::span<const int> support) const {
    double s = 0.0;
    for (int i : support) s += alpha_[static_cast<std::size_t>(i)];
    return s;
  }

  double sum_alpha_parity_diff(const BitVec& cw, const BitVec& y) const {
    double s = 0.0;
    auto c = cw.words(), yw = y.words();
    for (std::size_t w = 0; w < c.size(); ++w) {
      std::uint64_t diff = (c[w] ^ yw[w]) & parity_mask_[w];
      while (diff) {
        s += alpha_[w * 64 + static_cast<std::size_t>(std::countr_zero(diff))];
        diff &= diff - 1;
      }
    }
    return s;
  }

 private:
  std::size_t k_, n_;
  std::vector<double> alpha_;
  std::vector<double> log_1mp_;
  std::vector<double> p_err_;
  std::vector<std::uint64_t> parity_mask_;
  double base_mrb_ = 0.0, base_par_ = 0.0, k_minus_n_ln2_ = 0.0;
};

// SP of one codeword estimate; c_e must be reencode(st, e).
inline double success_prob(const Tep& e, const BitVec& c_e, const OrderedState& st) {
  SpCalculator calc(st);
  std::vector<int> supp;
  for (std::size_t i = 0; i < st.k(); ++i)
    if (e.pattern.get(i)) supp.push_back(static_cast<int>(i));
  return std::exp(
      calc.log_sp(calc.sum_alpha_support(supp), calc.sum_alpha_parity_diff(c_e, st.y_tilde)));
}

// Best-SP bookkeeping of Algorithm-style per-position lists. Kept in the
// log domain; -inf marks "no codeword with this bit value seen yet".
struct SpTracker {
  std::vector<double> log_p1, log_p0;  // best log SP per position, bit 1 / 0
  double log_p_max = -std::numeric_limits<double>::infinity();
  BitVec c_op;  // ordered-domain best estimate
  std::uint64_t n_teps_evaluated = 0;
  std::uint64_t n_teps_discarded = 0;

  explicit SpTracker(std::size_t n)
      : log_p1(n, -std::numeric_limits<double>::infinity()),
        log_p0(n, -std::numeric_limits<double>::infinity()),
        zeros_(2 * n) {}

  // First-evaluated TEP wins exact SP ties for c_op.
  void record(double lsp, const BitVec& cw) {
    ++n_teps_evaluated;
    if (lsp > log_p_max || n_teps_evaluated == 1) {
      log_p_max = lsp;
      c_op = cw;
    }
    const std::size_t n = log_p1.size();
    for (std::size_t i = 0; i < n; ++i) {
      double& slot = cw.get(i) ? log_p1[i] : log_p0[i];
      if (lsp >= slot) {
        if (slot == -std::numeric_limits<double>::infinity()) --zeros_;
        slot = lsp;
      }
    }
  }

  bool lists_positive() const { return zeros_ == 0; }

  double p_max() const { return std::exp(log_p_max); }

 private:
  std::size_t zeros_;
};

struct SoftDecision {
  LlrVec delta;  // extrinsic LLRs, original bit order
  BitVec c_op;   // best codeword estimate, original bit order
  double gamma = 0.0;  // decoding quality = final P_max
  std::uint64_t n_teps = 0;  // re-encoded TEP count
  std::uint64_t n_teps_discarded = 0;
  bool terminated_early = false;
};

// Order-m soft-output decode with SP-based early termination and TEP
// discarding. lambda_s = 1 together with lambda_p = 0 reproduces the plain
// soft-output decoder: every TEP of weight <= m is re-encoded.
inline SoftDecision lc_sosd_decode(const Code& code, const LlrVec& ell,
                                   const LcSosdParams& params) {
  params.validate();
  OrderedState st = order_received(code, ell);
  SpCalculator calc(st);
  SpTracker tracker(st.n());
  detail::ReencodeSweep sweep(st);

  const bool early_exit_enabled = params.lambda_s < 1.0;
  const double log_lambda_s = std::log(params.lambda_s);
  const bool discard_enabled = params.lambda_p > 0.0;
  const double log_lambda_p =
      discard_enabled ? std::log(params.lambda_p) : -std::numeric_limits<double>::infinity();

  bool stopped = false;
  TepEnumerator en(code.k, params.order);
  std::vector<int> supp;
  while (!stopped && en.next_support(supp)) {
    if (discard_enabled && !supp.empty()) {
      if (params.discard_stat) {
        if (params.discard_stat(supp, calc.p_err_mrb()) <= params.lambda_p) {
          ++tracker.n_teps_discarded;
          continue;
        }
      } else if (-calc.sum_alpha_support(supp) <= log_lambda_p) {
        ++tracker.n_teps_discarded;
        continue;
      }
    }
    const BitVec& cw = sweep.codeword_for(supp);
    const double lsp = calc.log_sp(calc.sum_alpha_support(supp),
                                   calc.sum_alpha_parity_diff(cw, st.y_tilde));
    tracker.record(lsp, cw);
    if (early_exit_enabled && tracker.log_p_max >= log_lambda_s && tracker.lists_positive())
      stopped = true;
  }

  // Positions never covered with the opposite bit value get a floor so the
  // output stays finite: p = p_max * 2^-40.
  const double log_floor = tracker.log_p_max - 40.0 * kLn2;
  LlrVec delta_tilde(st.n());
  for (std::size_t i = 0; i < st.n(); ++i) {
    const bool bit = tracker.c_op.get(i);
    double log_opp = bit ? tracker.log_p0[i] : tracker.log_p1[i];
    if (log_opp == -std::numeric_limits<double>::infinity()) log_opp = log_floor;
    const double mag = tracker.log_p_max - log_opp;
    delta_tilde[i] = (bit ? -mag : mag) - st.ell_tilde[i];
  }

  const Perm inv = invert_perm(st.comb);
  SoftDecision out;
  out.delta = apply_perm(inv, delta_tilde);
  out.c_op = apply_perm(inv, tracker.c_op);
  out.gamma = tracker.p_max();
  out.n_teps = tracker.n_teps_evaluated;
  out.n_teps_discarded = tracker.n_teps_discarded;
  out.terminated_early = stopped;
  return out;
}

}  // namespace noma
