#pragma once

// Ordered-statistics decoding: reliability ordering, test-error-pattern
// enumeration, re-encoding, weighted Hamming distance, and the hard-output
// order-m decoder.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "noma/code.hpp"
#include "noma/common.hpp"
#include "noma/gf2.hpp"
#include "noma/perm.hpp"

namespace noma {

// y_i = 1 for ell_i < 0, else 0 (zero LLR maps to bit 0).
inline BitVec hard_decision(const LlrVec& ell) {
  BitVec y(ell.size());
  for (std::size_t i = 0; i < ell.size(); ++i)
    if (ell[i] < 0.0) y.set(i, true);
  return y;
}

// Per-decode ordered workspace: pi1 sorts by reliability (descending,
// stable, ties broken by lower original index), pi2 comes out of Gaussian
// elimination. comb = pi2∘pi1 maps ordered positions to original ones.
struct OrderedState {
  Perm pi1;
  SystematicForm sys;
  Perm comb;
  LlrVec ell_tilde;
  std::vector<double> alpha_tilde;
  BitVec y_tilde;

  std::size_t n() const { return ell_tilde.size(); }
  std::size_t k() const { return sys.G_tilde.rows(); }
};

inline OrderedState order_received(const Code& code, const LlrVec& ell) {
  if (ell.size() != code.n) throw std::invalid_argument("order_received: LLR length mismatch");
  LlrVec l = ell;
  clamp_llr(l);

  OrderedState st;
  st.pi1 = identity_perm(code.n);
  std::stable_sort(st.pi1.begin(), st.pi1.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::abs(l[a]) > std::abs(l[b]);
  });
  st.sys = gaussian_eliminate(permute_cols(st.pi1, code.G));
  st.comb = compose(st.pi1, st.sys.pi2);
  st.ell_tilde = apply_perm(st.comb, l);
  st.alpha_tilde.resize(code.n);
  for (std::size_t i = 0; i < code.n; ++i) st.alpha_tilde[i] = std::abs(st.ell_tilde[i]);
  st.y_tilde = hard_decision(st.ell_tilde);
  return st;
}

// Test error pattern over the k most reliable basis positions.
struct Tep {
  BitVec pattern;
  int weight = 0;
};

inline std::uint64_t tep_count(std::size_t k, int m) {
  std::uint64_t total = 0, c = 1;
  for (int j = 0; j <= m && j <= static_cast<int>(k); ++j) {
    total += c;
    c = c * (k - static_cast<std::size_t>(j)) / (static_cast<std::uint64_t>(j) + 1);
  }
  return total;
}

// Streams supports of weight 0, 1, ..., m; within a weight class supports
// come in lexicographic order over MRB positions (most reliable first).
class TepEnumerator {
 public:
  TepEnumerator(std::size_t k, int m) : k_(k), m_(std::min<int>(m, static_cast<int>(k))) {}

  // Fills `support` with the next pattern's positions; false when exhausted.
  bool next_support(std::vector<int>& support) {
    if (done_) return false;
    if (fresh_) {
      fresh_ = false;
      support.clear();  // weight-0 pattern
      return true;
    }
    if (!advance()) {
      done_ = true;
      return false;
    }
    support = supp_;
    return true;
  }

  std::optional<Tep> next_tep() {
    std::vector<int> s;
    if (!next_support(s)) return std::nullopt;
    Tep t;
    t.pattern = BitVec(k_);
    t.weight = static_cast<int>(s.size());
    for (int i : s) t.pattern.set(static_cast<std::size_t>(i), true);
    return t;
  }

 private:
  bool advance() {
    if (!supp_.empty()) {
      // next combination of the current weight, lexicographic
      int w = static_cast<int>(supp_.size());
      for (int i = w - 1; i >= 0; --i) {
        if (supp_[static_cast<std::size_t>(i)] < static_cast<int>(k_) - (w - i)) {
          ++supp_[static_cast<std::size_t>(i)];
          for (int j = i + 1; j < w; ++j)
            supp_[static_cast<std::size_t>(j)] = supp_[static_cast<std::size_t>(j - 1)] + 1;
          return true;
        }
      }
    }
    // move to the next weight class
    const int w = static_cast<int>(supp_.size()) + 1;
    if (w > m_ || w > static_cast<int>(k_)) return false;
    supp_.resize(static_cast<std::size_t>(w));
    std::iota(supp_.begin(), supp_.end(), 0);
    return true;
  }

  std::size_t k_;
  int m_;
  std::vector<int> supp_;
  bool fresh_ = true;
  bool done_ = false;
};

inline std::vector<Tep> enumerate_teps(std::size_t k, int m) {
  std::vector<Tep> out;
  TepEnumerator en(k, m);
  while (auto t = en.next_tep()) out.push_back(std::move(*t));
  return out;
}

// c_e = (y_B ⊕ e) G_tilde = [y_B ⊕ e | (y_B ⊕ e) P].
inline BitVec reencode(const OrderedState& st, const BitVec& e) {
  if (e.size() != st.k()) throw std::invalid_argument("reencode: TEP length mismatch");
  BitVec c(st.n());
  for (std::size_t i = 0; i < st.k(); ++i)
    if (st.y_tilde.get(i) != e.get(i)) c.xor_words(st.sys.G_tilde.row(i));
  return c;
}

inline BitVec reencode(const OrderedState& st, const Tep& e) { return reencode(st, e.pattern); }

// Weighted Hamming distance: sum of reliabilities over disagreeing positions.
inline double whd(const BitVec& c, const BitVec& y, std::span<const double> alpha) {
  if (c.size() != y.size() || alpha.size() != c.size())
    throw std::invalid_argument("whd: length mismatch");
  double d = 0.0;
  auto cw = c.words(), yw = y.words();
  for (std::size_t w = 0; w < cw.size(); ++w) {
    std::uint64_t diff = cw[w] ^ yw[w];
    while (diff) {
      const int b = std::countr_zero(diff);
      d += alpha[w * 64 + static_cast<std::size_t>(b)];
      diff &= diff - 1;
    }
  }
  return d;
}

namespace detail {

// Shared workspace for the TEP sweep: zero-TEP codeword plus incremental
// row XORs, so one pattern costs O(weight) word operations.
struct ReencodeSweep {
  const OrderedState& st;
  BitVec c0;       // codeword with e = 0
  BitVec scratch;  // current codeword

  explicit ReencodeSweep(const OrderedState& s) : st(s), c0(s.n()), scratch(s.n()) {
    for (std::size_t i = 0; i < s.k(); ++i)
      if (s.y_tilde.get(i)) c0.xor_words(s.sys.G_tilde.row(i));
  }

  const BitVec& codeword_for(const std::vector<int>& support) {
    scratch = c0;
    for (int i : support) scratch.xor_words(st.sys.G_tilde.row(static_cast<std::size_t>(i)));
    return scratch;
  }
};

}  // namespace detail

// Hard-output order-m OSD: minimum-WHD codeword over all TEPs of weight <= m,
// ties broken by the earliest-enumerated pattern.
inline BitVec osd_decode(const Code& code, const LlrVec& ell, int order) {
  OrderedState st = order_received(code, ell);
  detail::ReencodeSweep sweep(st);

  BitVec best;
  double best_d = 0.0;
  bool have_best = false;
  TepEnumerator en(code.k, order);
  std::vector<int> supp;
  while (en.next_support(supp)) {
    const BitVec& cw = sweep.codeword_for(supp);
    const double d = whd(cw, st.y_tilde, st.alpha_tilde);
    if (!have_best || d < best_d) {
      best = cw;
      best_d = d;
      have_best = true;
    }
  }
  return apply_perm(invert_perm(st.comb), best);
}

}  // namespace noma
