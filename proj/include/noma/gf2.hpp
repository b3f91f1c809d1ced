#pragma once

// GF(2) vectors and matrices packed into 64-bit words (LSB-first within a
// word). Row XOR is the hot operation: re-encoding cost is dominated by it.

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace noma {

inline std::size_t words_for_bits(std::size_t n) { return (n + 63) / 64; }

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : w_(words_for_bits(n), 0), n_(n) {}

  static BitVec from_string(std::string_view s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        v.set(i, true);
      else if (s[i] != '0')
        throw std::invalid_argument("BitVec: expected '0'/'1'");
    }
    return v;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }

  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  void clear() {
    for (auto& w : w_) w = 0;
  }

  void xor_with(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  }

  void xor_words(std::span<const std::uint64_t> words) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= words[i];
  }

  int weight() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  std::span<const std::uint64_t> words() const { return w_; }
  std::span<std::uint64_t> words() { return w_; }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }

 private:
  std::vector<std::uint64_t> w_;
  std::size_t n_ = 0;
};

inline int hamming_distance(const BitVec& a, const BitVec& b) {
  int c = 0;
  auto aw = a.words(), bw = b.words();
  for (std::size_t i = 0; i < aw.size(); ++i) c += std::popcount(aw[i] ^ bw[i]);
  return c;
}

class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_(words_for_bits(cols)), w_(rows * wpr_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (w_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
  }

  void set(std::size_t r, std::size_t c, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (c & 63);
    if (v)
      w_[r * wpr_ + (c >> 6)] |= m;
    else
      w_[r * wpr_ + (c >> 6)] &= ~m;
  }

  std::span<const std::uint64_t> row(std::size_t r) const {
    return {w_.data() + r * wpr_, wpr_};
  }

  void xor_rows(std::size_t dst, std::size_t src) {
    auto* d = w_.data() + dst * wpr_;
    const auto* s = w_.data() + src * wpr_;
    for (std::size_t i = 0; i < wpr_; ++i) d[i] ^= s[i];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    auto* pa = w_.data() + a * wpr_;
    auto* pb = w_.data() + b * wpr_;
    for (std::size_t i = 0; i < wpr_; ++i) std::swap(pa[i], pb[i]);
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) {
      const bool va = get(r, a), vb = get(r, b);
      set(r, a, vb);
      set(r, b, va);
    }
  }

  BitVec row_bits(std::size_t r) const {
    BitVec v(cols_);
    auto src = row(r);
    auto dst = v.words();
    for (std::size_t i = 0; i < wpr_; ++i) dst[i] = src[i];
    return v;
  }

  bool row_is_zero(std::size_t r) const {
    auto s = row(r);
    for (auto w : s)
      if (w) return false;
    return true;
  }

  // Rank over GF(2); works on a scratch copy. If dependent_row is non-null
  // and the rank is deficient, it receives the index of the first row that
  // reduces to zero.
  std::size_t rank(std::size_t* dependent_row = nullptr) const {
    Gf2Matrix m = *this;
    std::vector<std::size_t> origin(rows_);
    for (std::size_t i = 0; i < rows_; ++i) origin[i] = i;
    std::size_t rk = 0;
    for (std::size_t c = 0; c < cols_ && rk < rows_; ++c) {
      std::size_t p = rk;
      while (p < rows_ && !m.get(p, c)) ++p;
      if (p == rows_) continue;
      m.swap_rows(rk, p);
      std::swap(origin[rk], origin[p]);
      for (std::size_t r = 0; r < rows_; ++r)
        if (r != rk && m.get(r, c)) m.xor_rows(r, rk);
      ++rk;
    }
    if (dependent_row && rk < rows_) {
      for (std::size_t r = rk; r < rows_; ++r)
        if (m.row_is_zero(r)) {
          *dependent_row = origin[r];
          break;
        }
    }
    return rk;
  }

  friend bool operator==(const Gf2Matrix& a, const Gf2Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.w_ == b.w_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace noma
