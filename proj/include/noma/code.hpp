#pragma once

// Binary linear codes: construction of extended BCH codes, generator-matrix
// file I/O, encoding, and Gaussian elimination with column permutation.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "noma/gf2.hpp"
#include "noma/perm.hpp"

namespace noma {

struct Code {
  std::size_t n = 0;  // codeword length
  std::size_t k = 0;  // information length
  std::optional<int> d_min;
  Gf2Matrix G;  // k x n generator matrix, rank k
};

// Systematic form G_tilde = [I_k | P] of a column-permuted input matrix.
// pi2 records the column swaps made during elimination (identity if the
// first k columns were already independent).
struct SystematicForm {
  Gf2Matrix G_tilde;
  Perm pi2;
};

inline BitVec encode(const Code& code, const BitVec& b) {
  if (b.size() != code.k) throw std::invalid_argument("encode: info length mismatch");
  BitVec c(code.n);
  for (std::size_t i = 0; i < code.k; ++i)
    if (b.get(i)) c.xor_words(code.G.row(i));
  return c;
}

// Gauss-Jordan reduction to [I_k | P]. When column r has no usable pivot in
// the remaining rows, it is swapped with the nearest later column that has
// one, and the swap is recorded in pi2.
inline SystematicForm gaussian_eliminate(const Gf2Matrix& Gp) {
  const std::size_t k = Gp.rows(), n = Gp.cols();
  Gf2Matrix m = Gp;
  Perm pi2 = identity_perm(n);
  for (std::size_t r = 0; r < k; ++r) {
    std::size_t pivot_row = k;
    for (std::size_t q = r; q < k; ++q)
      if (m.get(q, r)) {
        pivot_row = q;
        break;
      }
    if (pivot_row == k) {
      std::size_t c = r + 1;
      for (; c < n; ++c) {
        for (std::size_t q = r; q < k; ++q)
          if (m.get(q, c)) {
            pivot_row = q;
            break;
          }
        if (pivot_row != k) break;
      }
      if (pivot_row == k) throw std::invalid_argument("gaussian_eliminate: rank < k");
      m.swap_cols(r, c);
      std::swap(pi2[r], pi2[c]);
    }
    m.swap_rows(r, pivot_row);
    for (std::size_t q = 0; q < k; ++q)
      if (q != r && m.get(q, r)) m.xor_rows(q, r);
  }
  return {std::move(m), std::move(pi2)};
}

namespace detail {

// GF(2^m) log/antilog tables for the standard primitive polynomials
// x^3 + x + 1 and x^6 + x + 1.
struct Gf2m {
  int m;
  int q;  // 2^m
  std::vector<int> exp, log;

  explicit Gf2m(int m_) : m(m_), q(1 << m_), exp(2 * q), log(q) {
    const int prim = (m_ == 3) ? 0b1011 : 0b1000011;
    int x = 1;
    for (int i = 0; i < q - 1; ++i) {
      exp[i] = x;
      log[x] = i;
      x <<= 1;
      if (x & q) x ^= prim;
    }
    for (int i = q - 1; i < 2 * q; ++i) exp[i] = exp[i - (q - 1)];
  }

  int mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    return exp[log[a] + log[b]];
  }
};

// Narrow-sense BCH generator polynomial of degree n_minus_k over GF(2),
// built by accumulating cyclotomic cosets of 1, 2, 3, ... until the degree
// is reached. Coefficients returned lowest degree first.
inline std::vector<int> bch_generator_poly(const Gf2m& gf, int N, int n_minus_k) {
  std::vector<bool> used(N, false);
  std::vector<int> roots;
  for (int i = 1; static_cast<int>(roots.size()) < n_minus_k && i < N; ++i) {
    int j = i % N;
    if (j == 0 || used[j]) continue;
    std::vector<int> coset;
    while (!used[j]) {
      used[j] = true;
      coset.push_back(j);
      j = (2 * j) % N;
    }
    roots.insert(roots.end(), coset.begin(), coset.end());
  }
  if (static_cast<int>(roots.size()) != n_minus_k)
    throw std::logic_error("bch_generator_poly: coset degrees do not fit n-k");
  std::vector<int> g{1};  // over GF(2^m) during the product
  for (int r : roots) {
    const int a = gf.exp[r];
    std::vector<int> ng(g.size() + 1, 0);
    for (std::size_t d = 0; d < g.size(); ++d) {
      ng[d + 1] ^= g[d];
      ng[d] ^= gf.mul(g[d], a);
    }
    g = std::move(ng);
  }
  for (int c : g)
    if (c != 0 && c != 1) throw std::logic_error("bch_generator_poly: non-binary coefficient");
  return g;
}

}  // namespace detail

// Extended BCH code: narrow-sense BCH(n-1, k) from the standard primitive
// polynomial, plus an overall even-parity bit appended as position n.
// Supported (n, k): (8,4), (64,16), (64,24), (64,30), (64,36).
inline Code build_ebch(std::size_t n, std::size_t k) {
  struct Entry {
    std::size_t n, k;
    int d_min;
  };
  static constexpr std::array<Entry, 5> kSupported{{
      {8, 4, 4}, {64, 16, 24}, {64, 24, 16}, {64, 30, 14}, {64, 36, 12},
  }};
  const Entry* entry = nullptr;
  for (const auto& e : kSupported)
    if (e.n == n && e.k == k) entry = &e;
  if (!entry) {
    std::ostringstream os;
    os << "build_ebch: (" << n << "," << k
       << ") is not built-in; use load_code with a generator-matrix file";
    throw std::invalid_argument(os.str());
  }

  const int N = static_cast<int>(n) - 1;
  int m = 0;
  while ((1 << m) < static_cast<int>(n)) ++m;
  detail::Gf2m gf(m);
  const auto g = detail::bch_generator_poly(gf, N, N - static_cast<int>(k));

  Code code;
  code.n = n;
  code.k = k;
  code.d_min = entry->d_min;
  code.G = Gf2Matrix(k, n);
  for (std::size_t r = 0; r < k; ++r) {
    int weight = 0;
    for (std::size_t d = 0; d < g.size(); ++d)
      if (g[d]) {
        code.G.set(r, r + d, true);
        ++weight;
      }
    if (weight & 1) code.G.set(r, n - 1, true);  // even overall parity
  }
  return code;
}

// Generator-matrix text format: line 1 = "n k [d_min]"; lines 2..k+1 are
// n characters of '0'/'1' each.
inline Code load_code(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("load_code: empty input");
  std::istringstream hs(header);
  long long n = 0, k = 0, d = -1;
  if (!(hs >> n >> k)) throw std::invalid_argument("load_code: bad header, expected \"n k [d_min]\"");
  hs >> d;
  if (k < 1 || n <= k) throw std::invalid_argument("load_code: need 1 <= k < n");

  Code code;
  code.n = static_cast<std::size_t>(n);
  code.k = static_cast<std::size_t>(k);
  if (d > 0) code.d_min = static_cast<int>(d);
  code.G = Gf2Matrix(code.k, code.n);
  for (std::size_t r = 0; r < code.k; ++r) {
    std::string line;
    if (!std::getline(in, line)) {
      std::ostringstream os;
      os << "load_code: missing row " << (r + 1);
      throw std::invalid_argument(os.str());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != code.n) {
      std::ostringstream os;
      os << "load_code: row " << (r + 1) << " has " << line.size() << " symbols, expected " << code.n;
      throw std::invalid_argument(os.str());
    }
    for (std::size_t c = 0; c < code.n; ++c) {
      if (line[c] == '1')
        code.G.set(r, c, true);
      else if (line[c] != '0') {
        std::ostringstream os;
        os << "load_code: row " << (r + 1) << " has invalid symbol '" << line[c] << "'";
        throw std::invalid_argument(os.str());
      }
    }
  }
  std::size_t dep_row = 0;
  if (code.G.rank(&dep_row) != code.k) {
    std::ostringstream os;
    os << "load_code: generator matrix is rank-deficient, row " << (dep_row + 1)
       << " depends on the others";
    throw std::invalid_argument(os.str());
  }
  return code;
}

inline Code load_code(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("load_code: cannot open " + file.string());
  return load_code(in);
}

inline void save_code(const Code& code, std::ostream& out) {
  out << code.n << ' ' << code.k;
  if (code.d_min) out << ' ' << *code.d_min;
  out << '\n';
  for (std::size_t r = 0; r < code.k; ++r) out << code.G.row_bits(r).to_string() << '\n';
}

inline void save_code(const Code& code, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::invalid_argument("save_code: cannot open " + file.string());
  save_code(code, out);
}

// All 2^k codewords by information-word value; guarded for test-scale k.
inline std::vector<BitVec> enumerate_codebook(const Code& code, std::size_t max_k = 20) {
  if (code.k > max_k) throw std::invalid_argument("enumerate_codebook: k too large");
  std::vector<BitVec> book;
  book.reserve(std::size_t{1} << code.k);
  BitVec cw(code.n);
  book.push_back(cw);
  for (std::uint64_t v = 1; v < (std::uint64_t{1} << code.k); ++v) {
    // Gray-order walk: flip one generator row per step
    const std::uint64_t gray = v ^ (v >> 1);
    const std::uint64_t prev = (v - 1) ^ ((v - 1) >> 1);
    const int bit = std::countr_zero(gray ^ prev);
    cw.xor_words(code.G.row(static_cast<std::size_t>(bit)));
    book.push_back(cw);
  }
  // book[i] currently corresponds to gray(i); reorder to plain info value
  std::vector<BitVec> by_value(book.size());
  for (std::uint64_t v = 0; v < book.size(); ++v) by_value[v ^ (v >> 1)] = std::move(book[v]);
  return by_value;
}

}  // namespace noma
