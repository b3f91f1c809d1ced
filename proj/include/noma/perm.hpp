#pragma once

// Position permutations. A Perm p maps new positions to old ones:
// apply(p, v)[i] = v[p[i]].

#include <cstdint>
#include <numeric>
#include <vector>

#include "noma/gf2.hpp"

namespace noma {

using Perm = std::vector<std::uint32_t>;

inline Perm identity_perm(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

inline bool is_identity(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

inline Perm invert_perm(const Perm& p) {
  Perm inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<std::uint32_t>(i);
  return inv;
}

// first, then second: apply(compose(first, second), v) == apply(second, apply(first, v))
inline Perm compose(const Perm& first, const Perm& second) {
  Perm c(second.size());
  for (std::size_t i = 0; i < second.size(); ++i) c[i] = first[second[i]];
  return c;
}

template <typename T>
std::vector<T> apply_perm(const Perm& p, const std::vector<T>& v) {
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = v[p[i]];
  return out;
}

inline BitVec apply_perm(const Perm& p, const BitVec& v) {
  BitVec out(v.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    if (v.get(p[i])) out.set(i, true);
  return out;
}

inline Gf2Matrix permute_cols(const Perm& p, const Gf2Matrix& m) {
  Gf2Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m.get(r, p[c])) out.set(r, c, true);
  return out;
}

}  // namespace noma
