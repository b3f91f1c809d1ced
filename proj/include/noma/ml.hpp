#pragma once

// Exhaustive maximum-likelihood references: single-user decoding over the
// whole codebook and joint decoding over the product codebook of all users.
// Enumeration is guarded to test-scale dimensions.

#include <cstdint>
#include <limits>
#include <vector>

#include "noma/channel.hpp"
#include "noma/code.hpp"
#include "noma/osd.hpp"

namespace noma {

// Minimum-WHD (equivalently maximum-likelihood for BPSK/AWGN LLRs) codeword
// over all 2^k candidates; ties go to the lowest information-word value.
inline BitVec ml_decode_bruteforce(const Code& code, const LlrVec& ell) {
  if (code.k > 20) throw std::invalid_argument("ml_decode_bruteforce: k > 20 refused");
  if (ell.size() != code.n) throw std::invalid_argument("ml_decode_bruteforce: length mismatch");
  LlrVec l = ell;
  clamp_llr(l);
  const BitVec y = hard_decision(l);
  std::vector<double> alpha(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) alpha[i] = std::abs(l[i]);

  const auto book = enumerate_codebook(code);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < book.size(); ++v) {
    const double d = whd(book[v], y, alpha);
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return book[best];
}

// Joint exhaustive ML over all users' codebooks with the exact
// complex-Gaussian metric sum_i |r_i - sum_u h_u x_u,i|^2. Guarded to
// N_u * k <= 20 information bits in total.
inline std::vector<BitVec> joint_ml_decode(const Frame& frame, const ChannelRealization& ch,
                                           const Code& code) {
  const std::size_t n_users = ch.h.size();
  if (n_users * code.k > 20) throw std::invalid_argument("joint_ml_decode: product codebook too large");
  const std::size_t n = frame.r.size();

  // per-user scaled symbol tables in symbol (interleaved) order
  const auto book = enumerate_codebook(code);
  const std::size_t book_size = book.size();
  std::vector<std::vector<cplx>> sym(n_users, std::vector<cplx>(book_size * n));
  for (std::size_t u = 0; u < n_users; ++u) {
    for (std::size_t v = 0; v < book_size; ++v) {
      const BitVec ci = apply_perm(ch.interleavers[u], book[v]);
      for (std::size_t i = 0; i < n; ++i)
        sym[u][v * n + i] = ch.h[u] * (ci.get(i) ? -1.0 : 1.0);
    }
  }

  std::vector<std::size_t> idx(n_users, 0), best_idx(n_users, 0);
  double best_metric = std::numeric_limits<double>::infinity();
  std::vector<cplx> partial(n);
  // odometer over the product codebook
  auto evaluate = [&](auto&& self, std::size_t u, const std::vector<cplx>& acc) -> void {
    if (u == n_users) {
      double metric = 0.0;
      for (std::size_t i = 0; i < n; ++i) metric += std::norm(frame.r[i] - acc[i]);
      if (metric < best_metric) {
        best_metric = metric;
        best_idx = idx;
      }
      return;
    }
    std::vector<cplx> next(n);
    for (std::size_t v = 0; v < book_size; ++v) {
      idx[u] = v;
      for (std::size_t i = 0; i < n; ++i) next[i] = acc[i] + sym[u][v * n + i];
      self(self, u + 1, next);
    }
  };
  evaluate(evaluate, 0, partial);

  std::vector<BitVec> out(n_users);
  for (std::size_t u = 0; u < n_users; ++u) out[u] = book[best_idx[u]];
  return out;
}

}  // namespace noma
