#pragma once

// Uplink NOMA channel: BPSK, per-user random interleavers, superposition of
// user signals, AWGN / block-Rayleigh gains. One frame carries one codeword
// per user; fading gains are redrawn per frame.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "noma/gf2.hpp"
#include "noma/perm.hpp"
#include "noma/rng.hpp"

namespace noma {

using cplx = std::complex<double>;

enum class ChannelKind { awgn, rayleigh };

// Per-user average receive powers with sum 1; adjacent users keep a fixed
// power ratio (user 0 strongest).
struct PowerProfile {
  std::vector<double> rho_sq;

  static PowerProfile geometric(std::size_t n_users, double ratio = 4.0) {
    if (n_users == 0) throw std::invalid_argument("PowerProfile: need at least one user");
    PowerProfile p;
    p.rho_sq.resize(n_users);
    double w = 1.0, total = 0.0;
    for (std::size_t u = n_users; u-- > 0;) {
      p.rho_sq[u] = w;
      total += w;
      w *= ratio;
    }
    for (double& v : p.rho_sq) v /= total;
    return p;
  }
};

// SNR = sum_u rho_u^2 / sigma^2 with unit total power.
inline double snr_to_sigma_sq(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

struct ChannelRealization {
  std::vector<cplx> h;  // per-user complex gains
  double sigma_sq = 0.0;  // total complex noise variance
  std::vector<Perm> interleavers;  // one per user, known at the receiver
};

// bit 0 -> +1, bit 1 -> -1
inline std::vector<double> modulate_bpsk(const BitVec& c) {
  std::vector<double> x(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) x[i] = c.get(i) ? -1.0 : 1.0;
  return x;
}

// Uniformly random permutation of n positions (Fisher-Yates), deterministic
// in the seed.
inline Perm make_interleaver(std::uint64_t seed, std::size_t n) {
  RngStream rng(seed);
  Perm p = identity_perm(n);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

inline ChannelRealization draw_channel(const PowerProfile& profile, double sigma_sq,
                                       ChannelKind kind, std::size_t n, RngStream& rng) {
  ChannelRealization ch;
  ch.sigma_sq = sigma_sq;
  ch.h.resize(profile.rho_sq.size());
  for (std::size_t u = 0; u < ch.h.size(); ++u) {
    const double rho = std::sqrt(profile.rho_sq[u]);
    if (kind == ChannelKind::awgn) {
      ch.h[u] = cplx(rho, 0.0);
    } else {
      // rho * CN(0,1): each real dimension N(0, 1/2)
      const double re = rng.gaussian() * std::sqrt(0.5);
      const double im = rng.gaussian() * std::sqrt(0.5);
      ch.h[u] = cplx(rho * re, rho * im);
    }
  }
  ch.interleavers.reserve(profile.rho_sq.size());
  for (std::size_t u = 0; u < profile.rho_sq.size(); ++u)
    ch.interleavers.push_back(make_interleaver(rng.next(), n));
  return ch;
}

struct Frame {
  std::vector<BitVec> tx_bits;       // N_u x k (filled by the caller)
  std::vector<BitVec> tx_codewords;  // N_u x n
  std::vector<cplx> r;               // received superposition
};

// r = sum_u h_u * x_u + w, with x_u the interleaved BPSK stream of user u
// and w_i ~ CN(0, sigma_sq) (sigma_sq/2 per real dimension).
inline Frame transmit(const std::vector<BitVec>& codewords, const ChannelRealization& ch,
                      RngStream& rng) {
  if (codewords.size() != ch.h.size())
    throw std::invalid_argument("transmit: user count mismatch");
  const std::size_t n = codewords.empty() ? 0 : codewords[0].size();
  Frame f;
  f.tx_codewords = codewords;
  f.r.assign(n, cplx(0.0, 0.0));
  for (std::size_t u = 0; u < codewords.size(); ++u) {
    if (codewords[u].size() != n) throw std::invalid_argument("transmit: codeword length mismatch");
    const BitVec ci = apply_perm(ch.interleavers[u], codewords[u]);
    for (std::size_t i = 0; i < n; ++i) f.r[i] += ch.h[u] * (ci.get(i) ? -1.0 : 1.0);
  }
  const double sd = std::sqrt(ch.sigma_sq / 2.0);
  for (std::size_t i = 0; i < n; ++i)
    f.r[i] += cplx(sd * rng.gaussian(), sd * rng.gaussian());
  return f;
}

}  // namespace noma
