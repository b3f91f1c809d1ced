#pragma once

// Shared numeric helpers and the library-wide LLR sign convention.
//
// Sign convention (used by every module): an LLR value ell refers to the
// BPSK symbol x = (-1)^c of bit c,
//
//     ell = log Pr(x = +1 | obs) / Pr(x = -1 | obs),
//
// so ell > 0 favours bit 0 and ell < 0 favours bit 1. Hard decisions map
// ell >= 0 to bit 0. Symbol means are E[x] = tanh(ell / 2). PIC, the
// decoders and the combiners all exchange LLRs in this one convention.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace noma {

using LlrVec = std::vector<double>;

// Global LLR magnitude bound; 50 nats is far beyond any operating SNR and
// keeps exp()/log() in Eq.-style probability formulas finite.
inline constexpr double kLlrMax = 50.0;

inline constexpr double kLn2 = 0.6931471805599453;

inline double clamp_llr(double v) { return std::clamp(v, -kLlrMax, kLlrMax); }

inline void clamp_llr(LlrVec& v) {
  for (double& x : v) x = clamp_llr(x);
}

// log(1 + e^x), stable for any x.
inline double log1p_exp(double x) {
  if (x > 36.0) return x;
  if (x < -36.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

// log(1 - e^x) for x < 0.
inline double log1m_exp(double x) {
  if (x >= 0.0) return -std::numeric_limits<double>::infinity();
  if (x > -kLn2) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

// 1 / (1 + e^x), stable.
inline double logistic_neg(double x) {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

// Clamped atanh: argument pulled into (-1, 1) so the result stays finite.
inline double atanh_clamped(double x) {
  constexpr double lim = 1.0 - 1e-12;
  return std::atanh(std::clamp(x, -lim, lim));
}

}  // namespace noma
