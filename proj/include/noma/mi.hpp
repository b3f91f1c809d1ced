#pragma once

// Mutual information of consistent-Gaussian LLRs: quadrature evaluation,
// its inverse, sample generation, and the time-average MI estimator used to
// characterise decoders.

#include <cmath>
#include <cstdint>
#include <vector>

#include "noma/common.hpp"
#include "noma/gf2.hpp"
#include "noma/rng.hpp"

namespace noma {

namespace detail {

// log2(1 + e^-xi), stable
inline double log2_1p_exp_neg(double xi) {
  return log1p_exp(-xi) / kLn2;
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(F&& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

// MI of an LLR that is Gaussian with variance sigma_ell_sq and mean
// sigma_ell_sq/2 times the transmitted symbol. Increasing in the variance,
// 0 at 0, 1 in the limit. Adaptive quadrature, absolute tolerance 1e-6.
inline double mi_of_variance(double sigma_ell_sq) {
  if (sigma_ell_sq <= 0.0) return 0.0;
  if (sigma_ell_sq > 6e3) return 1.0;
  const double mu = 0.5 * sigma_ell_sq;
  const double sd = std::sqrt(sigma_ell_sq);
  const double norm = 1.0 / std::sqrt(2.0 * 3.141592653589793 * sigma_ell_sq);
  auto f = [&](double xi) {
    const double z = (xi - mu) / sd;
    return norm * std::exp(-0.5 * z * z) * detail::log2_1p_exp_neg(xi);
  };
  const double loss = detail::integrate(f, mu - 14.0 * sd, mu + 14.0 * sd, 1e-7);
  const double mi = 1.0 - loss;
  return std::clamp(mi, 0.0, 1.0);
}

// Inverse of mi_of_variance by bisection.
inline double mi_inverse(double mi_target) {
  if (mi_target <= 0.0) return 0.0;
  if (mi_target >= 1.0) throw std::invalid_argument("mi_inverse: target must be < 1");
  double lo = 0.0, hi = 1.0;
  while (mi_of_variance(hi) < mi_target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (mi_of_variance(mid) < mi_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Consistent Gaussian LLR samples around the given bits: mean is the
// transmitted symbol times sigma_ell_sq/2, variance sigma_ell_sq.
inline LlrVec sample_gaussian_llr(const BitVec& bits, double sigma_ell_sq, RngStream& rng) {
  LlrVec ell(bits.size());
  const double sd = std::sqrt(std::max(sigma_ell_sq, 0.0));
  const double mean = 0.5 * sigma_ell_sq;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double x = bits.get(i) ? -1.0 : 1.0;
    ell[i] = mean * x + sd * rng.gaussian();
  }
  return ell;
}

// Streaming time-average MI estimator: I ~= 1 - mean(log2(1 + e^(-L*x)))
// with x the transmitted symbol. Assumption-free; agrees with
// mi_of_variance on consistent-Gaussian inputs.
class MiAccumulator {
 public:
  void add(double llr, bool bit) {
    loss_ += detail::log2_1p_exp_neg(bit ? -llr : llr);
    ++count_;
  }

  void add(const LlrVec& llrs, const BitVec& bits) {
    for (std::size_t i = 0; i < llrs.size(); ++i) add(llrs[i], bits.get(i));
  }

  std::uint64_t count() const { return count_; }

  // Samples below 1e4 make the estimate unreliable.
  bool reliable() const { return count_ >= 10000; }

  double value() const {
    if (count_ == 0) return 0.0;
    return std::clamp(1.0 - loss_ / static_cast<double>(count_), 0.0, 1.0);
  }

 private:
  double loss_ = 0.0;
  std::uint64_t count_ = 0;
};

inline double measure_mi(const LlrVec& llrs, const BitVec& bits, bool* reliable = nullptr) {
  MiAccumulator acc;
  acc.add(llrs, bits);
  if (reliable) *reliable = acc.reliable();
  return acc.value();
}

}  // namespace noma
