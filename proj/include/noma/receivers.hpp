#pragma once

// Multi-user receivers: soft parallel interference cancellation with a
// decision-statistics combiner, the iterative joint-decoding receiver with
// decoding switch / decoding combiner, and the SIC baseline.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "noma/channel.hpp"
#include "noma/common.hpp"
#include "noma/lcsosd.hpp"
#include "noma/osd.hpp"

namespace noma {

// Soft symbol statistics from prior LLRs: mu = E[x] = tanh(eps/2),
// upsilon = Var[x] = 1 - mu^2.
inline void pic_prior_stats(const LlrVec& eps, std::vector<double>& mu,
                            std::vector<double>& upsilon) {
  mu.resize(eps.size());
  upsilon.resize(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    mu[i] = std::tanh(eps[i] / 2.0);
    upsilon[i] = 1.0 - mu[i] * mu[i];
  }
}

inline std::pair<std::vector<double>, std::vector<double>> pic_prior_stats(const LlrVec& eps) {
  std::pair<std::vector<double>, std::vector<double>> out;
  pic_prior_stats(eps, out.first, out.second);
  return out;
}

// Extrinsic LLR of user u after soft cancellation of the other users:
// interferer symbol estimates are subtracted in the numerator, their
// residual variances and the noise feed the denominator. The noise term is
// sigma_sq / (2 |h_u|^2): after rotation by 1/h_u the in-phase noise
// variance carries the gain, and the LLR scale must stay calibrated for the
// soft decoder. The symbol-domain statistics of all users must be aligned
// with r.
inline LlrVec pic_extrinsic(const std::vector<cplx>& r, const std::vector<cplx>& h,
                            const std::vector<std::vector<double>>& mu,
                            const std::vector<std::vector<double>>& upsilon, double sigma_sq,
                            std::size_t u) {
  const std::size_t n = r.size();
  const std::size_t n_users = h.size();
  if (std::abs(h[u]) == 0.0) throw std::invalid_argument("pic_extrinsic: zero channel gain");
  const cplx inv_hu = 1.0 / h[u];
  const double noise_var = sigma_sq / (2.0 * std::norm(h[u]));

  std::vector<double> ratio_sq(n_users, 0.0);
  for (std::size_t j = 0; j < n_users; ++j)
    if (j != u) {
      const double re = (h[j] * inv_hu).real();
      ratio_sq[j] = re * re;
    }

  LlrVec ell(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx cleaned = r[i];
    double den = noise_var;
    for (std::size_t j = 0; j < n_users; ++j) {
      if (j == u) continue;
      cleaned -= h[j] * mu[j][i];
      den += ratio_sq[j] * upsilon[j][i];
    }
    ell[i] = clamp_llr(2.0 * (inv_hu * cleaned).real() / den);
  }
  return ell;
}

namespace detail {

// Entry-wise 2*atanh(w*tanh(a/2) + (1-w)*tanh(b/2)), clamped. The factor 2
// makes the degenerate weights exact identities: w = 1 returns a, w = 0
// returns b.
inline LlrVec tanh_combine(const LlrVec& a, const LlrVec& b, double w) {
  if (w == 1.0) {
    LlrVec out = a;
    clamp_llr(out);
    return out;
  }
  if (w == 0.0) {
    LlrVec out = b;
    clamp_llr(out);
    return out;
  }
  LlrVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = w * std::tanh(a[i] / 2.0) + (1.0 - w) * std::tanh(b[i] / 2.0);
    out[i] = clamp_llr(2.0 * atanh_clamped(t));
  }
  return out;
}

}  // namespace detail

// Decision-statistics combiner across consecutive iterations.
inline LlrVec dsc_combine(const LlrVec& ell_t, const LlrVec& ell_prev, double beta) {
  if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("dsc_combine: beta must be in [0, 1]");
  return detail::tanh_combine(ell_t, ell_prev, beta);
}

// Decoding combiner: blend decoder output and input by decoding quality.
inline LlrVec dc_combine(const LlrVec& delta, const LlrVec& ell, double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("dc_combine: gamma must be in [0, 1]");
  return detail::tanh_combine(delta, ell, gamma);
}

// Bitwise decision on the posterior delta + ell.
inline BitVec posterior_decision(const LlrVec& delta, const LlrVec& ell) {
  if (delta.size() != ell.size()) throw std::invalid_argument("posterior_decision: length mismatch");
  BitVec c(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (delta[i] + ell[i] < 0.0) c.set(i, true);
  return c;
}

struct JdParams {
  int t_max = 30;
  double beta = 0.5;  // DSC weight
  int ds_warmup = -1;  // iterations before decoding starts; -1 -> N_u, 0 disables DS
  bool use_dc = true;  // false feeds delta back directly
  LcSosdParams decoder;

  void validate() const {
    if (t_max < 1) throw std::invalid_argument("JdParams: t_max must be >= 1");
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("JdParams: beta must be in [0, 1]");
    decoder.validate();
  }
};

struct JdResult {
  std::vector<BitVec> c_hat;  // per-user decisions, codeword bit order
  int iterations_total = 0;
  int decoding_iterations = 0;  // iterations with the decoding switch on
  std::uint64_t decoder_calls = 0;
  std::vector<std::uint64_t> teps_per_user;  // re-encoded TEPs summed per user
  bool converged = false;
  std::vector<LlrVec> last_llr;  // post-DSC PIC output per user, symbol order
};

// Iterative joint decoding. Each iteration processes every user against the
// other users' previous-iteration feedback: PIC, then DSC (t >= 2), then --
// once the decoding switch is on -- soft decoding, posterior decision, and
// DC-weighted feedback. Stops when all users repeat their decisions or at
// t_max.
inline JdResult jd_receive(const Frame& frame, const ChannelRealization& ch, const Code& code,
                           const JdParams& params) {
  params.validate();
  const std::size_t n_users = ch.h.size();
  const std::size_t n = frame.r.size();
  const int warmup = params.ds_warmup < 0 ? static_cast<int>(n_users) : params.ds_warmup;

  std::vector<LlrVec> eps(n_users, LlrVec(n, 0.0));
  std::vector<LlrVec> ell_prev(n_users);
  std::vector<std::vector<double>> mu(n_users), ups(n_users);
  std::vector<BitVec> dec_curr(n_users), dec_prev(n_users);
  bool have_curr = false, have_prev = false;

  JdResult res;
  res.teps_per_user.assign(n_users, 0);
  res.last_llr.resize(n_users);

  for (int t = 1; t <= params.t_max; ++t) {
    res.iterations_total = t;
    const bool ds_on = t > warmup;
    if (ds_on) ++res.decoding_iterations;

    // all users read the feedback of iteration t-1
    for (std::size_t u = 0; u < n_users; ++u) pic_prior_stats(eps[u], mu[u], ups[u]);

    have_prev = have_curr;
    dec_prev = dec_curr;

    for (std::size_t u = 0; u < n_users; ++u) {
      LlrVec ell = pic_extrinsic(frame.r, ch.h, mu, ups, ch.sigma_sq, u);
      if (t >= 2) ell = dsc_combine(ell, ell_prev[u], params.beta);
      ell_prev[u] = ell;
      res.last_llr[u] = ell;

      if (ds_on) {
        const Perm inv = invert_perm(ch.interleavers[u]);
        const LlrVec ell_code = apply_perm(inv, ell);
        const SoftDecision sd = lc_sosd_decode(code, ell_code, params.decoder);
        dec_curr[u] = posterior_decision(sd.delta, ell_code);
        const LlrVec phi =
            params.use_dc ? dc_combine(sd.delta, ell_code, sd.gamma) : sd.delta;
        eps[u] = apply_perm(ch.interleavers[u], phi);
        res.teps_per_user[u] += sd.n_teps;
        ++res.decoder_calls;
      } else {
        eps[u] = ell;
      }
    }
    if (ds_on) have_curr = true;

    if (have_curr && have_prev) {
      bool same = true;
      for (std::size_t u = 0; u < n_users && same; ++u) same = dec_curr[u] == dec_prev[u];
      if (same) {
        res.converged = true;
        break;
      }
    }
  }

  res.c_hat.resize(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    if (have_curr) {
      res.c_hat[u] = dec_curr[u];
    } else {
      // decoder never engaged (t_max <= warmup): hard decisions of the
      // last PIC output
      res.c_hat[u] = hard_decision(apply_perm(invert_perm(ch.interleavers[u]), ell_prev[u]));
    }
  }
  return res;
}

// SIC with the hard-output order-m decoder: strongest undecoded user first,
// remaining users treated as Gaussian interference (mu = 0, upsilon = 1),
// decoded signal re-modulated and subtracted. Exactly N_u decoder calls.
inline std::vector<BitVec> sic_receive(const Frame& frame, const ChannelRealization& ch,
                                       const Code& code, int order) {
  const std::size_t n_users = ch.h.size();
  const std::size_t n = frame.r.size();

  std::vector<std::size_t> by_power(n_users);
  for (std::size_t u = 0; u < n_users; ++u) by_power[u] = u;
  std::stable_sort(by_power.begin(), by_power.end(), [&](std::size_t a, std::size_t b) {
    return std::norm(ch.h[a]) > std::norm(ch.h[b]);
  });

  std::vector<cplx> residual = frame.r;
  std::vector<bool> decoded(n_users, false);
  std::vector<BitVec> c_hat(n_users);
  for (std::size_t u : by_power) {
    if (std::abs(ch.h[u]) == 0.0) throw std::invalid_argument("sic_receive: zero channel gain");
    const cplx inv_hu = 1.0 / ch.h[u];
    double den = ch.sigma_sq / (2.0 * std::norm(ch.h[u]));
    for (std::size_t j = 0; j < n_users; ++j)
      if (j != u && !decoded[j]) {
        const double re = (ch.h[j] * inv_hu).real();
        den += re * re;
      }
    LlrVec ell(n);
    for (std::size_t i = 0; i < n; ++i)
      ell[i] = clamp_llr(2.0 * (inv_hu * residual[i]).real() / den);

    const LlrVec ell_code = apply_perm(invert_perm(ch.interleavers[u]), ell);
    c_hat[u] = osd_decode(code, ell_code, order);
    decoded[u] = true;

    const BitVec ci = apply_perm(ch.interleavers[u], c_hat[u]);
    for (std::size_t i = 0; i < n; ++i) residual[i] -= ch.h[u] * (ci.get(i) ? -1.0 : 1.0);
  }
  return c_hat;
}

}  // namespace noma
