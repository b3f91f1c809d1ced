#pragma once

// Monte Carlo harness: configuration, the deterministic parallel frame
// driver, MI-transform sweeps, and CSV output. Results are bit-identical
// for a fixed (seed, config) regardless of worker count: every frame owns
// an RNG substream keyed by (seed, snr index, frame index) and all
// aggregation happens in integer-weighted sums.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "noma/channel.hpp"
#include "noma/code.hpp"
#include "noma/lcsosd.hpp"
#include "noma/mi.hpp"
#include "noma/ml.hpp"
#include "noma/receivers.hpp"
#include "noma/rng.hpp"

namespace noma {

enum class ReceiverKind { jd, sic, ml };

inline const char* to_string(ReceiverKind r) {
  switch (r) {
    case ReceiverKind::jd: return "jd";
    case ReceiverKind::sic: return "sic";
    case ReceiverKind::ml: return "ml";
  }
  return "?";
}

inline const char* to_string(ChannelKind c) {
  return c == ChannelKind::awgn ? "awgn" : "rayleigh";
}

struct SimConfig {
  std::string code_spec = "ebch_8_4";  // built-in name or generator-matrix file
  int order = 2;
  ReceiverKind receiver = ReceiverKind::jd;
  ChannelKind channel = ChannelKind::awgn;
  std::size_t n_users = 2;
  double power_ratio = 4.0;
  std::vector<double> snr_db;
  std::uint64_t frames = 1000;
  std::uint64_t seed = 1;
  JdParams jd;
  std::string out_path;

  void validate() const {
    if (snr_db.empty()) throw std::invalid_argument("config: snr_db list must be non-empty");
    if (frames < 1) throw std::invalid_argument("config: frames must be >= 1");
    if (n_users < 1) throw std::invalid_argument("config: n_users must be >= 1");
    if (power_ratio <= 0.0) throw std::invalid_argument("config: power_ratio must be > 0");
    jd.validate();
  }
};

// `ebch_<n>_<k>` selects a built-in code, anything else is a file path.
inline Code resolve_code(const std::string& spec) {
  if (spec.rfind("ebch_", 0) == 0) {
    std::size_t n = 0, k = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "ebch_%zu_%zu%c", &n, &k, &extra) == 2) return build_ebch(n, k);
    throw std::invalid_argument("config: malformed built-in code name: " + spec);
  }
  return load_code(std::filesystem::path(spec));
}

namespace detail {

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad number '" + item + "' in " + key);
    }
  }
  return out;
}

inline bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw std::invalid_argument("config: bad boolean '" + s + "' for " + key);
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// Flat `key = value` lines; '#' starts a comment; unknown keys are errors.
inline SimConfig parse_sim_config(std::istream& in) {
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    try {
      if (key == "code") cfg.code_spec = val;
      else if (key == "order") cfg.order = std::stoi(val);
      else if (key == "receiver") {
        if (val == "jd") cfg.receiver = ReceiverKind::jd;
        else if (val == "sic") cfg.receiver = ReceiverKind::sic;
        else if (val == "ml") cfg.receiver = ReceiverKind::ml;
        else throw std::invalid_argument("config: receiver must be jd, sic or ml");
      } else if (key == "channel") {
        if (val == "awgn") cfg.channel = ChannelKind::awgn;
        else if (val == "rayleigh") cfg.channel = ChannelKind::rayleigh;
        else throw std::invalid_argument("config: channel must be awgn or rayleigh");
      } else if (key == "n_users") cfg.n_users = std::stoul(val);
      else if (key == "power_ratio") cfg.power_ratio = std::stod(val);
      else if (key == "snr_db") cfg.snr_db = detail::parse_double_list(val, key);
      else if (key == "frames") cfg.frames = std::stoull(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "t_max") cfg.jd.t_max = std::stoi(val);
      else if (key == "beta") cfg.jd.beta = std::stod(val);
      else if (key == "ds_warmup") cfg.jd.ds_warmup = std::stoi(val);
      else if (key == "use_dc") cfg.jd.use_dc = detail::parse_bool(val, key);
      else if (key == "lambda_s") cfg.jd.decoder.lambda_s = std::stod(val);
      else if (key == "lambda_p") cfg.jd.decoder.lambda_p = std::stod(val);
      else if (key == "out") cfg.out_path = val;
      else throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad value '" + val + "' for " + key);
    }
  }
  cfg.jd.decoder.order = cfg.order;
  return cfg;
}

inline SimConfig parse_sim_config_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::invalid_argument("config: cannot open " + p.string());
  return parse_sim_config(in);
}

struct UserTally {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
  std::uint64_t frame_errors = 0;
  std::uint64_t frames = 0;

  double ber() const { return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
  double fer() const { return frames ? static_cast<double>(frame_errors) / static_cast<double>(frames) : 0.0; }
};

struct SnrTally {
  double snr_db = 0.0;
  std::vector<UserTally> users;
  std::uint64_t frames = 0;
  std::uint64_t sum_total_iters = 0;
  std::uint64_t sum_decoding_iters = 0;
  std::uint64_t sum_teps = 0;
  std::uint64_t decoder_calls = 0;
  std::uint64_t converged_frames = 0;

  double mean_total_iters() const {
    return frames ? static_cast<double>(sum_total_iters) / static_cast<double>(frames) : 0.0;
  }
  double mean_decoding_iters() const {
    return frames ? static_cast<double>(sum_decoding_iters) / static_cast<double>(frames) : 0.0;
  }
  double mean_teps() const {
    return decoder_calls ? static_cast<double>(sum_teps) / static_cast<double>(decoder_calls) : 0.0;
  }
  // average BER over users (equal bit counts)
  double avg_ber() const {
    std::uint64_t e = 0, b = 0;
    for (const auto& u : users) {
      e += u.bit_errors;
      b += u.bits;
    }
    return b ? static_cast<double>(e) / static_cast<double>(b) : 0.0;
  }

  void merge(const SnrTally& o) {
    for (std::size_t u = 0; u < users.size(); ++u) {
      users[u].bit_errors += o.users[u].bit_errors;
      users[u].bits += o.users[u].bits;
      users[u].frame_errors += o.users[u].frame_errors;
      users[u].frames += o.users[u].frames;
    }
    frames += o.frames;
    sum_total_iters += o.sum_total_iters;
    sum_decoding_iters += o.sum_decoding_iters;
    sum_teps += o.sum_teps;
    decoder_calls += o.decoder_calls;
    converged_frames += o.converged_frames;
  }
};

struct RunStats {
  std::vector<SnrTally> per_snr;
  double wall_seconds = 0.0;
};

namespace detail {

inline BitVec random_bits(std::size_t len, RngStream& rng) {
  BitVec v(len);
  auto words = v.words();
  for (auto& w : words) w = rng.next();
  if (len % 64 != 0) words.back() &= (std::uint64_t{1} << (len % 64)) - 1;
  return v;
}

}  // namespace detail

// One simulated frame: draw bits, encode, transmit, receive, tally.
inline void simulate_frame(const SimConfig& cfg, const Code& code, const PowerProfile& profile,
                           double sigma_sq, std::uint64_t snr_index, std::uint64_t frame_index,
                           SnrTally& tally) {
  RngStream rng = RngStream::for_frame(cfg.seed, snr_index, frame_index);
  std::vector<BitVec> bits(cfg.n_users), codewords(cfg.n_users);
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    bits[u] = detail::random_bits(code.k, rng);
    codewords[u] = encode(code, bits[u]);
  }
  ChannelRealization ch = draw_channel(profile, sigma_sq, cfg.channel, code.n, rng);
  Frame frame = transmit(codewords, ch, rng);
  frame.tx_bits = std::move(bits);

  std::vector<BitVec> c_hat;
  switch (cfg.receiver) {
    case ReceiverKind::jd: {
      JdResult res = jd_receive(frame, ch, code, cfg.jd);
      c_hat = std::move(res.c_hat);
      tally.sum_total_iters += static_cast<std::uint64_t>(res.iterations_total);
      tally.sum_decoding_iters += static_cast<std::uint64_t>(res.decoding_iterations);
      for (auto t : res.teps_per_user) tally.sum_teps += t;
      tally.decoder_calls += res.decoder_calls;
      if (res.converged) ++tally.converged_frames;
      break;
    }
    case ReceiverKind::sic: {
      c_hat = sic_receive(frame, ch, code, cfg.order);
      tally.sum_total_iters += cfg.n_users;
      tally.sum_decoding_iters += cfg.n_users;
      tally.sum_teps += cfg.n_users * tep_count(code.k, cfg.order);
      tally.decoder_calls += cfg.n_users;
      ++tally.converged_frames;
      break;
    }
    case ReceiverKind::ml: {
      c_hat = joint_ml_decode(frame, ch, code);
      ++tally.converged_frames;
      break;
    }
  }

  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    const int errs = hamming_distance(c_hat[u], frame.tx_codewords[u]);
    tally.users[u].bit_errors += static_cast<std::uint64_t>(errs);
    tally.users[u].bits += code.n;
    if (errs > 0) ++tally.users[u].frame_errors;
    ++tally.users[u].frames;
  }
  ++tally.frames;
}

inline RunStats run_monte_carlo(const SimConfig& cfg, int workers = 0) {
  cfg.validate();
  const Code code = resolve_code(cfg.code_spec);
  const PowerProfile profile = PowerProfile::geometric(cfg.n_users, cfg.power_ratio);
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;

  const auto t0 = std::chrono::steady_clock::now();
  RunStats stats;
  stats.per_snr.resize(cfg.snr_db.size());
  for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
    const double sigma_sq = snr_to_sigma_sq(cfg.snr_db[si]);
    std::vector<SnrTally> partial(static_cast<std::size_t>(workers));
    for (auto& p : partial) p.users.resize(cfg.n_users);

    auto work = [&](int w) {
      SnrTally& local = partial[static_cast<std::size_t>(w)];
      for (std::uint64_t f = static_cast<std::uint64_t>(w); f < cfg.frames;
           f += static_cast<std::uint64_t>(workers))
        simulate_frame(cfg, code, profile, sigma_sq, si, f, local);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& th : pool) th.join();

    SnrTally& total = stats.per_snr[si];
    total.snr_db = cfg.snr_db[si];
    total.users.resize(cfg.n_users);
    for (const auto& p : partial) total.merge(p);
  }
  stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return stats;
}

// ---- CSV output -----------------------------------------------------------

inline constexpr const char* kSimulateCsvHeader =
    "snr_db,receiver,n_users,frames,user,bit_errors,bits,ber,fer,"
    "mean_total_iters,mean_decoding_iters,mean_teps,seed";
inline constexpr const char* kExitCsvHeader =
    "sigma_sq_in,mi_in,mi_out_sosd,mi_out_lcsosd,mean_teps_sosd,mean_teps_lcsosd,frames";

namespace detail {

inline std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace detail

inline void write_simulate_csv(std::ostream& out, const SimConfig& cfg, const RunStats& stats) {
  out << kSimulateCsvHeader << '\n';
  for (const auto& snr : stats.per_snr) {
    for (std::size_t u = 0; u < snr.users.size(); ++u) {
      const auto& ut = snr.users[u];
      out << detail::fmt_g9(snr.snr_db) << ',' << to_string(cfg.receiver) << ',' << cfg.n_users
          << ',' << snr.frames << ',' << (u + 1) << ',' << ut.bit_errors << ',' << ut.bits << ','
          << detail::fmt_g9(ut.ber()) << ',' << detail::fmt_g9(ut.fer()) << ','
          << detail::fmt_g9(snr.mean_total_iters()) << ','
          << detail::fmt_g9(snr.mean_decoding_iters()) << ',' << detail::fmt_g9(snr.mean_teps())
          << ',' << cfg.seed << '\n';
    }
  }
}

inline void write_simulate_csv(const std::filesystem::path& p, const SimConfig& cfg,
                               const RunStats& stats) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + p.string());
  write_simulate_csv(out, cfg, stats);
}

// ---- MI transform sweep ----------------------------------------------------

struct ExitPoint {
  double sigma_sq_in = 0.0;
  double mi_in = 0.0;
  double mi_out_sosd = 0.0;
  double mi_out_lcsosd = 0.0;
  double mean_teps_sosd = 0.0;
  double mean_teps_lcsosd = 0.0;
  std::uint64_t frames = 0;
  bool mi_reliable = true;
};

// For each input variance: sample consistent-Gaussian LLRs around random
// codewords, decode with the plain soft-output decoder (lambda_s = 1,
// lambda_p = 0) and with the low-complexity one, and measure the output MI
// of both. Points are independent, so they parallelise without affecting
// the per-point deterministic sums.
inline std::vector<ExitPoint> exit_transform(const Code& code, const LcSosdParams& lc_params,
                                             const std::vector<double>& sigma_sq_grid,
                                             std::uint64_t frames, std::uint64_t seed,
                                             int workers = 0) {
  lc_params.validate();
  LcSosdParams full = lc_params;
  full.lambda_s = 1.0;
  full.lambda_p = 0.0;
  full.discard_stat = nullptr;

  std::vector<ExitPoint> points(sigma_sq_grid.size());
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;

  auto run_point = [&](std::size_t gi) {
    const double s2 = sigma_sq_grid[gi];
    MiAccumulator mi_sosd, mi_lc;
    std::uint64_t teps_sosd = 0, teps_lc = 0;
    for (std::uint64_t f = 0; f < frames; ++f) {
      RngStream rng = RngStream::for_frame(seed, gi, f);
      const BitVec b = detail::random_bits(code.k, rng);
      const BitVec cw = encode(code, b);
      const LlrVec ell = sample_gaussian_llr(cw, s2, rng);
      const SoftDecision sosd = lc_sosd_decode(code, ell, full);
      const SoftDecision lc = lc_sosd_decode(code, ell, lc_params);
      mi_sosd.add(sosd.delta, cw);
      mi_lc.add(lc.delta, cw);
      teps_sosd += sosd.n_teps;
      teps_lc += lc.n_teps;
    }
    ExitPoint& p = points[gi];
    p.sigma_sq_in = s2;
    p.mi_in = mi_of_variance(s2);
    p.mi_out_sosd = mi_sosd.value();
    p.mi_out_lcsosd = mi_lc.value();
    p.mean_teps_sosd = frames ? static_cast<double>(teps_sosd) / static_cast<double>(frames) : 0.0;
    p.mean_teps_lcsosd = frames ? static_cast<double>(teps_lc) / static_cast<double>(frames) : 0.0;
    p.frames = frames;
    p.mi_reliable = mi_sosd.reliable() && mi_lc.reliable();
  };

  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t gi = next.fetch_add(1); gi < points.size(); gi = next.fetch_add(1))
      run_point(gi);
  };
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return points;
}

inline void write_exit_csv(std::ostream& out, const std::vector<ExitPoint>& points) {
  out << kExitCsvHeader << '\n';
  for (const auto& p : points) {
    out << detail::fmt_g9(p.sigma_sq_in) << ',' << detail::fmt_g9(p.mi_in) << ','
        << detail::fmt_g9(p.mi_out_sosd) << ',' << detail::fmt_g9(p.mi_out_lcsosd) << ','
        << detail::fmt_g9(p.mean_teps_sosd) << ',' << detail::fmt_g9(p.mean_teps_lcsosd) << ','
        << p.frames << '\n';
  }
}

inline void write_exit_csv(const std::filesystem::path& p, const std::vector<ExitPoint>& pts) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + p.string());
  write_exit_csv(out, pts);
}

}  // namespace noma
