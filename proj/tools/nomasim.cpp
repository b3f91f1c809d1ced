// Command-line front end: Monte Carlo BER simulation, MI-transform sweeps,
// and one-shot soft decoding.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noma/noma.hpp"

namespace {

std::vector<double> parse_grid(const std::string& spec) {
  // a:step:b inclusive
  double a = 0, s = 0, b = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> a >> c1 >> s >> c2 >> b) || c1 != ':' || c2 != ':' || s <= 0)
    throw CLI::ValidationError("--grid expects start:step:stop with step > 0");
  std::vector<double> g;
  for (double v = a; v <= b + 1e-12; v += s) g.push_back(v);
  return g;
}

noma::LlrVec read_llr_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open LLR file " + path);
  noma::LlrVec out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

}  // namespace

using namespace noma;

int main(int argc, char** argv) {
  CLI::App app{"Short-block-code NOMA receiver simulator"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo BER simulation from a config file");
  std::string cfg_path, sim_out;
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  int workers = 0;
  sim->add_option("--config", cfg_path, "configuration file")->required();
  sim->add_option("--seed", sim_seed, "override the config seed")->each([&](const std::string&) {
    sim_seed_set = true;
  });
  sim->add_option("--out", sim_out, "override the output CSV path");
  sim->add_option("--workers", workers, "worker threads (default: hardware)");

  // exit
  auto* exit_cmd = app.add_subcommand("exit", "measure the decoder MI transform over an input-MI grid");
  std::string exit_code_spec, exit_grid = "0.1:0.1:0.9", exit_out;
  int exit_order = 2;
  std::uint64_t exit_frames = 20000, exit_seed = 1;
  double exit_lambda_s = 0.99, exit_lambda_p = 1e-5;
  exit_cmd->add_option("--code", exit_code_spec, "built-in name (ebch_n_k) or generator file")->required();
  exit_cmd->add_option("--order", exit_order, "decoding order m")->required();
  exit_cmd->add_option("--grid", exit_grid, "input MI grid start:step:stop (default 0.1:0.1:0.9)");
  exit_cmd->add_option("--frames", exit_frames, "frames per grid point");
  exit_cmd->add_option("--out", exit_out, "output CSV path")->required();
  exit_cmd->add_option("--lambda-s", exit_lambda_s, "success threshold");
  exit_cmd->add_option("--lambda-p", exit_lambda_p, "discard threshold");
  exit_cmd->add_option("--seed", exit_seed, "RNG seed");
  exit_cmd->add_option("--workers", workers, "worker threads");

  // decode
  auto* dec = app.add_subcommand("decode", "one-shot soft decode of an LLR vector");
  std::string dec_code_spec, dec_llr_path;
  int dec_order = 2;
  double dec_lambda_s = 0.99, dec_lambda_p = 1e-5;
  dec->add_option("--code", dec_code_spec, "built-in name (ebch_n_k) or generator file")->required();
  dec->add_option("--order", dec_order, "decoding order m")->required();
  dec->add_option("--llr", dec_llr_path, "file with n whitespace-separated LLRs")->required();
  dec->add_option("--lambda-s", dec_lambda_s, "success threshold");
  dec->add_option("--lambda-p", dec_lambda_p, "discard threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      SimConfig cfg = parse_sim_config_file(cfg_path);
      if (sim_seed_set) cfg.seed = sim_seed;
      if (!sim_out.empty()) cfg.out_path = sim_out;
      RunStats stats = run_monte_carlo(cfg, workers);
      if (!cfg.out_path.empty()) {
        write_simulate_csv(std::filesystem::path(cfg.out_path), cfg, stats);
        std::cerr << "wrote " << cfg.out_path << " (" << stats.wall_seconds << " s)\n";
      } else {
        write_simulate_csv(std::cout, cfg, stats);
      }
      for (const auto& snr : stats.per_snr)
        std::cerr << "snr " << snr.snr_db << " dB: avg ber " << snr.avg_ber()
                  << ", mean decoding iters " << snr.mean_decoding_iters() << "\n";
    } else if (*exit_cmd) {
      const Code code = resolve_code(exit_code_spec);
      LcSosdParams params;
      params.order = exit_order;
      params.lambda_s = exit_lambda_s;
      params.lambda_p = exit_lambda_p;
      std::vector<double> sigma_grid;
      for (double mi : parse_grid(exit_grid)) sigma_grid.push_back(mi_inverse(mi));
      const auto points = exit_transform(code, params, sigma_grid, exit_frames, exit_seed, workers);
      for (const auto& p : points)
        if (!p.mi_reliable)
          std::cerr << "warning: fewer than 1e4 LLR samples at sigma_sq " << p.sigma_sq_in
                    << ", MI estimate unreliable\n";
      write_exit_csv(std::filesystem::path(exit_out), points);
      std::cerr << "wrote " << exit_out << "\n";
    } else if (*dec) {
      const Code code = resolve_code(dec_code_spec);
      const LlrVec ell = read_llr_file(dec_llr_path);
      if (ell.size() != code.n) {
        std::cerr << "error: LLR file has " << ell.size() << " values, code needs " << code.n << "\n";
        return 1;
      }
      LcSosdParams params;
      params.order = dec_order;
      params.lambda_s = dec_lambda_s;
      params.lambda_p = dec_lambda_p;
      const SoftDecision sd = lc_sosd_decode(code, ell, params);
      std::cout << "c_hat: " << sd.c_op.to_string() << "\n";
      std::cout << "gamma: " << sd.gamma << "\n";
      std::cout << "teps_evaluated: " << sd.n_teps << " discarded: " << sd.n_teps_discarded
                << (sd.terminated_early ? " (early exit)" : "") << "\n";
      std::cout << "delta:";
      for (double d : sd.delta) std::cout << ' ' << d;
      std::cout << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
