// CLI front-end: campaign runner, analysis verification suite, and the
// runtime scaling probe.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "hfce/analysis.hpp"
#include "hfce/harness.hpp"
#include "json.hpp"

namespace {

int cmd_run(const std::string& campaign, const std::string& config_path,
            std::optional<std::uint64_t> seed, const std::string& out_dir, int threads) {
  hfce::ExperimentConfig cfg = hfce::load_config(config_path);
  cfg.campaign = campaign;
  if (seed) cfg.seed = *seed;

  const int resolved = hfce::resolve_threads(threads);
  if (resolved > 0) omp_set_num_threads(resolved);
  const int effective = resolved > 0 ? resolved : omp_get_max_threads();

  std::filesystem::create_directories(out_dir);
  const auto t0 = std::chrono::steady_clock::now();

  hfce::ResultTable table;
  if (campaign == "nmse_vs_gamma") {
    const hfce::GammaStudy study = hfce::run_gamma_study(cfg);
    table = study.table;
    nlohmann::json js = nlohmann::json::array();
    for (const auto& s : study.summary)
      js.push_back({{"estimator", s.estimator},
                    {"mean_db", s.mean},
                    {"std_db", s.stddev},
                    {"min_db", s.min},
                    {"max_db", s.max}});
    std::ofstream f(out_dir + "/gamma_summary.json");
    f << js.dump(2) << "\n";
  } else {
    table = hfce::run_campaign(cfg);
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  hfce::write_csv(table, out_dir + "/" + campaign + ".csv");
  hfce::write_manifest(cfg, out_dir + "/run_manifest.json", wall, effective);
  std::cout << campaign << ": " << table.rows.size() << " rows in " << wall
            << " s -> " << out_dir << "/" << campaign << ".csv\n";
  return 0;
}

bool report(const char* name, bool ok) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
  return ok;
}

int cmd_verify() {
  bool all = true;
  const hfce::ArrayConfig cfg(200, 0.01);
  const double rho = hfce::default_rho(5, 30.0);
  const hfce::Dictionary dict = hfce::build_joint(cfg, 5, rho);
  const hfce::Dictionary polar = hfce::build_polar(cfg, 5, rho);

  // Energy concentration of polar submatrices on random in-coverage near paths.
  hfce::Rng rng = hfce::make_rng(2024);
  std::uniform_real_distribution<double> ang(-M_PI / 3, M_PI / 3);
  std::uniform_real_distribution<double> dst(30.0, 300.0);
  std::vector<hfce::PathComponent> paths(100);
  for (auto& p : paths) {
    p.field_type = hfce::FieldType::Near;
    p.angle = ang(rng);
    p.distance = dst(rng);
  }
  const hfce::Lemma1Report l1 = hfce::verify_lemma1(cfg, polar, paths);
  all &= report("polar-transform energy mean in [0.95, 1.05]",
                l1.overall_mean >= 0.95 && l1.overall_mean <= 1.05);
  std::cout << hfce::lemma1_to_json(l1) << "\n";

  // Whitened cross-column coherence vs the Q*N_RF/N expectation bound.
  const hfce::Lemma3Report l3 = hfce::verify_lemma3(cfg, dict, 10, 10, 50, 200, rng);
  all &= report("whitened coherence mean below 0.5", l3.empirical_mean < 0.5);
  std::cout << hfce::lemma3_to_json(l3) << "\n";

  // Ring coherence profile: mu(0) = 1 and decays with ring offset.
  bool mu_ok = std::abs(hfce::mu_ring(cfg, 0, rho) - 1.0) < 1e-12;
  for (int s = 1; s <= 5; ++s)
    mu_ok &= hfce::mu_ring(cfg, s, rho) < hfce::mu_ring(cfg, s - 1, rho) + 1e-12;
  all &= report("ring coherence decays with offset", mu_ok);

  return all ? 0 : 1;
}

int cmd_probe(const std::vector<int>& n_values, int reps, std::uint64_t seed) {
  hfce::ExperimentConfig cfg;
  cfg.campaign = "nmse_vs_snr";
  cfg.sweep = {10.0};
  cfg.estimators = {{"pd_omp", {0.5}, 2}};
  cfg.seed = seed;
  const auto points = hfce::runtime_scaling_probe(n_values, cfg, reps);
  std::printf("n_antennas,median_seconds\r\n");
  for (const auto& p : points) std::printf("%d,%.17g\r\n", p.n_antennas, p.median_seconds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid near/far-field channel estimation simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a Monte-Carlo campaign");
  std::string campaign, config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  run->add_option("campaign", campaign,
                  "nmse_vs_snr | nmse_vs_pilot | nmse_vs_alpha | nmse_vs_gamma | "
                  "joint_vs_polar | iterations_vs_alpha")
      ->required();
  run->add_option("--config", config_path, "JSON config path")->required();
  run->add_option("--seed", seed, "master seed override");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads (0 = default)");

  auto* verify = app.add_subcommand("verify", "run the analysis verification suite");

  auto* probe = app.add_subcommand("probe-scaling", "median solver runtime vs array size");
  std::vector<int> n_values = {64, 128, 256};
  int reps = 31;
  std::uint64_t probe_seed = 1;
  probe->add_option("--n", n_values, "antenna counts");
  probe->add_option("--reps", reps, "repetitions per point");
  probe->add_option("--seed", probe_seed, "master seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(campaign, config_path, seed, out_dir, threads);
    if (verify->parsed()) return cmd_verify();
    if (probe->parsed()) return cmd_probe(n_values, reps, probe_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
