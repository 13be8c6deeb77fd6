#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hfce/estimators.hpp"

namespace hfce {

// Estimator selection with per-estimator knobs. For pd_omp, `alphas` with
// more than one entry means "pick the alpha minimizing mean NMSE per sweep
// point" (the per-point tuning used for the SNR/pilot campaigns).
struct EstimatorSpec {
  std::string name;  // pd_omp, npd_omp, far_omp, near_omp, hf_omp, sd_omp, mmse, polar_pd_omp
  std::vector<double> alphas{0.7};
  int window = 2;  // sd_omp
};

struct ExperimentConfig {
  std::string campaign;  // nmse_vs_snr, nmse_vs_pilot, nmse_vs_alpha,
                         // nmse_vs_gamma, joint_vs_polar, iterations_vs_alpha
  // array
  int n_antennas = 200;
  double wavelength = 0.01;
  std::optional<double> spacing;  // default lambda/2
  // dictionary
  int rings = 5;                // S (zeta for the joint_vs_polar sweep)
  std::optional<double> rho;    // default 1/(2 S r_min)
  // pilot
  int q_slots = 10;
  int n_rf = 10;
  // scenario
  int n_paths = 7;
  std::optional<double> gamma;
  bool include_los = false;
  double angle_min_deg = -60.0;
  double angle_max_deg = 60.0;
  double dist_min = 30.0;
  double dist_max = 300.0;
  // run
  std::vector<EstimatorSpec> estimators;
  std::vector<double> sweep;
  int trials = 100;
  std::uint64_t seed = 1;
  double snr_db = 10.0;  // fixed axis when the sweep is not SNR
  int mmse_cov_draws = 10000;
};

ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  double sweep_value = 0.0;
  std::string estimator;
  double mean_nmse_db = 0.0;      // expectation of the ratio, then dB
  double mean_nmse_db_avgdb = 0.0;  // mean of per-trial dB values
  double std_nmse_db = 0.0;       // std of per-trial dB values
  double mean_noi = 0.0;
  std::optional<double> crlb_db;
  int trial_count = 0;
  int excluded = 0;
  double wall_time = 0.0;  // not serialized to CSV (manifest only)
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

ResultTable run_campaign(const ExperimentConfig& cfg);

struct GammaSummaryRow {
  std::string estimator;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct GammaStudy {
  ResultTable table;
  std::vector<GammaSummaryRow> summary;
};

// nmse_vs_gamma campaign plus the per-estimator mean/std/min/max over the
// per-gamma NMSE values.
GammaStudy run_gamma_study(const ExperimentConfig& cfg);

struct ScalingPoint {
  int n_antennas = 0;
  double median_seconds = 0.0;
};

// Median pd_omp wall time per antenna count, with Q, N_RF, L, S fixed and the
// measurement operator prebuilt.
std::vector<ScalingPoint> runtime_scaling_probe(const std::vector<int>& n_values,
                                                const ExperimentConfig& cfg,
                                                int reps = 31);

void write_csv(const ResultTable& table, const std::string& path);
ResultTable read_csv(const std::string& path);
std::string table_to_csv(const ResultTable& table);

void write_manifest(const ExperimentConfig& cfg, const std::string& path,
                    double wall_seconds, int threads);

// HFCE_THREADS env var overrides the requested count; 0 means "leave as is".
int resolve_threads(int requested);

}  // namespace hfce
