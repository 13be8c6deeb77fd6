#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hfce/dictionary.hpp"
#include "hfce/measurement.hpp"

namespace hfce {

// One detected path: its power-diffusion expansion, the seed atom that
// triggered it, and the normalized detection magnitude.
struct PathDetection {
  std::vector<int> indices;
  int seed = -1;
  double m_bar = 1.0;
};

struct SupportSet {
  std::vector<int> indices;  // ordered, no duplicates
  std::vector<PathDetection> per_path;
};

struct PathParams {
  double angle = 0.0;
  double distance = std::numeric_limits<double>::infinity();
  std::complex<double> gain{0.0, 0.0};
};

struct Estimate {
  VectorXcd sparse_coeffs;  // aligned with support.indices
  VectorXcd spatial;
  SupportSet support;
  std::vector<PathParams> per_path_params;
  long iterations = 0;  // NoI: Algorithm-2 inner-loop count (PD-OMP), else path count
  double residual_norm = 0.0;
  bool overflow = false;
  bool rank_deficient = false;
};

struct PdOmpConfig {
  int n_paths = 7;
  double alpha = 0.7;
};

// Whitened observation and measurement operator over one dictionary.
struct WhitenedSystem {
  VectorXcd y;     // D^{-1} y
  MatrixXcd phi;   // D^{-1} W F
  const Dictionary* dict = nullptr;
  double sigma2 = 0.0;
};

WhitenedSystem prepare_system(const PilotObservation& obs, const Dictionary& dict);

// Algorithm-2 walk: per submatrix, expand outward from the column aligned
// with the seed's angle index while coherence >= alpha/m_bar. The seed is
// always included. `checks` (optional) accumulates inner-loop iterations.
std::vector<int> pd_range(const Dictionary& dict, int seed_idx, double m_bar,
                          double alpha, long* checks = nullptr);

Estimate pd_omp(const WhitenedSystem& sys, const PdOmpConfig& cfg);
Estimate npd_omp(const WhitenedSystem& sys, int n_paths);

// Plain OMP restricted to dictionary columns [col_begin, col_end).
Estimate plain_omp(const WhitenedSystem& sys, int n_paths, int col_begin = 0,
                   int col_end = -1);
Estimate far_omp(const WhitenedSystem& sys_angular, int n_paths);
Estimate near_omp(const WhitenedSystem& sys_polar, int n_paths);

// Two-stage baselines over the joint dictionary: l_far iterations restricted
// to the angular block, then l_near over the polar blocks; the union support
// is refit jointly. sd_omp additionally adds +/-window angular neighbours of
// each far-stage detection.
Estimate hf_omp(const WhitenedSystem& sys_joint, int l_far, int l_near);
Estimate sd_omp(const WhitenedSystem& sys_joint, int l_far, int l_near, int window);

// h_hat = R W^H (W R W^H + sigma2 blockdiag(W_q W_q^H))^{-1} y.
Estimate lmmse(const PilotObservation& obs, const MatrixXcd& channel_cov);

double nmse_ratio(const Estimate& est, const VectorXcd& truth);
// 10 log10 of the per-trial ratio, floored at -200 dB.
double nmse_db(const Estimate& est, const VectorXcd& truth);

std::string estimate_to_json(const Estimate& est);

}  // namespace hfce
