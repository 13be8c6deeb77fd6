#pragma once

#include <complex>

#include "hfce/dictionary.hpp"
#include "hfce/rng.hpp"
#include "hfce/steering.hpp"

namespace hfce {

// Q analog beamforming slots, each N_RF x N with entries in {+1/sqrt(N), -1/sqrt(N)}.
struct BeamformingCodebook {
  int q_slots = 0;
  int n_rf = 0;
  int n = 0;
  MatrixXcd stacked;  // (Q*N_RF) x N

  int rows() const { return q_slots * n_rf; }
  Eigen::Block<const MatrixXcd> slot(int q) const {
    return stacked.middleRows(q * n_rf, n_rf);
  }
};

struct PilotObservation {
  VectorXcd y;  // length Q*N_RF
  double sigma2 = 0.0;
  BeamformingCodebook codebook;
  std::complex<double> pilot{1.0, 0.0};
};

// Block-lower-triangular Cholesky factor D with D D^H = blockdiag(W_q W_q^H).
struct Whitener {
  MatrixXcd d;
  VectorXcd apply_inverse(const VectorXcd& v) const;
  MatrixXcd apply_inverse(const MatrixXcd& m) const;
};

BeamformingCodebook gen_beamforming(Rng& rng, int q_slots, int n_rf, const ArrayConfig& cfg);

PilotObservation observe(Rng& rng, const VectorXcd& h, const BeamformingCodebook& cb,
                         double sigma2, std::complex<double> x = {1.0, 0.0});

Whitener build_whitener(const BeamformingCodebook& cb);

// Phi = D^{-1} W F.
MatrixXcd measurement_matrix(const BeamformingCodebook& cb, const Whitener& wh,
                             const Dictionary& dict);

// sigma2 = ||h||^2 |x|^2 / (N 10^{snr_db/10}).
double snr_to_sigma2(const VectorXcd& h, double snr_db, std::complex<double> x = {1.0, 0.0});

}  // namespace hfce
