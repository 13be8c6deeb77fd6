#include "hfce/measurement.hpp"

#include <cmath>
#include <stdexcept>

namespace hfce {

VectorXcd Whitener::apply_inverse(const VectorXcd& v) const {
  return d.triangularView<Eigen::Lower>().solve(v);
}

MatrixXcd Whitener::apply_inverse(const MatrixXcd& m) const {
  return d.triangularView<Eigen::Lower>().solve(m);
}

BeamformingCodebook gen_beamforming(Rng& rng, int q_slots, int n_rf, const ArrayConfig& cfg) {
  const int n = cfg.n_antennas;
  if (q_slots < 1 || n_rf < 1 || n_rf >= n)
    throw std::invalid_argument("gen_beamforming: need Q >= 1 and 1 <= N_RF < N");

  const double mag = 1.0 / std::sqrt(static_cast<double>(n));
  std::bernoulli_distribution coin(0.5);
  BeamformingCodebook cb{q_slots, n_rf, n, MatrixXcd(q_slots * n_rf, n)};
  for (int q = 0; q < q_slots; ++q) {
    int attempts = 0;
    for (;;) {
      auto slot = cb.stacked.middleRows(q * n_rf, n_rf);
      for (int r = 0; r < n_rf; ++r)
        for (int c = 0; c < n; ++c)
          slot(r, c) = coin(rng) ? mag : -mag;
      // W_q W_q^H must be positive definite for the whitener's Cholesky.
      MatrixXcd gram = slot * slot.adjoint();
      Eigen::LLT<MatrixXcd> llt(gram);
      if (llt.info() == Eigen::Success &&
          llt.matrixLLT().diagonal().real().minCoeff() > 1e-8)
        break;
      if (++attempts >= 16)
        throw std::runtime_error("gen_beamforming: degenerate parameters, slot stays singular");
    }
  }
  return cb;
}

PilotObservation observe(Rng& rng, const VectorXcd& h, const BeamformingCodebook& cb,
                         double sigma2, std::complex<double> x) {
  if (h.size() != cb.n) throw std::invalid_argument("observe: channel dimension mismatch");
  if (sigma2 < 0) throw std::invalid_argument("observe: sigma2 must be >= 0");
  // Unit-variance noise is drawn even when sigma2 = 0 so the stream layout is
  // identical across SNR sweep points.
  VectorXcd noise(cb.n * cb.q_slots);
  for (int i = 0; i < noise.size(); ++i) noise(i) = complex_gaussian(rng);
  const double sd = std::sqrt(sigma2);

  PilotObservation obs;
  obs.sigma2 = sigma2;
  obs.codebook = cb;
  obs.pilot = x;
  obs.y.resize(cb.rows());
  for (int q = 0; q < cb.q_slots; ++q)
    obs.y.segment(q * cb.n_rf, cb.n_rf) =
        cb.slot(q) * (h * x + sd * noise.segment(q * cb.n, cb.n));
  return obs;
}

Whitener build_whitener(const BeamformingCodebook& cb) {
  const int rows = cb.rows();
  Whitener wh;
  wh.d = MatrixXcd::Zero(rows, rows);
  for (int q = 0; q < cb.q_slots; ++q) {
    MatrixXcd gram = cb.slot(q) * cb.slot(q).adjoint();
    Eigen::LLT<MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("build_whitener: Cholesky failed on a singular slot");
    wh.d.block(q * cb.n_rf, q * cb.n_rf, cb.n_rf, cb.n_rf) = llt.matrixL();
  }
  return wh;
}

MatrixXcd measurement_matrix(const BeamformingCodebook& cb, const Whitener& wh,
                             const Dictionary& dict) {
  if (dict.n() != cb.n)
    throw std::invalid_argument("measurement_matrix: dictionary/codebook dimension mismatch");
  return wh.apply_inverse(MatrixXcd(cb.stacked * dict.columns));
}

double snr_to_sigma2(const VectorXcd& h, double snr_db, std::complex<double> x) {
  const double h2 = h.squaredNorm();
  if (!(h2 > 0)) throw std::invalid_argument("snr_to_sigma2: zero channel");
  return h2 * std::norm(x) / (h.size() * std::pow(10.0, snr_db / 10.0));
}

}  // namespace hfce
