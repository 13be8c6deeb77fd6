#include "hfce/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace hfce {

double crlb_sparse_exact(const MatrixXcd& phi_support, double sigma2) {
  const int k = static_cast<int>(phi_support.cols());
  MatrixXcd gram = phi_support.adjoint() * phi_support;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("crlb_sparse_exact: eigensolver failed");
  double trace_inv = 0.0;
  for (int i = 0; i < k; ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < 1e-12 * es.eigenvalues()(k - 1))
      return std::numeric_limits<double>::infinity();
    trace_inv += 1.0 / lam;
  }
  return sigma2 * trace_inv;
}

double crlb_bound(double sigma2, int card_gamma, int q_slots, int n_rf, int n_antennas) {
  if (sigma2 < 0 || card_gamma < 1 || q_slots < 1 || n_rf < 1 || n_antennas < 1)
    throw std::invalid_argument("crlb_bound: arguments must be positive");
  const double c = card_gamma;
  return sigma2 * c / (1.0 + c * q_slots * n_rf / n_antennas);
}

double sigma_min(const Dictionary& dict) {
  Eigen::BDCSVD<MatrixXcd> svd(dict.columns);
  return svd.singularValues().tail(1)(0);
}

double crlb_spatial(double bound_sparse, const Dictionary& dict_joint) {
  const double s = sigma_min(dict_joint);
  return bound_sparse * s * s;
}

double normalized_crlb(double sigma2, int card_gamma, int q_slots, int n_rf,
                       int n_antennas, double h_norm2) {
  if (!(h_norm2 > 0)) throw std::invalid_argument("normalized_crlb: zero channel norm");
  return crlb_bound(sigma2, card_gamma, q_slots, n_rf, n_antennas) / h_norm2;
}

double mu_ring(const ArrayConfig& cfg, int ring_offset, double rho) {
  if (!(rho > 0)) throw std::invalid_argument("mu_ring: rho must be positive");
  const double k = 2.0 * M_PI / cfg.wavelength;
  std::complex<double> sum(0.0, 0.0);
  for (int i = 0; i < cfg.n_antennas; ++i) {
    const double t = cfg.element_offset(i);
    sum += std::polar(1.0, k * t * t * cfg.spacing * cfg.spacing * ring_offset * rho);
  }
  return std::abs(sum) / cfg.n_antennas;
}

double pd_range_size_approx(double m_bar, double alpha, int rings, int s0,
                            const ArrayConfig& cfg, double rho) {
  if (s0 < 1 || s0 > rings + 1)
    throw std::invalid_argument("pd_range_size_approx: s0 must be in 1..S+1");
  double total = 0.0;
  for (int s = -s0 + 1; s <= rings - s0 + 1; ++s) {
    const double mu = mu_ring(cfg, s, rho);
    if (m_bar * mu - alpha >= 0.0) total += 1.0 / (mu * mu);
  }
  return total;
}

std::pair<double, double> gershgorin_interval(const MatrixXcd& gram) {
  const int k = static_cast<int>(gram.rows());
  double mu = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) mu = std::max(mu, std::abs(gram(i, j)));
  return {std::max(1.0 - k * mu, 0.0), 1.0 + k * mu};
}

Lemma1Report verify_lemma1(const ArrayConfig& cfg, const Dictionary& dict,
                           const std::vector<PathComponent>& test_paths) {
  if (dict.rings < 1) throw std::invalid_argument("verify_lemma1: polar rings required");
  Lemma1Report rep;
  rep.energies.assign(dict.rings, {});
  const int n = dict.n();
  const int first_ring_col = dict.has_angular ? n : 0;
  double total = 0.0;
  for (int s = 0; s < dict.rings; ++s) {
    const auto block = dict.columns.middleCols(first_ring_col + s * n, n);
    double ring_sum = 0.0;
    for (const auto& p : test_paths) {
      const VectorXcd b = near_steering(cfg, p.angle, p.distance);
      const double e = (block.adjoint() * b).squaredNorm();
      rep.energies[s].push_back(e);
      ring_sum += e;
    }
    rep.ring_mean.push_back(ring_sum / test_paths.size());
    total += ring_sum;
  }
  rep.overall_mean = total / (dict.rings * test_paths.size());
  return rep;
}

Lemma3Report verify_lemma3(const ArrayConfig& cfg, const Dictionary& dict, int q_slots,
                           int n_rf, int n_codebooks, int n_pairs, Rng& rng) {
  if (n_codebooks < 1 || n_pairs < 1)
    throw std::invalid_argument("verify_lemma3: counts must be >= 1");
  Lemma3Report rep;
  rep.bound = static_cast<double>(q_slots) * n_rf / cfg.n_antennas;
  rep.n_codebooks = n_codebooks;
  rep.n_pairs = n_pairs;

  std::uniform_int_distribution<int> pick(0, dict.m() - 1);
  double sum = 0.0;
  for (int c = 0; c < n_codebooks; ++c) {
    const BeamformingCodebook cb = gen_beamforming(rng, q_slots, n_rf, cfg);
    const Whitener wh = build_whitener(cb);
    for (int p = 0; p < n_pairs; ++p) {
      int i = pick(rng);
      int j = pick(rng);
      while (j == i) j = pick(rng);
      const VectorXcd pi = wh.apply_inverse((cb.stacked * dict.columns.col(i)).eval());
      const VectorXcd pj = wh.apply_inverse((cb.stacked * dict.columns.col(j)).eval());
      const double v = std::abs(pi.dot(pj));
      sum += v;
      rep.empirical_max = std::max(rep.empirical_max, v);
    }
  }
  rep.empirical_mean = sum / (static_cast<double>(n_codebooks) * n_pairs);
  return rep;
}

std::string lemma1_to_json(const Lemma1Report& r) {
  nlohmann::json j;
  j["ring_mean"] = r.ring_mean;
  j["overall_mean"] = r.overall_mean;
  j["n_paths"] = r.energies.empty() ? 0 : r.energies[0].size();
  return j.dump(2);
}

std::string lemma3_to_json(const Lemma3Report& r) {
  nlohmann::json j;
  j["empirical_mean"] = r.empirical_mean;
  j["empirical_max"] = r.empirical_max;
  j["bound"] = r.bound;
  j["n_codebooks"] = r.n_codebooks;
  j["n_pairs"] = r.n_pairs;
  return j.dump(2);
}

}  // namespace hfce
