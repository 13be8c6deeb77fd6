#pragma once

#include <string>
#include <vector>

#include "hfce/channel.hpp"
#include "hfce/dictionary.hpp"
#include "hfce/measurement.hpp"
#include "hfce/rng.hpp"

namespace hfce {

struct CrlbReport {
  double exact_sparse = 0.0;
  double bound_sparse = 0.0;
  double bound_spatial = 0.0;
  double normalized = 0.0;
  double sigma_min_fj = 0.0;
  double eigen_low = 0.0;
  double eigen_high = 0.0;
};

// sigma2 * Tr((Phi_G^H Phi_G)^{-1}); +inf when Phi_G is rank deficient.
double crlb_sparse_exact(const MatrixXcd& phi_support, double sigma2);

// sigma2 card(G) / (1 + card(G) Q N_RF / N).
double crlb_bound(double sigma2, int card_gamma, int q_slots, int n_rf, int n_antennas);

// bound_sparse * sigma_min(F_J)^2.
double crlb_spatial(double bound_sparse, const Dictionary& dict_joint);

double sigma_min(const Dictionary& dict);

// crlb_bound / ||h||^2.
double normalized_crlb(double sigma2, int card_gamma, int q_slots, int n_rf,
                       int n_antennas, double h_norm2);

// mu_l(s) = (1/N) |sum_n exp(j (2 pi / lambda) t_n^2 d^2 s rho)| over the
// centered element offsets t_n.
double mu_ring(const ArrayConfig& cfg, int ring_offset, double rho);

// Piece-wise size approximation of a power diffusion range; s0 in 1..S+1 is
// the (1-based) submatrix of the detected atom.
double pd_range_size_approx(double m_bar, double alpha, int rings, int s0,
                            const ArrayConfig& cfg, double rho);

// Gershgorin interval for a support Gram matrix with unit diagonal.
std::pair<double, double> gershgorin_interval(const MatrixXcd& gram);

struct Lemma1Report {
  // energies[s][p]: transform energy of path p under polar ring s+1.
  std::vector<std::vector<double>> energies;
  std::vector<double> ring_mean;
  double overall_mean = 0.0;
};

Lemma1Report verify_lemma1(const ArrayConfig& cfg, const Dictionary& dict,
                           const std::vector<PathComponent>& test_paths);

struct Lemma3Report {
  double empirical_mean = 0.0;
  double empirical_max = 0.0;
  double bound = 0.0;
  int n_codebooks = 0;
  int n_pairs = 0;
};

Lemma3Report verify_lemma3(const ArrayConfig& cfg, const Dictionary& dict, int q_slots,
                           int n_rf, int n_codebooks, int n_pairs, Rng& rng);

std::string lemma1_to_json(const Lemma1Report& r);
std::string lemma3_to_json(const Lemma3Report& r);

}  // namespace hfce
