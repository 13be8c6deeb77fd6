#pragma once

#include <limits>
#include <string>
#include <vector>

#include "hfce/steering.hpp"

namespace hfce {

// Per-column metadata. submatrix 0 is the angular block (distance = inf);
// submatrices 1..S are the polar rings.
struct AtomMeta {
  double angle = 0.0;
  double distance = std::numeric_limits<double>::infinity();
  int submatrix = 0;
};

struct Dictionary {
  MatrixXcd columns;  // N x M
  std::vector<AtomMeta> meta;
  ArrayConfig cfg;
  int rings = 0;     // S
  double rho = 0.0;  // inverse-distance step (1/m)
  bool has_angular = true;

  int n() const { return cfg.n_antennas; }
  int m() const { return static_cast<int>(columns.cols()); }
  int n_blocks() const { return m() / n(); }
  // Ring index (0 = angular) of a contiguous N-column block.
  int ring_of_block(int b) const { return has_angular ? b : b + 1; }
  int block_of_column(int i) const { return i / n(); }
};

// theta_n = arcsin((2n - 1 - N)/N), n = 1..N; strictly increasing, sine
// spacing exactly 2/N.
std::vector<double> angle_grid(const ArrayConfig& cfg);

// Default inverse-distance step so the innermost ring at broadside sits at
// r_min meters: rho = 1/(2 S r_min).
double default_rho(int rings, double r_min = 30.0);

Dictionary build_angular(const ArrayConfig& cfg);
Dictionary build_polar(const ArrayConfig& cfg, int rings, double rho);
Dictionary build_joint(const ArrayConfig& cfg, int rings, double rho);

// Exact inner-product magnitude between columns i and j.
double coherence(const Dictionary& dict, int i, int j);

// |F^H h| magnitude spectrum.
VectorXd transform_magnitude(const Dictionary& dict, const VectorXcd& h);

// Column-major complex binary dump with a JSON metadata sidecar.
void dump_dictionary(const Dictionary& dict, const std::string& bin_path,
                     const std::string& json_path);

}  // namespace hfce
