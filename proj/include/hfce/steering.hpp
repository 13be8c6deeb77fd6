#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace hfce {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Linear array geometry. Element n sits at (0, t_n * spacing) with
// t_n = (2n - N + 1)/2, so the array is centered on the origin.
struct ArrayConfig {
  int n_antennas;
  double spacing;
  double wavelength;

  ArrayConfig(int n, double d, double lambda);
  // Half-wavelength spacing.
  ArrayConfig(int n, double lambda) : ArrayConfig(n, lambda / 2.0, lambda) {}

  double aperture() const { return (n_antennas - 1) * spacing; }
  // t_n for the 0-based element index.
  double element_offset(int n) const { return (2.0 * n - n_antennas + 1) / 2.0; }
};

std::vector<std::pair<double, double>> element_positions(const ArrayConfig& cfg);

// Unit-norm plane-wave response toward theta (radians).
VectorXcd far_steering(const ArrayConfig& cfg, double theta);

// Unit-norm spherical-wave response for a source at (theta, r). Uses exact
// element distances, no Fresnel truncation.
VectorXcd near_steering(const ArrayConfig& cfg, double theta, double r);

// 2 D^2 / lambda with aperture D = (N-1) d.
double rayleigh_distance(const ArrayConfig& cfg);

}  // namespace hfce
