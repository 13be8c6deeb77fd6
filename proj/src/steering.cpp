#include "hfce/steering.hpp"

#include <cmath>
#include <stdexcept>

namespace hfce {

ArrayConfig::ArrayConfig(int n, double d, double lambda)
    : n_antennas(n), spacing(d), wavelength(lambda) {
  if (n < 2) throw std::invalid_argument("ArrayConfig: n_antennas must be >= 2");
  if (!(d > 0)) throw std::invalid_argument("ArrayConfig: spacing must be positive");
  if (!(lambda > 0)) throw std::invalid_argument("ArrayConfig: wavelength must be positive");
}

std::vector<std::pair<double, double>> element_positions(const ArrayConfig& cfg) {
  std::vector<std::pair<double, double>> pos;
  pos.reserve(cfg.n_antennas);
  for (int n = 0; n < cfg.n_antennas; ++n)
    pos.emplace_back(0.0, cfg.element_offset(n) * cfg.spacing);
  return pos;
}

VectorXcd far_steering(const ArrayConfig& cfg, double theta) {
  const int n = cfg.n_antennas;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double step = 2.0 * M_PI * cfg.spacing / cfg.wavelength * std::sin(theta);
  VectorXcd a(n);
  for (int i = 0; i < n; ++i)
    a(i) = std::polar(scale, step * i);
  return a;
}

VectorXcd near_steering(const ArrayConfig& cfg, double theta, double r) {
  if (!(r > 0)) throw std::invalid_argument("near_steering: distance must be positive");
  const int n = cfg.n_antennas;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double k = 2.0 * M_PI / cfg.wavelength;
  const double rc = r * std::cos(theta);
  const double rs = r * std::sin(theta);
  VectorXcd b(n);
  for (int i = 0; i < n; ++i) {
    const double y = cfg.element_offset(i) * cfg.spacing;
    const double ri = std::hypot(rc, y - rs);
    b(i) = std::polar(scale, -k * (ri - r));
  }
  return b;
}

double rayleigh_distance(const ArrayConfig& cfg) {
  const double d = cfg.aperture();
  return 2.0 * d * d / cfg.wavelength;
}

}  // namespace hfce
