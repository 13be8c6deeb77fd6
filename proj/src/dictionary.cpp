#include "hfce/dictionary.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace hfce {

std::vector<double> angle_grid(const ArrayConfig& cfg) {
  const int n = cfg.n_antennas;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = std::asin((2.0 * (i + 1) - 1.0 - n) / n);
  return grid;
}

double default_rho(int rings, double r_min) {
  if (rings < 1) throw std::invalid_argument("default_rho: rings must be >= 1");
  return 1.0 / (2.0 * rings * r_min);
}

Dictionary build_angular(const ArrayConfig& cfg) {
  const auto grid = angle_grid(cfg);
  Dictionary d{MatrixXcd(cfg.n_antennas, cfg.n_antennas), {}, cfg, 0, 0.0, true};
  d.meta.reserve(cfg.n_antennas);
  for (int i = 0; i < cfg.n_antennas; ++i) {
    d.columns.col(i) = far_steering(cfg, grid[i]);
    d.meta.push_back({grid[i], std::numeric_limits<double>::infinity(), 0});
  }
  return d;
}

namespace {

void check_rho(const ArrayConfig& cfg, int rings, double rho) {
  if (rings < 1) throw std::invalid_argument("build_polar: rings must be >= 1");
  if (!(rho > 0)) throw std::invalid_argument("build_polar: rho must be positive");
  // Innermost ring at broadside must stay outside the reactive zone.
  if (1.0 / (2.0 * rings * rho) < 1.2 * cfg.aperture())
    throw std::invalid_argument("build_polar: rho too large, innermost ring inside reactive zone");
}

void append_rings(Dictionary& d, int first_col, int rings, double rho,
                  const std::vector<double>& grid) {
  const ArrayConfig& cfg = d.cfg;
  int col = first_col;
  for (int s = 1; s <= rings; ++s) {
    for (int i = 0; i < cfg.n_antennas; ++i) {
      const double sin2 = std::sin(grid[i]) * std::sin(grid[i]);
      const double r = (1.0 - sin2) / (2.0 * s * rho);
      d.columns.col(col) = near_steering(cfg, grid[i], r);
      d.meta.push_back({grid[i], r, s});
      ++col;
    }
  }
}

}  // namespace

Dictionary build_polar(const ArrayConfig& cfg, int rings, double rho) {
  check_rho(cfg, rings, rho);
  const auto grid = angle_grid(cfg);
  Dictionary d{MatrixXcd(cfg.n_antennas, cfg.n_antennas * rings), {}, cfg, rings, rho, false};
  d.meta.reserve(d.columns.cols());
  append_rings(d, 0, rings, rho, grid);
  return d;
}

Dictionary build_joint(const ArrayConfig& cfg, int rings, double rho) {
  if (rings == 0) return build_angular(cfg);
  check_rho(cfg, rings, rho);
  const auto grid = angle_grid(cfg);
  Dictionary d{MatrixXcd(cfg.n_antennas, cfg.n_antennas * (rings + 1)), {}, cfg, rings, rho, true};
  d.meta.reserve(d.columns.cols());
  for (int i = 0; i < cfg.n_antennas; ++i) {
    d.columns.col(i) = far_steering(cfg, grid[i]);
    d.meta.push_back({grid[i], std::numeric_limits<double>::infinity(), 0});
  }
  append_rings(d, cfg.n_antennas, rings, rho, grid);
  return d;
}

double coherence(const Dictionary& dict, int i, int j) {
  if (i < 0 || j < 0 || i >= dict.m() || j >= dict.m())
    throw std::out_of_range("coherence: column index out of range");
  return std::abs(dict.columns.col(i).dot(dict.columns.col(j)));
}

VectorXd transform_magnitude(const Dictionary& dict, const VectorXcd& h) {
  if (h.size() != dict.n())
    throw std::invalid_argument("transform_magnitude: dimension mismatch");
  return (dict.columns.adjoint() * h).cwiseAbs();
}

void dump_dictionary(const Dictionary& dict, const std::string& bin_path,
                     const std::string& json_path) {
  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("dump_dictionary: cannot open " + bin_path);
  bin.write(reinterpret_cast<const char*>(dict.columns.data()),
            sizeof(std::complex<double>) * dict.columns.size());

  nlohmann::json j;
  j["n_antennas"] = dict.n();
  j["columns"] = dict.m();
  j["rings"] = dict.rings;
  j["rho"] = dict.rho;
  j["has_angular"] = dict.has_angular;
  j["layout"] = "column-major complex128 interleaved";
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : dict.meta) {
    j["atoms"].push_back({{"angle_rad", a.angle},
                          {"distance_m", std::isinf(a.distance) ? -1.0 : a.distance},
                          {"submatrix", a.submatrix}});
  }
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("dump_dictionary: cannot open " + json_path);
  js << j.dump(2) << "\n";
}

}  // namespace hfce
