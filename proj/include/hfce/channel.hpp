#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hfce/rng.hpp"
#include "hfce/steering.hpp"

namespace hfce {

enum class FieldType { Far, Near };

struct PathComponent {
  FieldType field_type = FieldType::Far;
  std::complex<double> gain{1.0, 0.0};
  double angle = 0.0;     // radians
  double distance = 1.0;  // meters; used in synthesis only when Near
  bool is_los = false;
};

struct Scenario {
  std::vector<PathComponent> paths;
  std::vector<int> far_set;
  std::vector<int> near_set;
};

struct ScenarioSampler {
  int n_paths = 7;
  // Near/far split: explicit ratio, or by Rayleigh distance when unset.
  std::optional<double> gamma;
  double angle_min = -M_PI / 3;
  double angle_max = M_PI / 3;
  double dist_min = 30.0;
  double dist_max = 300.0;
  bool include_los = false;
};

VectorXcd synth_path(const ArrayConfig& cfg, const PathComponent& p);
VectorXcd synth_hybrid(const ArrayConfig& cfg, const Scenario& s);
Scenario sample_scenario(Rng& rng, const ScenarioSampler& sampler, const ArrayConfig& cfg);

std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

}  // namespace hfce
