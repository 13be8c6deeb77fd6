#include "hfce/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace hfce {

VectorXcd synth_path(const ArrayConfig& cfg, const PathComponent& p) {
  if (p.field_type == FieldType::Far)
    return p.gain * far_steering(cfg, p.angle);
  return p.gain * near_steering(cfg, p.angle, p.distance);
}

VectorXcd synth_hybrid(const ArrayConfig& cfg, const Scenario& s) {
  VectorXcd h = VectorXcd::Zero(cfg.n_antennas);
  for (const auto& p : s.paths) h += synth_path(cfg, p);
  return h;
}

Scenario sample_scenario(Rng& rng, const ScenarioSampler& sampler, const ArrayConfig& cfg) {
  if (sampler.n_paths < 1) throw std::invalid_argument("sample_scenario: n_paths must be >= 1");
  int n_near = -1;
  if (sampler.gamma) {
    const double g = *sampler.gamma;
    if (g < 0.0 || g > 1.0) throw std::invalid_argument("sample_scenario: gamma out of [0,1]");
    const double exact = g * sampler.n_paths;
    n_near = static_cast<int>(std::lround(exact));
    if (std::abs(exact - n_near) > 1e-9)
      throw std::invalid_argument("sample_scenario: gamma * n_paths must be integral");
  }

  std::uniform_real_distribution<double> ang(sampler.angle_min, sampler.angle_max);
  std::uniform_real_distribution<double> dist(sampler.dist_min, sampler.dist_max);
  const double rayleigh = rayleigh_distance(cfg);

  Scenario s;
  s.paths.resize(sampler.n_paths);
  // Geometry and gains are drawn in a fixed order so that relabeling under a
  // different gamma never resamples them.
  for (int l = 0; l < sampler.n_paths; ++l) {
    PathComponent& p = s.paths[l];
    p.angle = ang(rng);
    p.distance = dist(rng);
    p.gain = complex_gaussian(rng);
    p.is_los = sampler.include_los && l == 0;
    if (p.is_los) p.gain = 1.0;
  }
  for (int l = 0; l < sampler.n_paths; ++l) {
    PathComponent& p = s.paths[l];
    const bool near = n_near >= 0 ? l < n_near : p.distance < rayleigh;
    p.field_type = near ? FieldType::Near : FieldType::Far;
    (near ? s.near_set : s.far_set).push_back(l);
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["paths"] = nlohmann::json::array();
  for (const auto& p : s.paths) {
    j["paths"].push_back({{"type", p.field_type == FieldType::Near ? "near" : "far"},
                          {"gain_re", p.gain.real()},
                          {"gain_im", p.gain.imag()},
                          {"angle_rad", p.angle},
                          {"distance_m", p.distance},
                          {"is_los", p.is_los}});
  }
  return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Scenario s;
  int l = 0;
  for (const auto& jp : j.at("paths")) {
    PathComponent p;
    p.field_type = jp.at("type").get<std::string>() == "near" ? FieldType::Near : FieldType::Far;
    p.gain = {jp.at("gain_re").get<double>(), jp.at("gain_im").get<double>()};
    p.angle = jp.at("angle_rad").get<double>();
    p.distance = jp.at("distance_m").get<double>();
    p.is_los = jp.at("is_los").get<bool>();
    (p.field_type == FieldType::Near ? s.near_set : s.far_set).push_back(l++);
    s.paths.push_back(p);
  }
  return s;
}

}  // namespace hfce
