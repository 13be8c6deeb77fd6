#include "hfce/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hfce/analysis.hpp"
#include "hfce/channel.hpp"
#include "json.hpp"

namespace hfce {

namespace {

const std::set<std::string> kCampaigns = {
    "nmse_vs_snr",  "nmse_vs_pilot",  "nmse_vs_alpha",
    "nmse_vs_gamma", "joint_vs_polar", "iterations_vs_alpha"};

const std::set<std::string> kEstimators = {
    "pd_omp", "npd_omp", "far_omp", "near_omp",
    "hf_omp", "sd_omp",  "mmse",    "polar_pd_omp"};

void validate(const ExperimentConfig& cfg) {
  if (!kCampaigns.count(cfg.campaign))
    throw std::invalid_argument("unknown campaign: " + cfg.campaign);
  if (cfg.sweep.empty()) throw std::invalid_argument("sweep must be non-empty");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.estimators.empty()) throw std::invalid_argument("estimators must be non-empty");
  for (const auto& e : cfg.estimators)
    if (!kEstimators.count(e.name))
      throw std::invalid_argument("unknown estimator: " + e.name);
}

struct PointParams {
  double snr_db;
  int q_slots;
  std::optional<double> gamma;
  int rings;
  std::optional<double> alpha_override;
};

PointParams point_params(const ExperimentConfig& cfg, double sweep_value) {
  PointParams p{cfg.snr_db, cfg.q_slots, cfg.gamma, cfg.rings, std::nullopt};
  if (cfg.campaign == "nmse_vs_snr") {
    p.snr_db = sweep_value;
  } else if (cfg.campaign == "nmse_vs_pilot") {
    p.q_slots = static_cast<int>(std::lround(sweep_value));
  } else if (cfg.campaign == "nmse_vs_alpha" || cfg.campaign == "iterations_vs_alpha") {
    p.alpha_override = sweep_value;
  } else if (cfg.campaign == "nmse_vs_gamma") {
    p.gamma = sweep_value;
  } else if (cfg.campaign == "joint_vs_polar") {
    p.rings = static_cast<int>(std::lround(sweep_value));
  }
  return p;
}

// One estimator's per-trial record; one slot per alpha variant.
struct TrialResult {
  std::vector<double> ratio;
  std::vector<double> db;
  std::vector<double> noi;
  std::vector<double> crlb;
  bool ok = false;
};

bool needs_polar_dict(const ExperimentConfig& cfg) {
  for (const auto& e : cfg.estimators)
    if (e.name == "polar_pd_omp") return true;
  return false;
}

bool needs_mmse(const ExperimentConfig& cfg) {
  for (const auto& e : cfg.estimators)
    if (e.name == "mmse") return true;
  return false;
}

MatrixXcd sample_channel_cov(const ExperimentConfig& cfg, const ArrayConfig& ac,
                             const ScenarioSampler& sampler, std::uint64_t stream_seed) {
  Rng rng = make_rng(stream_seed);
  const int draws = std::max(1, cfg.mmse_cov_draws);
  MatrixXcd h(ac.n_antennas, draws);
  for (int i = 0; i < draws; ++i)
    h.col(i) = synth_hybrid(ac, sample_scenario(rng, sampler, ac));
  return (h * h.adjoint()) / static_cast<double>(draws);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double stddev(const std::vector<double>& v, double m) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / v.size());
}

}  // namespace

ResultTable run_campaign(const ExperimentConfig& cfg) {
  validate(cfg);
  const ArrayConfig ac = cfg.spacing
                             ? ArrayConfig(cfg.n_antennas, *cfg.spacing, cfg.wavelength)
                             : ArrayConfig(cfg.n_antennas, cfg.wavelength);
  ResultTable table;

  for (size_t sv = 0; sv < cfg.sweep.size(); ++sv) {
    const double sweep_value = cfg.sweep[sv];
    const PointParams pp = point_params(cfg, sweep_value);
    const auto t0 = std::chrono::steady_clock::now();

    const double rho = cfg.rho ? *cfg.rho : default_rho(pp.rings, cfg.dist_min);
    const Dictionary dict_joint = build_joint(ac, pp.rings, rho);
    const int n = ac.n_antennas;
    const int m_joint = dict_joint.m();
    std::optional<Dictionary> dict_polar;
    if (needs_polar_dict(cfg)) dict_polar = build_polar(ac, pp.rings, rho);

    ScenarioSampler sampler;
    sampler.n_paths = cfg.n_paths;
    sampler.gamma = pp.gamma;
    sampler.include_los = cfg.include_los;
    sampler.angle_min = cfg.angle_min_deg * M_PI / 180.0;
    sampler.angle_max = cfg.angle_max_deg * M_PI / 180.0;
    sampler.dist_min = cfg.dist_min;
    sampler.dist_max = cfg.dist_max;

    MatrixXcd channel_cov;
    if (needs_mmse(cfg))
      channel_cov = sample_channel_cov(cfg, ac, sampler, derive_seed(cfg.seed, 0xC0Bu, sv));

    // Per-estimator alpha variants for this sweep point.
    std::vector<std::vector<double>> variant_alphas;
    for (const auto& e : cfg.estimators) {
      if (e.name == "pd_omp" || e.name == "polar_pd_omp") {
        if (pp.alpha_override)
          variant_alphas.push_back({*pp.alpha_override});
        else
          variant_alphas.push_back(e.alphas);
      } else {
        variant_alphas.push_back({0.0});
      }
    }

    const int n_est = static_cast<int>(cfg.estimators.size());
    std::vector<std::vector<TrialResult>> results(
        cfg.trials, std::vector<TrialResult>(n_est));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
      // The trial stream depends only on (seed, trial) so sweep points share
      // scenarios/codebooks/noise shapes (paired comparisons along the axis).
      Rng rng = make_rng(derive_seed(cfg.seed, 0xA11u, t));
      try {
        const Scenario scen = sample_scenario(rng, sampler, ac);
        const VectorXcd h = synth_hybrid(ac, scen);
        const BeamformingCodebook cb = gen_beamforming(rng, pp.q_slots, cfg.n_rf, ac);
        const double sigma2 = snr_to_sigma2(h, pp.snr_db);
        const PilotObservation obs = observe(rng, h, cb, sigma2);
        const double h2 = h.squaredNorm();

        const WhitenedSystem sys = prepare_system(obs, dict_joint);
        std::optional<WhitenedSystem> sys_polar;
        if (dict_polar) {
          sys_polar.emplace();
          sys_polar->y = sys.y;
          sys_polar->phi = sys.phi.rightCols(m_joint - n);
          sys_polar->dict = &*dict_polar;
          sys_polar->sigma2 = sigma2;
        }
        const int l_far = static_cast<int>(scen.far_set.size());
        const int l_near = static_cast<int>(scen.near_set.size());

        for (int e = 0; e < n_est; ++e) {
          const EstimatorSpec& spec = cfg.estimators[e];
          TrialResult& tr = results[t][e];
          try {
            for (double alpha : variant_alphas[e]) {
              Estimate est;
              if (spec.name == "pd_omp")
                est = pd_omp(sys, {cfg.n_paths, alpha});
              else if (spec.name == "polar_pd_omp")
                est = pd_omp(*sys_polar, {cfg.n_paths, alpha});
              else if (spec.name == "npd_omp")
                est = npd_omp(sys, cfg.n_paths);
              else if (spec.name == "far_omp")
                est = plain_omp(sys, cfg.n_paths, 0, n);
              else if (spec.name == "near_omp")
                est = plain_omp(sys, cfg.n_paths, n, m_joint);
              else if (spec.name == "hf_omp")
                est = hf_omp(sys, l_far, l_near);
              else if (spec.name == "sd_omp")
                est = sd_omp(sys, l_far, l_near, spec.window);
              else  // mmse
                est = lmmse(obs, channel_cov);

              tr.ratio.push_back(nmse_ratio(est, h));
              tr.db.push_back(nmse_db(est, h));
              tr.noi.push_back(static_cast<double>(est.iterations));
              if (spec.name == "pd_omp" && !est.support.indices.empty())
                tr.crlb.push_back(normalized_crlb(
                    sigma2, static_cast<int>(est.support.indices.size()),
                    pp.q_slots, cfg.n_rf, n, h2));
            }
            tr.ok = true;
          } catch (const std::exception&) {
            tr.ok = false;  // excluded, counted below
          }
        }
      } catch (const std::exception&) {
        // Trial-level failure (e.g. degenerate codebook): all estimators excluded.
      }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (int e = 0; e < n_est; ++e) {
      const auto& alphas = variant_alphas[e];
      // Best alpha variant by mean ratio.
      int best = 0;
      double best_mean = std::numeric_limits<double>::infinity();
      for (size_t a = 0; a < alphas.size(); ++a) {
        std::vector<double> r;
        for (int t = 0; t < cfg.trials; ++t)
          if (results[t][e].ok) r.push_back(results[t][e].ratio[a]);
        if (!r.empty() && mean(r) < best_mean) {
          best_mean = mean(r);
          best = static_cast<int>(a);
        }
      }
      std::vector<double> ratios, dbs, nois, crlbs;
      int excluded = 0;
      for (int t = 0; t < cfg.trials; ++t) {
        const TrialResult& tr = results[t][e];
        if (!tr.ok) {
          ++excluded;
          continue;
        }
        ratios.push_back(tr.ratio[best]);
        dbs.push_back(tr.db[best]);
        nois.push_back(tr.noi[best]);
        if (!tr.crlb.empty()) crlbs.push_back(tr.crlb[best]);
      }
      ResultRow row;
      row.sweep_value = sweep_value;
      row.estimator = cfg.estimators[e].name;
      row.mean_nmse_db = ratios.empty() ? 0.0 : 10.0 * std::log10(mean(ratios));
      row.mean_nmse_db_avgdb = mean(dbs);
      row.std_nmse_db = stddev(dbs, row.mean_nmse_db_avgdb);
      row.mean_noi = mean(nois);
      if (!crlbs.empty()) row.crlb_db = 10.0 * std::log10(mean(crlbs));
      row.trial_count = static_cast<int>(ratios.size());
      row.excluded = excluded;
      row.wall_time = wall;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

GammaStudy run_gamma_study(const ExperimentConfig& cfg) {
  if (cfg.campaign != "nmse_vs_gamma")
    throw std::invalid_argument("run_gamma_study: campaign must be nmse_vs_gamma");
  GammaStudy study;
  study.table = run_campaign(cfg);
  for (const auto& e : cfg.estimators) {
    std::vector<double> per_gamma;
    for (const auto& row : study.table.rows)
      if (row.estimator == e.name) per_gamma.push_back(row.mean_nmse_db);
    GammaSummaryRow s;
    s.estimator = e.name;
    s.mean = mean(per_gamma);
    s.stddev = stddev(per_gamma, s.mean);
    s.min = *std::min_element(per_gamma.begin(), per_gamma.end());
    s.max = *std::max_element(per_gamma.begin(), per_gamma.end());
    study.summary.push_back(std::move(s));
  }
  return study;
}

std::vector<ScalingPoint> runtime_scaling_probe(const std::vector<int>& n_values,
                                                const ExperimentConfig& cfg, int reps) {
  if (n_values.empty()) throw std::invalid_argument("runtime_scaling_probe: no N values");
  double alpha = 0.5;
  for (const auto& e : cfg.estimators)
    if (e.name == "pd_omp" && !e.alphas.empty()) alpha = e.alphas.front();

  std::vector<ScalingPoint> points;
  for (int n : n_values) {
    const ArrayConfig ac(n, cfg.wavelength);
    const double rho = cfg.rho ? *cfg.rho : default_rho(cfg.rings, cfg.dist_min);
    const Dictionary dict = build_joint(ac, cfg.rings, rho);

    Rng rng = make_rng(derive_seed(cfg.seed, 0x5CA1Eu, static_cast<std::uint64_t>(n)));
    ScenarioSampler sampler;
    sampler.n_paths = cfg.n_paths;
    const Scenario scen = sample_scenario(rng, sampler, ac);
    const VectorXcd h = synth_hybrid(ac, scen);
    const BeamformingCodebook cb = gen_beamforming(rng, cfg.q_slots, cfg.n_rf, ac);
    const PilotObservation obs = observe(rng, h, cb, snr_to_sigma2(h, cfg.snr_db));
    const WhitenedSystem sys = prepare_system(obs, dict);

    pd_omp(sys, {cfg.n_paths, alpha});  // warm-up
    std::vector<double> times(reps);
    for (int r = 0; r < reps; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      pd_omp(sys, {cfg.n_paths, alpha});
      times[r] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    std::sort(times.begin(), times.end());
    points.push_back({n, times[reps / 2]});
  }
  return points;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string table_to_csv(const ResultTable& table) {
  std::string out =
      "sweep_value,estimator,mean_nmse_db,mean_nmse_db_avgdb,std_nmse_db,"
      "mean_noi,crlb_db,trial_count,excluded\r\n";
  for (const auto& r : table.rows) {
    out += fmt_double(r.sweep_value) + "," + csv_field(r.estimator) + "," +
           fmt_double(r.mean_nmse_db) + "," + fmt_double(r.mean_nmse_db_avgdb) + "," +
           fmt_double(r.std_nmse_db) + "," + fmt_double(r.mean_noi) + "," +
           (r.crlb_db ? fmt_double(*r.crlb_db) : std::string()) + "," +
           std::to_string(r.trial_count) + "," + std::to_string(r.excluded) + "\r\n";
  }
  return out;
}

void write_csv(const ResultTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  f << table_to_csv(table);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

ResultTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_csv: cannot open " + path);
  ResultTable table;
  std::string line;
  bool header = true;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto v = split_csv_line(line);
    if (v.size() != 9) throw std::runtime_error("read_csv: malformed row");
    ResultRow r;
    r.sweep_value = std::stod(v[0]);
    r.estimator = v[1];
    r.mean_nmse_db = std::stod(v[2]);
    r.mean_nmse_db_avgdb = std::stod(v[3]);
    r.std_nmse_db = std::stod(v[4]);
    r.mean_noi = std::stod(v[5]);
    if (!v[6].empty()) r.crlb_db = std::stod(v[6]);
    r.trial_count = std::stoi(v[7]);
    r.excluded = std::stoi(v[8]);
    table.rows.push_back(std::move(r));
  }
  return table;
}

namespace {

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["campaign"] = cfg.campaign;
  j["array"] = {{"n_antennas", cfg.n_antennas}, {"wavelength", cfg.wavelength}};
  if (cfg.spacing) j["array"]["spacing"] = *cfg.spacing;
  j["dictionary"] = {{"S", cfg.rings}};
  if (cfg.rho) j["dictionary"]["rho"] = *cfg.rho;
  j["pilot"] = {{"Q", cfg.q_slots}, {"N_RF", cfg.n_rf}};
  j["scenario"] = {{"n_paths", cfg.n_paths},
                   {"include_los", cfg.include_los},
                   {"angle_range_deg", {cfg.angle_min_deg, cfg.angle_max_deg}},
                   {"distance_range_m", {cfg.dist_min, cfg.dist_max}}};
  if (cfg.gamma) j["scenario"]["gamma"] = *cfg.gamma;
  j["estimators"] = nlohmann::json::array();
  for (const auto& e : cfg.estimators) {
    nlohmann::json je = {{"name", e.name}};
    if (e.name == "pd_omp" || e.name == "polar_pd_omp") je["alpha"] = e.alphas;
    if (e.name == "sd_omp") je["window"] = e.window;
    j["estimators"].push_back(je);
  }
  j["sweep"] = cfg.sweep;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["snr_db"] = cfg.snr_db;
  j["mmse_cov_draws"] = cfg.mmse_cov_draws;
  return j;
}

std::string git_describe() {
  FILE* p = ::popen("git describe --always --dirty 2>/dev/null", "r");
  if (!p) return "unknown";
  char buf[128] = {0};
  std::string out;
  while (std::fgets(buf, sizeof buf, p)) out += buf;
  ::pclose(p);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out.empty() ? "unknown" : out;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_config: cannot open " + path);
  nlohmann::json j;
  f >> j;

  ExperimentConfig cfg;
  cfg.campaign = j.at("campaign").get<std::string>();
  if (j.contains("array")) {
    const auto& a = j["array"];
    if (a.contains("n_antennas")) cfg.n_antennas = a["n_antennas"].get<int>();
    if (a.contains("wavelength")) cfg.wavelength = a["wavelength"].get<double>();
    if (a.contains("spacing")) cfg.spacing = a["spacing"].get<double>();
  }
  if (j.contains("dictionary")) {
    const auto& d = j["dictionary"];
    if (d.contains("S")) cfg.rings = d["S"].get<int>();
    if (d.contains("rho")) cfg.rho = d["rho"].get<double>();
  }
  if (j.contains("pilot")) {
    const auto& p = j["pilot"];
    if (p.contains("Q")) cfg.q_slots = p["Q"].get<int>();
    if (p.contains("N_RF")) cfg.n_rf = p["N_RF"].get<int>();
  }
  if (j.contains("scenario")) {
    const auto& s = j["scenario"];
    if (s.contains("n_paths")) cfg.n_paths = s["n_paths"].get<int>();
    if (s.contains("gamma")) cfg.gamma = s["gamma"].get<double>();
    if (s.contains("include_los")) cfg.include_los = s["include_los"].get<bool>();
    if (s.contains("angle_range_deg")) {
      cfg.angle_min_deg = s["angle_range_deg"][0].get<double>();
      cfg.angle_max_deg = s["angle_range_deg"][1].get<double>();
    }
    if (s.contains("distance_range_m")) {
      cfg.dist_min = s["distance_range_m"][0].get<double>();
      cfg.dist_max = s["distance_range_m"][1].get<double>();
    }
  }
  for (const auto& je : j.at("estimators")) {
    EstimatorSpec e;
    e.name = je.at("name").get<std::string>();
    if (je.contains("alpha")) {
      if (je["alpha"].is_array())
        e.alphas = je["alpha"].get<std::vector<double>>();
      else
        e.alphas = {je["alpha"].get<double>()};
    }
    if (je.contains("window")) e.window = je["window"].get<int>();
    cfg.estimators.push_back(std::move(e));
  }
  cfg.sweep = j.at("sweep").get<std::vector<double>>();
  if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("snr_db")) cfg.snr_db = j["snr_db"].get<double>();
  if (j.contains("mmse_cov_draws")) cfg.mmse_cov_draws = j["mmse_cov_draws"].get<int>();
  validate(cfg);
  return cfg;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& path,
                    double wall_seconds, int threads) {
  nlohmann::json j;
  j["config"] = config_to_json(cfg);
  j["seed"] = cfg.seed;
  j["git_describe"] = git_describe();
  j["wall_time_s"] = wall_seconds;
  j["threads"] = threads;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_manifest: cannot open " + path);
  f << j.dump(2) << "\n";
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("HFCE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return requested;
}

}  // namespace hfce
