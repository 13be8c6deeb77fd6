#include "hfce/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace hfce {

WhitenedSystem prepare_system(const PilotObservation& obs, const Dictionary& dict) {
  const Whitener wh = build_whitener(obs.codebook);
  WhitenedSystem sys;
  sys.y = wh.apply_inverse(obs.y);
  sys.phi = measurement_matrix(obs.codebook, wh, dict);
  sys.dict = &dict;
  sys.sigma2 = obs.sigma2;
  return sys;
}

std::vector<int> pd_range(const Dictionary& dict, int seed_idx, double m_bar,
                          double alpha, long* checks) {
  if (seed_idx < 0 || seed_idx >= dict.m())
    throw std::out_of_range("pd_range: seed index out of range");
  if (!(m_bar > 0.0) || m_bar > 1.0 + 1e-12)
    throw std::invalid_argument("pd_range: m_bar must be in (0,1]");

  const int n = dict.n();
  const double thr = alpha / m_bar;
  const int base = seed_idx % n;
  const auto seed_col = dict.columns.col(seed_idx);

  std::vector<int> out;
  for (int b = 0; b < dict.n_blocks(); ++b) {
    const int lo = b * n;
    const int hi = lo + n;  // exclusive
    for (int di = 0; di <= n / 2; ++di) {
      const int i1 = lo + base + di;
      const int i2 = lo + base - di;
      const bool v1 = i1 < hi;
      const bool v2 = i2 >= lo;
      if (checks) ++*checks;
      bool hit1 = false, hit2 = false;
      if (v1 && std::abs(seed_col.dot(dict.columns.col(i1))) >= thr) {
        out.push_back(i1);
        hit1 = true;
      }
      if (di > 0 && v2 && std::abs(seed_col.dot(dict.columns.col(i2))) >= thr) {
        out.push_back(i2);
        hit2 = true;
      }
      if (di == 0) hit2 = hit1;
      if (!hit1 && !hit2) break;
    }
  }
  if (std::find(out.begin(), out.end(), seed_idx) == out.end()) out.push_back(seed_idx);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct OmpState {
  std::vector<int> support;
  std::vector<char> taken;
  VectorXcd resid;
  VectorXcd coeffs;
  bool rank_deficient = false;

  explicit OmpState(const WhitenedSystem& sys)
      : taken(sys.phi.cols(), 0), resid(sys.y) {}
};

// argmax_i |phi(:,i)^H R|^2 over [begin,end) excluding taken columns.
// Returns -1 when nothing is selectable. `mag` gets the winning magnitude.
int select_atom(const WhitenedSystem& sys, const OmpState& st, int begin, int end,
                double* mag) {
  VectorXcd corr = sys.phi.middleCols(begin, end - begin).adjoint() * st.resid;
  int best = -1;
  double best2 = -1.0;
  for (int i = 0; i < corr.size(); ++i) {
    if (st.taken[begin + i]) continue;
    const double v = std::norm(corr(i));
    if (v > best2) {
      best2 = v;
      best = begin + i;
    }
  }
  if (mag) *mag = best >= 0 ? std::sqrt(best2) : 0.0;
  return best;
}

void refit(const WhitenedSystem& sys, OmpState& st) {
  const int k = static_cast<int>(st.support.size());
  MatrixXcd sub(sys.phi.rows(), k);
  for (int i = 0; i < k; ++i) sub.col(i) = sys.phi.col(st.support[i]);
  Eigen::CompleteOrthogonalDecomposition<MatrixXcd> cod(sub);
  st.coeffs = cod.solve(sys.y);
  if (cod.rank() < k) st.rank_deficient = true;
  st.resid = sys.y - sub * st.coeffs;
}

// Adds candidates (most coherent with the seed first) until the support would
// reach the measurement count. Returns true on overflow.
bool grow_support(const WhitenedSystem& sys, OmpState& st, int seed,
                  std::vector<int> candidates, PathDetection& det) {
  const Dictionary& dict = *sys.dict;
  const int cap = static_cast<int>(sys.phi.rows()) - 1;
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(candidates.size());
  for (int idx : candidates)
    ranked.emplace_back(idx == seed ? 2.0 : coherence(dict, seed, idx), idx);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  bool overflow = false;
  for (const auto& [c, idx] : ranked) {
    if (st.taken[idx]) continue;
    if (static_cast<int>(st.support.size()) >= cap) {
      overflow = true;
      break;
    }
    st.support.push_back(idx);
    st.taken[idx] = 1;
    det.indices.push_back(idx);
  }
  return overflow;
}

Estimate finish(const WhitenedSystem& sys, OmpState& st, SupportSet support, long noi,
                bool overflow) {
  const Dictionary& dict = *sys.dict;
  Estimate est;
  est.support = std::move(support);
  est.support.indices = st.support;
  est.sparse_coeffs = st.coeffs;
  est.spatial = VectorXcd::Zero(dict.n());
  for (size_t i = 0; i < st.support.size(); ++i)
    est.spatial += st.coeffs(i) * dict.columns.col(st.support[i]);
  for (const auto& det : est.support.per_path) {
    const auto& meta = dict.meta[det.seed];
    auto it = std::find(st.support.begin(), st.support.end(), det.seed);
    std::complex<double> g = it != st.support.end()
                                 ? st.coeffs(it - st.support.begin())
                                 : std::complex<double>(0.0, 0.0);
    est.per_path_params.push_back({meta.angle, meta.distance, g});
  }
  est.iterations = noi;
  est.residual_norm = st.resid.norm();
  est.overflow = overflow;
  est.rank_deficient = st.rank_deficient;
  return est;
}

// Shared greedy loop. `expand` maps (seed, m_bar) to the candidate set for
// that detection.
template <typename Expand>
Estimate greedy_loop(const WhitenedSystem& sys, int n_paths, int begin, int end,
                     Expand&& expand) {
  if (n_paths < 1) throw std::invalid_argument("estimator: n_paths must be >= 1");
  OmpState st(sys);
  SupportSet support;
  long noi = 0;
  bool overflow = false;
  double m1 = 0.0;

  for (int l = 0; l < n_paths; ++l) {
    double mag = 0.0;
    const int seed = select_atom(sys, st, begin, end, &mag);
    if (seed < 0 || !(mag > 0.0)) break;
    if (l == 0) m1 = mag;
    const double m_bar = std::min(1.0, mag / m1);

    PathDetection det;
    det.seed = seed;
    det.m_bar = m_bar;
    overflow |= grow_support(sys, st, seed, expand(seed, m_bar, &noi), det);
    support.per_path.push_back(std::move(det));
    refit(sys, st);
    if (overflow) break;
  }
  if (noi == 0) noi = static_cast<long>(support.per_path.size());
  return finish(sys, st, std::move(support), noi, overflow);
}

}  // namespace

Estimate pd_omp(const WhitenedSystem& sys, const PdOmpConfig& cfg) {
  if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0)
    throw std::invalid_argument("pd_omp: alpha must be in (0,1]");
  return greedy_loop(sys, cfg.n_paths, 0, static_cast<int>(sys.phi.cols()),
                     [&](int seed, double m_bar, long* noi) {
                       return pd_range(*sys.dict, seed, m_bar, cfg.alpha, noi);
                     });
}

Estimate npd_omp(const WhitenedSystem& sys, int n_paths) {
  return greedy_loop(sys, n_paths, 0, static_cast<int>(sys.phi.cols()),
                     [](int seed, double, long*) { return std::vector<int>{seed}; });
}

Estimate plain_omp(const WhitenedSystem& sys, int n_paths, int col_begin, int col_end) {
  if (col_end < 0) col_end = static_cast<int>(sys.phi.cols());
  return greedy_loop(sys, n_paths, col_begin, col_end,
                     [](int seed, double, long*) { return std::vector<int>{seed}; });
}

Estimate far_omp(const WhitenedSystem& sys_angular, int n_paths) {
  return plain_omp(sys_angular, n_paths, 0,
                   sys_angular.dict->has_angular ? sys_angular.dict->n()
                                                 : static_cast<int>(sys_angular.phi.cols()));
}

Estimate near_omp(const WhitenedSystem& sys_polar, int n_paths) {
  const int begin = sys_polar.dict->has_angular ? sys_polar.dict->n() : 0;
  return plain_omp(sys_polar, n_paths, begin, static_cast<int>(sys_polar.phi.cols()));
}

namespace {

Estimate two_stage(const WhitenedSystem& sys, int l_far, int l_near, int window) {
  const Dictionary& dict = *sys.dict;
  if (!dict.has_angular || dict.rings < 1)
    throw std::invalid_argument("hf/sd_omp: joint dictionary required");
  if (l_far < 0 || l_near < 0 || l_far + l_near < 1)
    throw std::invalid_argument("hf/sd_omp: invalid stage path counts");

  OmpState st(sys);
  SupportSet support;
  bool overflow = false;
  const int n = dict.n();

  auto stage = [&](int count, int begin, int end, int w) {
    for (int l = 0; l < count; ++l) {
      double mag = 0.0;
      const int seed = select_atom(sys, st, begin, end, &mag);
      if (seed < 0 || !(mag > 0.0)) return;
      PathDetection det;
      det.seed = seed;
      det.m_bar = 1.0;
      std::vector<int> cand{seed};
      for (int d = 1; d <= w; ++d) {
        if (seed + d < end) cand.push_back(seed + d);
        if (seed - d >= begin) cand.push_back(seed - d);
      }
      overflow |= grow_support(sys, st, seed, cand, det);
      support.per_path.push_back(std::move(det));
      refit(sys, st);
      if (overflow) return;
    }
  };

  stage(l_far, 0, n, window);
  if (!overflow) stage(l_near, n, static_cast<int>(sys.phi.cols()), 0);
  // Every refit already solves over the full union support, so the final
  // joint refit has happened by construction.
  return finish(sys, st, std::move(support),
                static_cast<long>(support.per_path.size()), overflow);
}

}  // namespace

Estimate hf_omp(const WhitenedSystem& sys_joint, int l_far, int l_near) {
  return two_stage(sys_joint, l_far, l_near, 0);
}

Estimate sd_omp(const WhitenedSystem& sys_joint, int l_far, int l_near, int window) {
  if (window < 0) throw std::invalid_argument("sd_omp: window must be >= 0");
  return two_stage(sys_joint, l_far, l_near, window);
}

Estimate lmmse(const PilotObservation& obs, const MatrixXcd& channel_cov) {
  const BeamformingCodebook& cb = obs.codebook;
  if (channel_cov.rows() != cb.n || channel_cov.cols() != cb.n)
    throw std::invalid_argument("lmmse: covariance dimension mismatch");

  MatrixXcd block = MatrixXcd::Zero(cb.rows(), cb.rows());
  for (int q = 0; q < cb.q_slots; ++q)
    block.block(q * cb.n_rf, q * cb.n_rf, cb.n_rf, cb.n_rf) =
        cb.slot(q) * cb.slot(q).adjoint();

  const MatrixXcd rwh = channel_cov * cb.stacked.adjoint();
  MatrixXcd inner = cb.stacked * rwh + obs.sigma2 * block;

  Estimate est;
  Eigen::LDLT<MatrixXcd> ldlt(inner);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    inner += 1e-10 * MatrixXcd::Identity(inner.rows(), inner.cols());
    ldlt.compute(inner);
    est.rank_deficient = true;
  }
  est.spatial = rwh * ldlt.solve(obs.y);
  est.residual_norm = (obs.y - cb.stacked * est.spatial * obs.pilot).norm();
  est.iterations = 1;
  return est;
}

double nmse_ratio(const Estimate& est, const VectorXcd& truth) {
  const double t2 = truth.squaredNorm();
  if (!(t2 > 0)) throw std::invalid_argument("nmse: zero truth channel");
  return (est.spatial - truth).squaredNorm() / t2;
}

double nmse_db(const Estimate& est, const VectorXcd& truth) {
  return std::max(-200.0, 10.0 * std::log10(nmse_ratio(est, truth)));
}

std::string estimate_to_json(const Estimate& est) {
  nlohmann::json j;
  j["support"] = est.support.indices;
  j["per_path"] = nlohmann::json::array();
  for (const auto& p : est.per_path_params)
    j["per_path"].push_back({{"theta_rad", p.angle},
                             {"distance_m", std::isinf(p.distance) ? -1.0 : p.distance},
                             {"gain_re", p.gain.real()},
                             {"gain_im", p.gain.imag()}});
  j["iterations"] = est.iterations;
  j["residual_norm"] = est.residual_norm;
  j["overflow"] = est.overflow;
  j["rank_deficient"] = est.rank_deficient;
  return j.dump(2);
}

}  // namespace hfce
