// Benchmark: the same campaign with one worker thread (serial reference) and
// with all available threads, asserting identical output and reporting the
// speedup.

#include <omp.h>

#include <chrono>
#include <iostream>

#include "hfce/harness.hpp"

namespace {

double timed(const hfce::ExperimentConfig& cfg, int threads, std::string& csv) {
  omp_set_num_threads(threads);
  const auto t0 = std::chrono::steady_clock::now();
  csv = hfce::table_to_csv(hfce::run_campaign(cfg));
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  hfce::ExperimentConfig cfg;
  cfg.campaign = "nmse_vs_snr";
  cfg.sweep = {0.0, 10.0, 20.0};
  cfg.trials = argc > 1 ? std::atoi(argv[1]) : 48;
  cfg.estimators = {{"pd_omp", {0.7}, 2}, {"npd_omp", {}, 2}, {"far_omp", {}, 2}};
  cfg.seed = 7;

  const int max_threads = omp_get_max_threads();
  std::string serial_csv, parallel_csv;
  const double t_serial = timed(cfg, 1, serial_csv);
  const double t_parallel = timed(cfg, max_threads, parallel_csv);

  std::cout << "serial   (1 thread):  " << t_serial << " s\n";
  std::cout << "parallel (" << max_threads << " threads): " << t_parallel << " s\n";
  std::cout << "speedup: " << t_serial / t_parallel << "x\n";

  if (serial_csv != parallel_csv) {
    std::cerr << "FAIL: parallel result differs from serial reference\n";
    return 1;
  }
  std::cout << "results identical across thread counts\n";
  return 0;
}
