#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace hfce {

using Rng = std::mt19937_64;

// splitmix64 step; used only for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent stream seed from (master, a, b). Trials, sweep points
// and auxiliary draws (e.g. MMSE covariance estimation) each get their own
// (a, b) pair so that parallel execution order cannot change any stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL);
  h = splitmix64(s);
  s = h ^ (b * 0xd1b54a32d192ed03ULL + 0x13198a2e03707344ULL);
  return splitmix64(s);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// One draw from CN(0, var).
inline std::complex<double> complex_gaussian(Rng& rng, double var = 1.0) {
  std::normal_distribution<double> g(0.0, std::sqrt(var / 2.0));
  double re = g(rng);
  double im = g(rng);
  return {re, im};
}

}  // namespace hfce
