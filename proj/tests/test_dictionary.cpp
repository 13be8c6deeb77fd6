#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "hfce/dictionary.hpp"
#include "hfce/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

using namespace hfce;

TEST_CASE("angle grid") {
  SUBCASE("N=2") {
    ArrayConfig cfg(2, 0.01);
    auto g = angle_grid(cfg);
    CHECK(g[0] == doctest::Approx(std::asin(-0.5)).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(std::asin(0.5)).epsilon(1e-15));
  }
  SUBCASE("N=4 sines") {
    ArrayConfig cfg(4, 0.01);
    auto g = angle_grid(cfg);
    const double want[] = {-0.75, -0.25, 0.25, 0.75};
    for (int i = 0; i < 4; ++i) CHECK(std::sin(g[i]) == doctest::Approx(want[i]).epsilon(1e-15));
  }
  SUBCASE("uniform sine spacing 2/N") {
    ArrayConfig cfg(37, 0.01);
    auto g = angle_grid(cfg);
    for (size_t i = 1; i < g.size(); ++i) {
      CHECK(g[i] > g[i - 1]);
      CHECK(std::sin(g[i]) - std::sin(g[i - 1]) == doctest::Approx(2.0 / 37).epsilon(1e-12));
    }
  }
}

TEST_CASE("default rho") {
  CHECK(default_rho(5) == doctest::Approx(1.0 / 300.0).epsilon(1e-15));
  CHECK(default_rho(3) == doctest::Approx(1.0 / 180.0).epsilon(1e-15));
  CHECK_THROWS_AS(default_rho(0), std::invalid_argument);
}

TEST_CASE("angular dictionary") {
  ArrayConfig cfg(4, 0.01);
  Dictionary d = build_angular(cfg);
  CHECK(d.m() == 4);
  MatrixXcd gram = d.columns.adjoint() * d.columns;
  CHECK((gram - MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  for (int i = 0; i < d.m(); ++i) {
    CHECK(d.columns.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.meta[i].submatrix == 0);
    CHECK(std::isinf(d.meta[i].distance));
  }
}

TEST_CASE("polar dictionary") {
  // Odd N so the grid contains an exact broadside column.
  ArrayConfig cfg(5, 0.01);
  const double rho = 1.0 / 300.0;
  Dictionary d = build_polar(cfg, 2, rho);
  CHECK(d.m() == 10);
  CHECK(!d.has_angular);
  SUBCASE("ring distance identity (1 - sin^2)/r = 2 s rho") {
    for (int i = 0; i < d.m(); ++i) {
      const AtomMeta& a = d.meta[i];
      CHECK(a.submatrix >= 1);
      const double s2 = std::sin(a.angle) * std::sin(a.angle);
      CHECK((1.0 - s2) / a.distance ==
            doctest::Approx(2.0 * a.submatrix * rho).epsilon(1e-12));
    }
  }
  SUBCASE("broadside ring-1 distance is 1/(2 rho)") {
    // Column 2 of ring 1 has sin(theta) = 0 for N=5.
    CHECK(std::sin(d.meta[2].angle) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(d.meta[2].distance == doctest::Approx(150.0).epsilon(1e-12));
  }
  SUBCASE("unit columns") {
    for (int i = 0; i < d.m(); ++i)
      CHECK(d.columns.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("reactive-zone guard") {
    ArrayConfig big(200, 0.01);
    CHECK_THROWS_AS(build_polar(big, 5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_polar(big, 0, 1.0 / 300), std::invalid_argument);
    CHECK_THROWS_AS(build_polar(big, 5, -1.0), std::invalid_argument);
  }
}

TEST_CASE("joint dictionary") {
  ArrayConfig cfg(200, 0.01);
  Dictionary d = build_joint(cfg, 5, default_rho(5));
  CHECK(d.m() == 1200);
  CHECK(d.n_blocks() == 6);
  SUBCASE("block ordering and metadata") {
    auto grid = angle_grid(cfg);
    CHECK((d.columns.col(0) - far_steering(cfg, grid[0])).norm() < 1e-14);
    for (int b = 0; b < 6; ++b) {
      CHECK(d.ring_of_block(b) == b);
      for (int i = 0; i < 200; ++i) {
        CHECK(d.meta[b * 200 + i].submatrix == b);
        CHECK(d.meta[b * 200 + i].angle == doctest::Approx(grid[i]).epsilon(1e-15));
      }
    }
  }
  SUBCASE("zero rings degenerates to angular") {
    Dictionary a = build_joint(cfg, 0, 0.0);
    CHECK(a.m() == 200);
    CHECK(a.has_angular);
    CHECK((a.columns - build_angular(cfg).columns).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("coherence") {
  ArrayConfig cfg(32, 0.01);
  Dictionary d = build_joint(cfg, 3, default_rho(3, 2.0));
  CHECK(coherence(d, 7, 7) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coherence(d, 3, 9) < 1e-10);  // two angular atoms
  CHECK(coherence(d, 5, 70) == doctest::Approx(coherence(d, 70, 5)).epsilon(1e-12));
  CHECK_THROWS_AS(coherence(d, -1, 0), std::out_of_range);
  CHECK_THROWS_AS(coherence(d, 0, d.m()), std::out_of_range);
}

TEST_CASE("transform magnitude") {
  ArrayConfig cfg(200, 0.01);
  Dictionary d = build_joint(cfg, 5, default_rho(5));
  SUBCASE("dictionary atom peaks at itself") {
    // Peak property: an on-grid path's strongest transform entry is its own atom.
    for (int k : {17, 450, 1100}) {
      VectorXd mag = transform_magnitude(d, d.columns.col(k));
      CHECK(mag(k) == doctest::Approx(1.0).epsilon(1e-12));
      int arg = 0;
      mag.maxCoeff(&arg);
      CHECK(arg == k);
    }
  }
  SUBCASE("zero input") {
    CHECK(transform_magnitude(d, VectorXcd::Zero(200)).maxCoeff() == 0.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(transform_magnitude(d, VectorXcd::Zero(100)), std::invalid_argument);
  }
  SUBCASE("power diffusion of an off-grid near path") {
    // Regression fixture: one near path spreads energy across many angular
    // atoms; the count of angular entries above 0.3 is pinned.
    VectorXcd h = near_steering(cfg, 0.21, 45.0);
    VectorXd mag = transform_magnitude(d, h);
    int count = 0;
    for (int i = 0; i < 200; ++i)
      if (mag(i) > 0.3) ++count;
    CHECK(count > 1);
    CHECK(count == 3);  // pinned regression value
  }
}

TEST_CASE("ring energy concentration for in-coverage near atoms") {
  ArrayConfig cfg(200, 0.01);
  const double rho = default_rho(5);
  Dictionary d = build_polar(cfg, 5, rho);
  Rng rng = make_rng(31);
  std::uniform_real_distribution<double> ang(-M_PI / 3, M_PI / 3);
  std::uniform_real_distribution<double> dist(30.0, 300.0);
  for (int t = 0; t < 20; ++t) {
    VectorXcd b = near_steering(cfg, ang(rng), dist(rng));
    for (int s = 0; s < 5; ++s) {
      const double e = (d.columns.middleCols(s * 200, 200).adjoint() * b).squaredNorm();
      CHECK(e > 0.95);
      CHECK(e < 1.05);
    }
  }
}

TEST_CASE("dictionary dump") {
  ArrayConfig cfg(16, 0.01);
  Dictionary d = build_joint(cfg, 2, default_rho(2, 1.0));
  const std::string bin = "dump_test.bin", js = "dump_test.json";
  dump_dictionary(d, bin, js);
  std::ifstream b(bin, std::ios::binary | std::ios::ate);
  REQUIRE(b.good());
  CHECK(static_cast<long long>(b.tellg()) ==
        16LL * static_cast<long long>(d.m()) * static_cast<long long>(sizeof(std::complex<double>)));
  std::ifstream j(js);
  nlohmann::json meta;
  j >> meta;
  CHECK(meta["columns"].get<int>() == d.m());
  CHECK(meta["atoms"].size() == static_cast<size_t>(d.m()));
  CHECK(meta["atoms"][0]["distance_m"].get<double>() == -1.0);
  std::remove(bin.c_str());
  std::remove(js.c_str());
}
