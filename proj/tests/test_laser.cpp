#include <doctest.h>

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "laser.hpp"

using namespace plaser;

namespace {

SystemParams laser_params(double gamma_m, double g_m, double g, double J, double omega_m) {
  SystemParams p;
  p.gamma = 1.0;
  p.g = g;
  p.J = J;
  p.omega_m = omega_m;
  p.gamma_m = gamma_m;
  p.g_m = g_m;
  p.E = 0.0;
  p.Delta = 0.0;
  p.n_th = 0.0;
  return p;
}

// Series with a constant inversion, sampled the way the evolvers sample.
PopulationSeries constant_inversion_series(const SystemParams& p, const TimeGrid& grid,
                                           double dn) {
  PopulationSeries s;
  s.params = p;
  s.grid = grid;
  for (long long i : grid.output_indices()) {
    PopulationPoint pt;
    pt.t = grid.time(i);
    pt.s1.drive = LogValue::from_double(dn);
    s.points.push_back(pt);
  }
  return s;
}

}  // namespace

TEST_CASE("mechanical mode decays freely without coupling") {
  const SystemParams p = laser_params(0.25, 0.0, 0.0, 0.5, 1.0);
  const TimeGrid grid = TimeGrid::make(p, 1.0 / p.gamma_m);
  const PopulationSeries inv =
      inversion_series(p, grid, EvolutionMethod::moments, NoiseMode::paper_literal);
  const LaserTrajectory traj = integrate_laser(p, inv);

  CHECK(traj.t_ref == 4.0);
  CHECK(traj.amplification == doctest::Approx(std::exp(-2.0)).epsilon(1e-7));
  CHECK(amplification_ratio(traj) == traj.amplification);
  // free evolution: b(t) = e^{(-gamma_m - i omega_m) t}
  for (size_t k = 0; k < traj.t.size(); k += 31) {
    const cplx want = std::exp(cplx(-p.gamma_m, -p.omega_m) * traj.t[k]);
    CHECK(std::abs(traj.b_s[k] - want) < 1e-7);
    CHECK(std::abs(traj.p[k]) == 0.0);
  }
}

TEST_CASE("constant inversion matches the matrix exponential") {
  // (b, p) obey a constant linear system once dN is frozen; oracle values
  // from its exponential, independently computed
  const SystemParams p = laser_params(0.1, 0.5, 1.0, 0.5, 1.0);
  const TimeGrid grid(10.0, 4000);

  SUBCASE("growing case") {
    const PopulationSeries inv = constant_inversion_series(p, grid, 40.0);
    const LaserTrajectory traj = integrate_laser(p, inv);
    CHECK(traj.amplification == doctest::Approx(4744727704841.982).epsilon(1e-6));
    CHECK(std::abs(traj.b_ref - cplx(-1827698.8222047153, 1185008.3207106513)) <
          1e-6 * std::abs(traj.b_ref));
  }
  SUBCASE("weaker inversion grows less") {
    const PopulationSeries inv = constant_inversion_series(p, grid, 5.0);
    const LaserTrajectory traj = integrate_laser(p, inv);
    CHECK(traj.amplification == doctest::Approx(5722.114830970308).epsilon(1e-6));
  }
}

TEST_CASE("trajectory scales linearly with the seed") {
  const SystemParams p = laser_params(0.1, 0.5, 1.0, 0.5, 1.0);
  const TimeGrid grid(10.0, 2000);
  const PopulationSeries inv = constant_inversion_series(p, grid, 20.0);
  const LaserTrajectory unit = integrate_laser(p, inv);
  const cplx c(2.0, 1.0);
  const LaserTrajectory scaled = integrate_laser(p, inv, c);
  CHECK(scaled.amplification == doctest::Approx(unit.amplification).epsilon(1e-12));
  CHECK(std::abs(scaled.b_ref - c * unit.b_ref) < 1e-10 * std::abs(scaled.b_ref));
}

TEST_CASE("input validation") {
  const SystemParams p = laser_params(0.25, 0.0, 0.0, 0.5, 1.0);
  const TimeGrid grid = TimeGrid::make(p, 4.0);
  const PopulationSeries inv =
      inversion_series(p, grid, EvolutionMethod::moments, NoiseMode::paper_literal);

  SUBCASE("zero seed") {
    try {
      integrate_laser(p, inv, cplx(0.0, 0.0));
      FAIL("expected ConfigError");
    } catch (const SimError& e) {
      CHECK(e.code() == ErrCode::ConfigError);
    }
  }
  SUBCASE("series too short for the reference time") {
    SystemParams slow = p;
    slow.gamma_m = 0.1;  // t_ref = 10 but the series ends at 4
    try {
      integrate_laser(slow, inv);
      FAIL("expected GridMismatch");
    } catch (const SimError& e) {
      CHECK(e.code() == ErrCode::GridMismatch);
    }
  }
  SUBCASE("degenerate series") {
    PopulationSeries stub;
    stub.grid = grid;
    stub.points.resize(1);
    CHECK_THROWS_AS(integrate_laser(p, stub), SimError);
  }
}

TEST_CASE("threshold scan brackets the crossing") {
  SystemParams base = laser_params(0.5, 0.01, 0.5, 2.0, 4.0);
  base.Delta = -6.0;
  base.n_th = 10.0;

  const ThresholdScan scan = threshold_scan(base, {4000.0, 0.0, 500.0});
  REQUIRE(scan.E.size() == 3);
  // scanned ascending regardless of input order
  CHECK(scan.E[0] == 0.0);
  CHECK(scan.E[1] == 500.0);
  CHECK(scan.E[2] == 4000.0);
  CAPTURE(scan.amplification[0]);
  CAPTURE(scan.amplification[1]);
  CAPTURE(scan.amplification[2]);
  // no pump: pure decay, |b(t_ref)|^2 = e^{-2 gamma_m t_ref} = e^{-2}
  CHECK(scan.amplification[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));
  CHECK(scan.amplification[1] < 1.0);
  REQUIRE(scan.amplification[2] >= 1.0);
  CHECK(scan.E_threshold == 4000.0);
  CHECK(scan.E_below == 500.0);

  SUBCASE("no crossing in range") {
    CHECK_THROWS_WITH_AS(threshold_scan(base, {0.0, 500.0}),
                         doctest::Contains("NoThresholdInRange"), SimError);
  }
  SUBCASE("already above at the smallest pump") {
    CHECK_THROWS_WITH_AS(threshold_scan(base, {4000.0}),
                         doctest::Contains("NoThresholdInRange"), SimError);
  }
}
