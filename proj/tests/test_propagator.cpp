#include <doctest.h>

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "linear_system.hpp"
#include "propagator.hpp"

using namespace plaser;

namespace {

SystemParams optical_params(double g, double J) {
  SystemParams p;
  p.gamma = 1.0;
  p.g = g;
  p.J = J;
  p.omega_m = 1.0;
  p.gamma_m = 0.1;
  p.g_m = 0.0;
  p.E = 0.0;
  p.Delta = 0.0;
  p.n_th = 0.0;
  return p;
}

// With the pump off the optical block decouples and after peeling off the
// frame rotation it is a constant 2x2 system:
//   P_block(t) = diag(e^{iJt}, e^{-iJt}) exp(t [[k-iJ, c],[c, k+iJ]]),
// k = (g-gamma)/2, c = (g+gamma)/2. The exponential follows from
// exp(tA) = e^{kt} (cosh(st) I + sinh(st)/s (A - k I)), s = sqrt(c^2-J^2).
void closed_optical_block(const SystemParams& p, double t, cplx out[2][2]) {
  const double k = 0.5 * (p.g - p.gamma);
  const double c = 0.5 * (p.g + p.gamma);
  const cplx s = std::sqrt(cplx(c * c - p.J * p.J, 0.0));
  const cplx ch = std::cosh(s * t);
  const cplx sh_over_s = (std::abs(s) < 1e-12) ? cplx(t, 0.0) : std::sinh(s * t) / s;
  const double ekt = std::exp(k * t);
  const cplx iJ(0.0, p.J);
  // exp(tA) entries
  const cplx a00 = ekt * (ch - sh_over_s * iJ);
  const cplx a01 = ekt * (sh_over_s * c);
  const cplx a10 = a01;
  const cplx a11 = ekt * (ch + sh_over_s * iJ);
  const cplx f = std::polar(1.0, p.J * t);
  out[0][0] = f * a00;
  out[0][1] = f * a01;
  out[1][0] = std::conj(f) * a10;
  out[1][1] = std::conj(f) * a11;
}

double block_error(const PropagatorGrid& pg, const SystemParams& p) {
  cplx want[2][2];
  closed_optical_block(p, pg.grid.t_end, want);
  const Mat6& P = pg.P.back();
  const int idx[2] = {0, 2};
  double err = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      err = std::max(err, std::abs(P(idx[r], idx[c]) - want[r][c]));
  return err;
}

}  // namespace

TEST_CASE("product propagator reproduces the closed optical block") {
  const SystemParams p = optical_params(0.4, 0.9);
  const LinearSystemOps ops = make_system(p, NoiseMode::paper_literal);
  const double t_end = 1.7;

  const PropagatorGrid mid = evolve_product(ops, TimeGrid(t_end, 8000), ProductMethod::midpoint_product);
  CHECK(block_error(mid, p) < 1e-7);

  // frozen closed-form anchor for this parameter set
  cplx want[2][2];
  closed_optical_block(p, t_end, want);
  CHECK(std::abs(want[0][0] - cplx(0.79691354071070319, 0.31133349993716958)) < 1e-13);
  CHECK(std::abs(want[0][1] - cplx(0.02485560520079904, 0.60892281798945658)) < 1e-13);

  // daggered copies evolve as the conjugate block
  const Mat6& P = mid.P.back();
  CHECK(std::abs(P(1, 1) - std::conj(P(0, 0))) == 0.0);
  CHECK(std::abs(P(1, 3) - std::conj(P(0, 2))) == 0.0);
  // no mixing into the mechanical sector without pump-induced coupling
  CHECK(std::abs(P(0, 4)) == 0.0);
  CHECK(std::abs(P(4, 0)) == 0.0);
  CHECK(std::abs(P(4, 4) - std::exp(-p.gamma_m * t_end)) < 1e-9);
}

TEST_CASE("factorization orders converge at their nominal rates") {
  const SystemParams p = optical_params(0.4, 0.9);
  const LinearSystemOps ops = make_system(p, NoiseMode::paper_literal);
  const double t_end = 1.7;

  const double e_eul_1 = block_error(evolve_product(ops, TimeGrid(t_end, 2000), ProductMethod::euler_product), p);
  const double e_eul_2 = block_error(evolve_product(ops, TimeGrid(t_end, 4000), ProductMethod::euler_product), p);
  const double e_mid_1 = block_error(evolve_product(ops, TimeGrid(t_end, 2000), ProductMethod::midpoint_product), p);
  const double e_mid_2 = block_error(evolve_product(ops, TimeGrid(t_end, 4000), ProductMethod::midpoint_product), p);

  CHECK(e_eul_1 / e_eul_2 == doctest::Approx(2.0).epsilon(0.15));
  CHECK(e_mid_1 / e_mid_2 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(e_mid_1 < e_eul_1 / 50.0);
}

TEST_CASE("interval propagator algebra") {
  // full system with pump and optomechanical coupling for generality
  SystemParams p = optical_params(0.5, 2.0);
  p.omega_m = 4.0;
  p.Delta = -6.0;
  p.E = 3.0;
  p.g_m = 0.02;
  p.n_th = 5.0;
  const LinearSystemOps ops = make_system(p, NoiseMode::paper_literal);
  const TimeGrid grid = TimeGrid::make(p, 2.0);
  const PropagatorGrid pg = evolve_product(ops, grid, ProductMethod::midpoint_product);
  const long long n = grid.n_steps;

  SUBCASE("identity at equal times") {
    for (long long i : {0LL, n / 2, n}) {
      const Mat6 d = interval_propagator(pg, static_cast<int>(i), static_cast<int>(i));
      CHECK((d - Mat6::Identity()).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("composition") {
    const int i0 = 0, i1 = static_cast<int>(n / 3), i2 = static_cast<int>(n);
    const Mat6 direct = interval_propagator(pg, i2, i0);
    const Mat6 split = interval_propagator(pg, i2, i1) * interval_propagator(pg, i1, i0);
    CHECK((direct - split).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("conjugation symmetry") {
    const Mat6 S = OperatorBasis::swap_matrix();
    for (int j : {0, static_cast<int>(n / 2)}) {
      const Mat6 d = interval_propagator(pg, static_cast<int>(n), j);
      CHECK((S * d * S - d.conjugate()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  SUBCASE("bounds checking") {
    CHECK_THROWS_WITH_AS(interval_propagator(pg, static_cast<int>(n) + 1, 0), doctest::Contains("GridMismatch"), SimError);
    CHECK_THROWS_AS(interval_propagator(pg, -1, 0), SimError);
  }
}

TEST_CASE("ill-conditioned base point is rejected") {
  // balanced gain makes the propagator hyperbolic: modes e^{+t} and e^{-t},
  // cond ~ e^{2t} crosses 1e12 before t = 16
  const SystemParams p = optical_params(1.0, 0.0);
  const LinearSystemOps ops = make_system(p, NoiseMode::paper_literal);
  const TimeGrid grid = TimeGrid::make(p, 16.0);
  const PropagatorGrid pg = evolve_product(ops, grid, ProductMethod::midpoint_product);

  const int n = static_cast<int>(grid.n_steps);
  const int early = static_cast<int>(5.0 / grid.h);
  CHECK_NOTHROW(interval_propagator(pg, n, early));
  try {
    interval_propagator(pg, n, n - 1);
    FAIL("expected IllConditioned");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrCode::IllConditioned);
  }
}

TEST_CASE("runaway gain overflows with a blow-up time") {
  // strong unbalanced gain: coefficients grow like e^{5t} after the optical
  // splitting, reaching 1e300 near t = 245
  SystemParams p = optical_params(10.0, 0.0);
  const LinearSystemOps ops = make_system(p, NoiseMode::paper_literal);
  const TimeGrid grid = TimeGrid::make(p, 400.0);
  try {
    evolve_product(ops, grid, ProductMethod::euler_product);
    FAIL("expected Overflow");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrCode::Overflow);
    CHECK(e.payload > 50.0);
    CHECK(e.payload < 400.0);
  }
}

TEST_CASE("condition estimate on known matrices") {
  Mat6 m = Mat6::Identity();
  CHECK(condition_estimate(m) == doctest::Approx(1.0));
  m(0, 0) = 1e8;
  m(1, 1) = 1e-4;
  CHECK(condition_estimate(m) == doctest::Approx(1e12).epsilon(0.01));
  CHECK(std::string(product_method_name(ProductMethod::euler_product)) == "euler_product");
  CHECK(parse_product_method("midpoint_product") == ProductMethod::midpoint_product);
  CHECK_THROWS_AS(parse_product_method("rk4"), SimError);
}
