#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "spectral.hpp"

using namespace plaser;

namespace {

SystemParams dimer(double gamma, double g, double J) {
  SystemParams p;
  p.gamma = gamma;
  p.g = g;
  p.J = J;
  p.omega_m = 1.0;
  p.gamma_m = 0.1;
  p.g_m = 0.0;
  p.E = 1.0;
  p.Delta = 0.0;
  p.n_th = 0.0;
  return p;
}

// deterministic LCG so the sweep is reproducible
struct Lcg {
  uint64_t s = 0x243f6a8885a308d3ull;
  double next() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(s >> 11) / 9007199254740992.0;
  }
};

}  // namespace

TEST_CASE("closed-form eigenvalues match numerical diagonalization") {
  Lcg rng;
  int done = 0;
  while (done < 200) {
    const double gamma = 0.1 + 2.9 * rng.next();
    const double g = -gamma + (3.0 + gamma) * rng.next();
    const double J = 3.0 * rng.next();
    const double G = g + gamma;
    const double disc = 4.0 * J * J - G * G;
    if (std::abs(disc) < 1e-3 * std::max(4.0 * J * J, G * G)) continue;  // resample near coalescence
    ++done;

    const SystemParams p = dimer(gamma, g, J);
    const PTEigensystem sys = pt_eigensystem(p);
    Eigen::ComplexEigenSolver<Mat2> es(pt_hamiltonian(p));
    REQUIRE(es.info() == Eigen::Success);
    cplx num[2] = {es.eigenvalues()(0), es.eigenvalues()(1)};
    // match by proximity
    if (std::abs(num[0] - sys.eigenvalues[0]) + std::abs(num[1] - sys.eigenvalues[1]) >
        std::abs(num[1] - sys.eigenvalues[0]) + std::abs(num[0] - sys.eigenvalues[1]))
      std::swap(num[0], num[1]);
    const double scale = std::max({1.0, std::abs(num[0]), std::abs(num[1])});
    CHECK(std::abs(num[0] - sys.eigenvalues[0]) <= 1e-12 * scale);
    CHECK(std::abs(num[1] - sys.eigenvalues[1]) <= 1e-12 * scale);

    // the published coefficient pairs are genuine eigenvectors
    const Mat2 H = pt_hamiltonian(p);
    for (int k = 0; k < 2; ++k) {
      const Vec2 q = sys.eigenmode_coeffs.col(k);
      CHECK((H * q - sys.eigenvalues[k] * q).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("spectrum anchors") {
  SUBCASE("passive dimer") {
    const PTEigensystem sys = pt_eigensystem(dimer(1.0, -1.0, 3.0));
    CHECK(std::abs(sys.eigenvalues[0] - cplx(-3.0, -1.0)) < 1e-14);
    CHECK(std::abs(sys.eigenvalues[1] - cplx(3.0, -1.0)) < 1e-14);
    CHECK(sys.overlap == cplx(0.0, 0.0));
    CHECK(sys.regime == PTRegime::unbroken);
    CHECK(mode_overlap(dimer(1.0, -1.0, 3.0)) == cplx(0.0, 0.0));
  }
  SUBCASE("split magnitude") {
    const PTEigensystem sys = pt_eigensystem(dimer(1.0, 0.5, 2.0));
    const double split = 2.0 * std::sqrt(4.0 - 0.5625);
    CHECK(std::abs(sys.eigenvalues[1] - sys.eigenvalues[0] - cplx(split, 0.0)) < 1e-13);
    CHECK(std::abs(sys.eigenvalues[0].imag() - (-0.25)) < 1e-15);
  }
  SUBCASE("gain-loss balance centers the spectrum") {
    const PTEigensystem sys = pt_eigensystem(dimer(1.0, 1.0, 3.0));
    CHECK(std::abs(sys.eigenvalues[0].imag()) < 1e-15);
    CHECK(std::abs(sys.eigenvalues[1].imag()) < 1e-15);
  }
}

TEST_CASE("overlap magnitudes follow the closed forms") {
  // unbroken: |overlap| = (g + gamma) / (2J); broken: 2J / (g + gamma)
  CHECK(std::abs(mode_overlap(dimer(1.0, 0.2, 2.0))) == doctest::Approx(1.2 / 4.0).epsilon(1e-12));
  CHECK(std::abs(mode_overlap(dimer(1.0, 0.0, 0.2))) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(std::abs(mode_overlap(dimer(0.4, 0.1, 5.0))) == doctest::Approx(0.5 / 10.0).epsilon(1e-12));

  // monotone in the coalescence parameter on the unbroken side
  double prev = -1.0;
  for (double g : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
    const double ov = std::abs(mode_overlap(dimer(1.0, g, 2.0)));
    CHECK(ov > prev);
    prev = ov;
  }
  CHECK(prev < 1.0);
}

TEST_CASE("coalescence handling") {
  const SystemParams ep = dimer(1.0, 1.0, 1.0);  // J = (g + gamma)/2
  const PTEigensystem sys = pt_eigensystem(ep);
  CHECK(sys.regime == PTRegime::exceptional);
  CHECK(std::abs(sys.eigenvalues[0] - sys.eigenvalues[1]) == 0.0);
  CHECK(std::abs(sys.eigenvalues[0]) < 1e-15);
  // both columns collapse onto the single unit-normalized mode
  CHECK((sys.eigenmode_coeffs.col(0) - sys.eigenmode_coeffs.col(1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(sys.eigenmode_coeffs.col(0).norm() - 1.0) < 1e-15);
  CHECK(sys.overlap == cplx(1.0, 0.0));
  CHECK_THROWS_WITH_AS(mode_overlap(ep), doctest::Contains("ExceptionalPoint"), SimError);

  // decoupled scalar corner: degenerate but diagonalizable
  const PTEigensystem corner = pt_eigensystem(dimer(1.0, -1.0, 0.0));
  CHECK(corner.regime == PTRegime::exceptional);
  CHECK(corner.overlap == cplx(0.0, 0.0));
  CHECK((corner.eigenmode_coeffs - Mat2::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("classical response in the two spectral phases") {
  std::vector<double> deltas;
  for (int i = 0; i <= 1200; ++i) deltas.push_back(-6.0 + 12.0 * i / 1200.0);

  SUBCASE("split spectrum gives two resonances") {
    SystemParams p = dimer(1.0, -0.9, 3.0);
    const ResponseCurve r = classical_response(p, deltas);
    CHECK(r.stationary);
    REQUIRE(r.peak_indices.size() == 2);
    // stationary-response maxima sit at +-sqrt(J^2 - gamma g - (gamma-g)^2/2)
    const double want = std::sqrt(9.0 + 0.9 - 0.5 * 1.9 * 1.9);
    CHECK(r.delta[r.peak_indices[0]] == doctest::Approx(-want).epsilon(0.01));
    CHECK(r.delta[r.peak_indices[1]] == doctest::Approx(want).epsilon(0.01));
  }
  SUBCASE("merged spectrum gives one resonance") {
    SystemParams p = dimer(1.0, -0.5, 0.1);
    const ResponseCurve r = classical_response(p, deltas);
    CHECK(r.stationary);
    REQUIRE(r.peak_indices.size() == 1);
    CHECK(std::abs(r.delta[r.peak_indices[0]]) < 0.02);
  }
  SUBCASE("fully passive pair") {
    // interference of the overlapping resonances pulls the maxima inside
    // the bare splitting: peaks at +-sqrt(J^2 - gamma^2), not at +-J
    SystemParams p = dimer(1.0, -1.0, 3.0);
    const ResponseCurve r = classical_response(p, deltas);
    REQUIRE(r.peak_indices.size() == 2);
    CHECK(r.delta[r.peak_indices[1]] == doctest::Approx(std::sqrt(8.0)).epsilon(0.01));
  }
}

TEST_CASE("stationary response agrees with direct integration") {
  // independent check of the closed form: integrate the driven dimer to a
  // long horizon and compare |a2|^2 after transients die out
  const SystemParams p = dimer(1.0, -0.9, 3.0);
  for (double Delta : {0.3, 2.5}) {
    const ResponseCurve r = classical_response(p, {Delta});
    REQUIRE(r.stationary);
    cplx a1(0.0, 0.0), a2(0.0, 0.0);
    const double h = 1e-3, T = 40.0;
    const auto deriv = [&](double t, cplx x1, cplx x2, cplx& d1, cplx& d2) {
      d1 = -p.gamma * x1 - cplx(0.0, p.J) * x2 + p.E * std::polar(1.0, -Delta * t);
      d2 = p.g * x2 - cplx(0.0, p.J) * x1;
    };
    const int n = static_cast<int>(T / h);
    for (int i = 0; i < n; ++i) {
      const double t = i * h;
      cplx k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
      deriv(t, a1, a2, k1a, k1b);
      deriv(t + h / 2, a1 + h / 2 * k1a, a2 + h / 2 * k1b, k2a, k2b);
      deriv(t + h / 2, a1 + h / 2 * k2a, a2 + h / 2 * k2b, k3a, k3b);
      deriv(t + h, a1 + h * k3a, a2 + h * k3b, k4a, k4b);
      a1 += h / 6 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
      a2 += h / 6 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }
    CHECK(std::norm(a2) == doctest::Approx(r.response[0]).epsilon(1e-5));
  }
}

TEST_CASE("gain-unstable response integrates to the horizon") {
  SystemParams p = dimer(1.0, 1.2, 1.0);  // g > gamma: no stationary state
  const ResponseCurve r = classical_response(p, {-1.0, -0.5, 0.0, 0.5, 1.0}, 5.0);
  CHECK_FALSE(r.stationary);
  CHECK(r.horizon == 5.0);
  REQUIRE(r.response.size() == 5);
  for (double v : r.response) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
}

TEST_CASE("peak detector") {
  CHECK(detect_peaks({0.0, 1.0, 0.0, 2.0, 0.0}, 0.01) == std::vector<int>{1, 3});
  CHECK(detect_peaks({1.0, 1.0, 1.0, 1.0}, 0.01).empty());
  CHECK(detect_peaks({0.0, 1.0, 2.0, 3.0}, 0.01).empty());  // endpoints are not peaks
  // prominence threshold suppresses ripple on a shoulder
  CHECK(detect_peaks({0.0, 10.0, 9.995, 10.0 - 0.004, 9.0, 0.0}, 0.01) == std::vector<int>{1});
  CHECK(detect_peaks({0.0, 10.0, 9.0, 9.8, 8.0, 0.0}, 0.01) == std::vector<int>{1, 3});
  CHECK(detect_peaks({}, 0.01).empty());
}
