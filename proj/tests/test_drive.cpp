#include <doctest.h>

#include <cmath>
#include <complex>

#include "drive.hpp"
#include "params.hpp"

using namespace plaser;

namespace {

SystemParams base_params(double J, double Delta, double E) {
  SystemParams p;
  p.gamma = 1.0;
  p.g = 0.0;
  p.J = J;
  p.omega_m = 1.0;
  p.gamma_m = 0.1;
  p.g_m = 0.0;
  p.E = E;
  p.Delta = Delta;
  p.n_th = 0.0;
  return p;
}

// Independent form of the displacement fields: the supermodes of the lossless
// driven dimer obey o1' = -iJ o1 + (E/sqrt2) e^{iDelta t} and o2' = +iJ o2 +
// (E/sqrt2) e^{iDelta t}, so from rest
//   S1(t) = e^{-iJt} (E/sqrt2) (e^{i(Delta+J)t} - 1) / (i(Delta+J))
//   S2(t) = e^{+iJt} (E/sqrt2) (e^{i(Delta-J)t} - 1) / (i(Delta-J))
// valid away from the secular resonances Delta = -+J.
cplx s1_integral(double J, double D, double E, double t) {
  const cplx i(0.0, 1.0);
  return std::polar(1.0, -J * t) * (E / std::sqrt(2.0)) *
         (std::exp(i * (D + J) * t) - 1.0) / (i * (D + J));
}

cplx s2_integral(double J, double D, double E, double t) {
  const cplx i(0.0, 1.0);
  return std::polar(1.0, J * t) * (E / std::sqrt(2.0)) *
         (std::exp(i * (D - J) * t) - 1.0) / (i * (D - J));
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("drive regime classification") {
  CHECK(classify_drive_regime(3.0, 1.0) == DriveRegime::generic);
  CHECK(classify_drive_regime(1.0, 1.0) == DriveRegime::delta_eq_J);
  CHECK(classify_drive_regime(-1.0, 1.0) == DriveRegime::delta_eq_minus_J);
  CHECK(classify_drive_regime(0.0, 1.0) == DriveRegime::delta_eq_zero);
  // threshold is relative, 1e-6 * J
  CHECK(classify_drive_regime(1.0 + 5e-7, 1.0) == DriveRegime::delta_eq_J);
  CHECK(classify_drive_regime(1.0 + 5e-6, 1.0) == DriveRegime::generic);
  CHECK(classify_drive_regime(2.0 + 5e-7, 2.0) == DriveRegime::delta_eq_J);
  CHECK(classify_drive_regime(0.0, 0.0) == DriveRegime::delta_eq_zero);
}

TEST_CASE("displacements match the classical integral solution") {
  for (double J : {0.7, 2.0}) {
    for (double D : {3.0, -1.9, 0.31}) {
      const SystemParams p = base_params(J, D, 1.3);
      for (double t : {0.4, 1.0, 2.7}) {
        const Displacements d = supermode_displacements(p, t);
        CHECK(rel(d.S1, s1_integral(J, D, 1.3, t)) < 1e-13);
        CHECK(rel(d.S2, s2_integral(J, D, 1.3, t)) < 1e-13);
      }
    }
  }
}

TEST_CASE("displacement anchor values") {
  const SystemParams p = base_params(1.0, 3.0, 1.0);
  const Displacements d = supermode_displacements(p, 1.0);
  CHECK(std::abs(d.S1 - cplx(0.17369918854740457, 0.2705204580100162)) < 1e-14);
  CHECK(std::abs(d.S2 - cplx(-0.2476114624345768, 0.5410409160200323)) < 1e-14);
  const cplx e1 = drive_e1(p, 1.0);
  const cplx e2 = drive_e2(p, 1.0);
  CHECK(std::abs(e1 - cplx(-0.036956136943586113, 0.40578068701502423)) < 1e-14);
  CHECK(std::abs(e2 - cplx(0.2106553254909907, -0.13526022900500809)) < 1e-14);
  // definitional split
  CHECK(std::abs(e1 - 0.5 * (d.S1 + d.S2)) < 1e-16);
  CHECK(std::abs(e2 - 0.5 * (d.S1 - d.S2)) < 1e-16);
}

TEST_CASE("resonant closed forms") {
  SUBCASE("Delta = 0") {
    const SystemParams p = base_params(1.0, 0.0, 1.0);
    CHECK(std::abs(drive_e1(p, M_PI / 2) - cplx(1.0 / std::sqrt(2.0), 0.0)) < 1e-14);
    CHECK(std::abs(drive_e2(p, M_PI) - cplx(0.0, -std::sqrt(2.0))) < 1e-14);
  }
  SUBCASE("Delta = J secular branch") {
    const SystemParams p = base_params(1.0, 1.0, 1.0);
    const double t = 2.0;
    const Displacements d = supermode_displacements(p, t);
    // the o2 displacement grows linearly, S2 = (E t / sqrt2) e^{iJt}
    const cplx want = (t / std::sqrt(2.0)) * std::polar(1.0, t);
    CHECK(rel(d.S2, want) < 1e-14);
    // the o1 displacement stays the off-resonant integral
    CHECK(rel(d.S1, s1_integral(1.0, 1.0, 1.0, t)) < 1e-13);
  }
  SUBCASE("Delta = -J secular branch") {
    const SystemParams p = base_params(1.0, -1.0, 1.0);
    const double t = 2.0;
    const Displacements d = supermode_displacements(p, t);
    const cplx want = (t / std::sqrt(2.0)) * std::polar(1.0, -t);
    CHECK(rel(d.S1, want) < 1e-14);
    CHECK(rel(d.S2, s2_integral(1.0, -1.0, 1.0, t)) < 1e-13);
  }
}

TEST_CASE("regime branches join continuously") {
  // just outside the switch threshold the generic series must agree with the
  // closed resonant forms evaluated at the exact resonance
  const double J = 1.0;
  for (double t : {0.5, 3.0}) {
    const SystemParams on = base_params(J, J, 1.0);
    const SystemParams off = base_params(J, J * (1.0 + 2e-6), 1.0);
    CHECK(rel(drive_e1(off, t), drive_e1(on, t)) < 1e-4);
    CHECK(rel(drive_e2(off, t), drive_e2(on, t)) < 1e-4);

    const SystemParams on0 = base_params(J, 0.0, 1.0);
    SystemParams off0 = base_params(J, 1e-9, 1.0);
    CHECK(rel(drive_e1(off0, t), drive_e1(on0, t)) < 1e-6);
  }
}

TEST_CASE("envelopes vanish at t = 0") {
  for (double D : {3.0, 1.0, -1.0, 0.0}) {
    const SystemParams p = base_params(1.0, D, 2.5);
    CHECK(std::abs(drive_e1(p, 0.0)) == 0.0);
    CHECK(std::abs(drive_e2(p, 0.0)) == 0.0);
  }
}

TEST_CASE("e1_bound dominates the sampled envelope") {
  for (double D : {3.0, 1.0, -1.0, 0.0, 0.05}) {
    const SystemParams p = base_params(1.0, D, 2.0);
    const DriveEnvelope env(p);
    const double t_end = 12.0;
    const double bound = env.e1_bound(t_end);
    double seen = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double t = t_end * i / 4000.0;
      seen = std::max(seen, std::abs(env.e1(t)));
    }
    CHECK(seen <= bound * (1.0 + 1e-12));
    CHECK(bound > 0.0);
    // the bound is a sup estimate, not wildly loose: within 4x here
    CHECK(seen > 0.25 * bound);
  }
}
