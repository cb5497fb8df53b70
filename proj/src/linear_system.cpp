#include "linear_system.hpp"

#include <cmath>

#include "errors.hpp"

namespace plaser {

namespace {
const cplx iu(0.0, 1.0);
}

Mat6 OperatorBasis::swap_matrix() {
  Mat6 s = Mat6::Zero();
  for (int k = 0; k < 6; ++k) s(k, swap_index(k)) = 1.0;
  return s;
}

NoiseMode parse_noise_mode(const std::string& s) {
  if (s == "paper_literal") return NoiseMode::paper_literal;
  if (s == "full") return NoiseMode::full;
  fail(ErrCode::UnknownMode, "noise mode '" + s + "' (expected paper_literal or full)");
}

const char* noise_mode_name(NoiseMode m) {
  return m == NoiseMode::paper_literal ? "paper_literal" : "full";
}

// Interaction-frame equations of motion in the supermode basis. The frame
// phases rotate at the supermode splitting (e^{+-2iJt} between the two
// optical modes) and at omega_m for the mechanical sidebands; the pump enters
// through the lossless envelopes E1, E2 only. Rows 1, 3, 5 are the conjugate
// rows and are filled from rows 0, 2, 4 by the swap-conjugation symmetry.
Mat6 dynamical_matrix(const SystemParams& p, double t) {
  using B = OperatorBasis;
  const double half_diff = 0.5 * (p.g - p.gamma);
  const double half_sum = 0.5 * (p.g + p.gamma);
  const cplx e_2iJt = std::polar(1.0, 2.0 * p.J * t);
  const cplx e_iJt = std::polar(1.0, p.J * t);
  const cplx e_iwmt = std::polar(1.0, p.omega_m * t);
  const cplx E1 = drive_e1(p, t);
  const cplx om1 = iu * p.g_m * E1 * e_iJt;         // o1 row coupling to b, b+
  const cplx om2 = -iu * p.g_m * E1 * std::conj(e_iJt);  // o2 row coupling

  Mat6 m = Mat6::Zero();
  m(B::o1, B::o1) = half_diff;
  m(B::o1, B::o2) = half_sum * e_2iJt;
  m(B::o1, B::b) = om1 * std::conj(e_iwmt);
  m(B::o1, B::bd) = om1 * e_iwmt;

  m(B::o2, B::o1) = half_sum * std::conj(e_2iJt);
  m(B::o2, B::o2) = half_diff;
  m(B::o2, B::b) = om2 * std::conj(e_iwmt);
  m(B::o2, B::bd) = om2 * e_iwmt;

  const cplx gmE1 = iu * p.g_m * E1;
  const cplx gmE1c = iu * p.g_m * std::conj(E1);
  m(B::b, B::o1) = gmE1c * std::conj(e_iJt) * e_iwmt;
  m(B::b, B::o1d) = gmE1 * e_iJt * e_iwmt;
  m(B::b, B::o2) = -gmE1c * e_iJt * e_iwmt;
  m(B::b, B::o2d) = -gmE1 * std::conj(e_iJt) * e_iwmt;
  m(B::b, B::b) = -p.gamma_m;

  for (int r = 0; r < 6; r += 2) {
    for (int k = 0; k < 6; ++k) {
      m(r + 1, k) = std::conj(m(r, B::swap_index(k)));
    }
  }
  return m;
}

Vec6 drive_vector(const SystemParams& p, double t) {
  using B = OperatorBasis;
  const cplx E1 = drive_e1(p, t);
  const cplx E2 = drive_e2(p, t);
  const cplx e_iJt = std::polar(1.0, p.J * t);
  const cplx e_iwmt = std::polar(1.0, p.omega_m * t);
  Vec6 v = Vec6::Zero();
  v(B::o1) = (p.g * E2 - p.gamma * E1) * e_iJt;
  v(B::o2) = (p.gamma * E1 + p.g * E2) * std::conj(e_iJt);
  v(B::b) = 2.0 * iu * p.g_m * std::norm(E1) * e_iwmt;
  for (int r = 0; r < 6; r += 2) v(r + 1) = std::conj(v(r));
  return v;
}

namespace {

Mat6 optical_diffusion(const SystemParams& p, double t, NoiseMode mode) {
  using B = OperatorBasis;
  Mat6 d = Mat6::Zero();
  d(B::o1, B::o1d) = p.gamma;
  d(B::o1d, B::o1) = p.g;
  d(B::o2, B::o2d) = p.gamma;
  d(B::o2d, B::o2) = p.g;
  if (mode == NoiseMode::full) {
    // cross-channel correlators between the two supermode noise drives;
    // these rotate at the supermode splitting and make the noise model
    // exact for the underlying loss and gain reservoirs
    const cplx e_2iJt = std::polar(1.0, 2.0 * p.J * t);
    d(B::o1, B::o2d) = -p.gamma * e_2iJt;
    d(B::o2d, B::o1) = p.g * e_2iJt;
    d(B::o1d, B::o2) = p.g * std::conj(e_2iJt);
    d(B::o2, B::o1d) = -p.gamma * std::conj(e_2iJt);
  }
  return d;
}

Mat6 mech_vac_diffusion(const SystemParams& p) {
  using B = OperatorBasis;
  Mat6 d = Mat6::Zero();
  d(B::b, B::bd) = 2.0 * p.gamma_m;
  return d;
}

Mat6 mech_nth_diffusion(const SystemParams& p) {
  using B = OperatorBasis;
  Mat6 d = Mat6::Zero();
  d(B::b, B::bd) = 2.0 * p.gamma_m;
  d(B::bd, B::b) = 2.0 * p.gamma_m;
  return d;
}

}  // namespace

Mat6 diffusion_matrix(const SystemParams& p, double t, NoiseMode mode) {
  return optical_diffusion(p, t, mode) + mech_vac_diffusion(p) +
         p.n_th * mech_nth_diffusion(p);
}

Mat6 initial_covariance(const SystemParams& p) {
  using B = OperatorBasis;
  Mat6 s = Mat6::Zero();
  s(B::o1, B::o1d) = 1.0;
  s(B::o2, B::o2d) = 1.0;
  s(B::b, B::bd) = p.n_th + 1.0;
  s(B::bd, B::b) = p.n_th;
  return s;
}

LinearSystemOps make_system(const SystemParams& p, NoiseMode mode) {
  validate_params(p);
  LinearSystemOps ops;
  ops.M = [p](double t) { return dynamical_matrix(p, t); };
  ops.lambda = [p](double t) { return drive_vector(p, t); };
  ops.D_optical = [p, mode](double t) { return optical_diffusion(p, t, mode); };
  ops.D_mech_vac = mech_vac_diffusion(p);
  ops.D_mech_nth = mech_nth_diffusion(p);
  ops.sigma0 = initial_covariance(p);
  ops.params = p;
  ops.n_th = p.n_th;
  ops.gamma_m = p.gamma_m;
  return ops;
}

}  // namespace plaser
