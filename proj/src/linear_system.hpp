#pragma once

#include <functional>
#include <string>

#include "drive.hpp"
#include "params.hpp"
#include "types.hpp"

namespace plaser {

// Operator ordering of the first-moment vector c = (o1, o1+, o2, o2+, b, b+):
// the two supermodes of the cavity dimer in their rotating frames and the
// mechanical mode. Conjugate partners sit in adjacent slots, so the pairwise
// swap is just an index XOR.
struct OperatorBasis {
  static constexpr int o1 = 0, o1d = 1, o2 = 2, o2d = 3, b = 4, bd = 5;
  static constexpr int swap_index(int k) { return k ^ 1; }
  // permutation matrix S exchanging each operator with its conjugate; the
  // equations of motion satisfy S M S = conj(M), S lambda = conj(lambda),
  // and second-moment objects X satisfy S X S = conj(X^T)
  static Mat6 swap_matrix();
};

// Reservoir correlation model. paper_literal keeps only the co-rotating
// in-pair correlators; full adds the e^{+-2iJt} cross-channel correlators
// coupling the two supermode noise drives (exact for the physical baths).
enum class NoiseMode { paper_literal, full };

NoiseMode parse_noise_mode(const std::string& s);
const char* noise_mode_name(NoiseMode m);

// Time-dependent coefficients of dc/dt = M(t) c + lambda(t) + noise, with
// noise correlators <n_j(t) n_k(t')> = D_jk(t) delta(t - t').
Mat6 dynamical_matrix(const SystemParams& p, double t);
Vec6 drive_vector(const SystemParams& p, double t);
Mat6 diffusion_matrix(const SystemParams& p, double t, NoiseMode mode);
// <c_j c_k> at t = 0: cavity vacuum, mechanical mode thermal at n_th
Mat6 initial_covariance(const SystemParams& p);

// Assembled provider bundle used by the evolvers. The diffusion matrix is
// split so the thermal contribution can be tracked separately and stays
// manifestly affine in n_th:
//   D(t) = D_optical(t) + D_mech_vac + n_th * D_mech_nth
struct LinearSystemOps {
  std::function<Mat6(double)> M;
  std::function<Vec6(double)> lambda;
  std::function<Mat6(double)> D_optical;
  Mat6 D_mech_vac;
  Mat6 D_mech_nth;
  Mat6 sigma0;
  SystemParams params;
  double n_th = 0.0;
  double gamma_m = 0.0;

  Mat6 D_total(double t) const {
    return D_optical(t) + D_mech_vac + n_th * D_mech_nth;
  }
};

LinearSystemOps make_system(const SystemParams& p, NoiseMode mode);

}  // namespace plaser
