#pragma once

#include <vector>

#include "grid.hpp"
#include "linear_system.hpp"
#include "types.hpp"

namespace plaser {

// One sampled state of the first and second moment equations
//   m'     = M m + lambda
//   Sigma' = M Sigma + Sigma M^T + D
// with the covariance split into additive parts by noise source:
//   sig_init : homogeneous propagation of sigma0 (no diffusion)
//   sig_opt  : optical diffusion only
//   sig_vac  : mechanical channel with occupation prefactor (n_th + 1),
//              integrated at unit prefactor
//   sig_nth  : mechanical channel with occupation prefactor n_th, likewise
//              at unit prefactor; the physical thermal part is
//              (n_th + 1) * sig_vac + n_th * sig_nth
// All parts share one dynamical matrix, so they are integrated together,
// and neither channel part depends on n_th itself: the thermal contribution
// is affine in n_th by construction.
//
// Stored values are scaled: the physical mean is 2^k_mean * mean and each
// physical covariance part is 2^k_sig * sig_*. The exponents grow whenever
// the state is renormalized to keep coefficients inside double range (gain
// makes everything grow like exp((g - gamma) t / 2) and its square).
struct MomentSnapshot {
  double t = 0.0;
  Vec6 mean = Vec6::Zero();
  long long k_mean = 0;
  Mat6 sig_init = Mat6::Zero();
  Mat6 sig_opt = Mat6::Zero();
  Mat6 sig_vac = Mat6::Zero();
  Mat6 sig_nth = Mat6::Zero();
  long long k_sig = 0;
};

struct MomentSeries {
  TimeGrid grid;
  std::vector<MomentSnapshot> snaps;
};

// Classical RK4 over the combined moment state, three dynamical-matrix
// evaluations per step. Initial condition: mean = 0, sig_init = sigma0,
// diffusion parts = 0. Throws Overflow if the state turns non-finite.
MomentSeries evolve_moments(const LinearSystemOps& ops, const TimeGrid& grid,
                            int max_output_points = 512);

}  // namespace plaser
