#pragma once

#include <vector>

#include "params.hpp"
#include "populations.hpp"
#include "types.hpp"

namespace plaser {

// Semiclassical stimulated-phonon trajectory driven by a precomputed
// inversion series:
//   b_s' = (-gamma_m - i omega_m) b_s - (i/2) g_m p
//   p'   = (i/2) g_m dN(t) b_s + ((g - gamma)/2 - 2iJ) p
// dN(t) is linearly interpolated between the series' sampled points and the
// pair is integrated with fixed-step RK4 on the series' evolution grid.
struct LaserTrajectory {
  std::vector<double> t;
  std::vector<cplx> b_s;
  std::vector<cplx> p;
  // provenance of the inversion source
  SystemParams params;
  EvolutionMethod method = EvolutionMethod::moments;
  NoiseMode noise_mode = NoiseMode::paper_literal;
  double t_ref = 0.0;        // 1/gamma_m, where the ratio is taken
  cplx b_ref;                // b_s(t_ref)
  double amplification = 0;  // |b_s(t_ref)|^2 / |b_s(0)|^2
};

LaserTrajectory integrate_laser(const SystemParams& p, const PopulationSeries& inversion,
                                cplx b_s0 = cplx(1.0, 0.0), cplx p0 = cplx(0.0, 0.0));

double amplification_ratio(const LaserTrajectory& traj);

// Full-pipeline drive scan: for each E, evolve the inversion to 1/gamma_m
// and integrate the laser equations. E values are scanned ascending; the
// threshold estimate is the smallest E whose amplification reaches 1.
// A run that overflows (far above threshold) counts as amplification = inf.
struct ThresholdScan {
  std::vector<double> E;
  std::vector<double> amplification;
  double E_threshold = 0.0;  // smallest scanned E with amplification >= 1
  double E_below = 0.0;      // largest scanned E below it (bracket partner)
};

ThresholdScan threshold_scan(const SystemParams& base, std::vector<double> E_values,
                             EvolutionMethod method = EvolutionMethod::moments,
                             NoiseMode noise_mode = NoiseMode::paper_literal,
                             ProductMethod product_method = ProductMethod::midpoint_product);

}  // namespace plaser
