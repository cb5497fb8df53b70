#pragma once

#include <vector>

#include "grid.hpp"
#include "linear_system.hpp"
#include "logvalue.hpp"
#include "moments.hpp"
#include "params.hpp"
#include "propagator.hpp"

namespace plaser {

// Which evolution backend produced a population series.
enum class EvolutionMethod { product, moments };
const char* evolution_method_name(EvolutionMethod m);

// Additive decomposition of one supermode occupation. Values are stored in
// log scale because above-threshold runs overflow double range long before
// the physical horizon. noise_thermal splits further into the piece with
// occupation prefactor (n_th + 1) and the n_th-proportional share; their sum
// is noise_thermal itself.
struct PopulationParts {
  LogValue initial;
  LogValue drive;
  LogValue noise_thermal;
  LogValue noise_thermal_nplus1;
  LogValue noise_thermal_nth;
  LogValue noise_optical;
  LogValue total() const;
};

struct PopulationPoint {
  double t = 0.0;
  PopulationParts s1, s2;
  LogValue mech_occupation;
  LogValue inversion() const;           // s1.total() - s2.total()
  LogValue inversion_initial() const;   // per-part inversions
  LogValue inversion_drive() const;
  LogValue inversion_noise_thermal() const;
  LogValue inversion_noise_optical() const;
};

struct PopulationSeries {
  SystemParams params;
  EvolutionMethod method = EvolutionMethod::moments;
  ProductMethod product_method = ProductMethod::midpoint_product;
  NoiseMode noise_mode = NoiseMode::paper_literal;
  TimeGrid grid;
  double validity_bound = 0.0;  // linearization bound over this horizon
  std::vector<PopulationPoint> points;
};

// Staged product-path extractions. Each returns values on the subsampled
// output times of the propagator grid.
struct PartPairSeries {
  std::vector<double> t;
  std::vector<LogValue> pop1, pop2;
};

// Occupation inherited from the t = 0 state, rows of P sigma0 P^T.
PartPairSeries initial_state_populations(const PropagatorGrid& pg, double n_th,
                                         int max_output_points = 512);

// Coherent-drive occupation |envelope + lambda-driven mean|^2.
PartPairSeries drive_populations(const PropagatorGrid& pg, const LinearSystemOps& ops,
                                 int max_output_points = 512);

struct NoiseBreakdownSeries {
  std::vector<double> t;
  std::vector<LogValue> pop1_thermal, pop1_thermal_nplus1, pop1_thermal_nth, pop1_optical;
  std::vector<LogValue> pop2_thermal, pop2_thermal_nplus1, pop2_thermal_nth, pop2_optical;
};

// Noise-fed occupation: interval-propagated diffusion integrals, trapezoid
// quadrature on the evolution grid, split by source.
NoiseBreakdownSeries noise_populations(const PropagatorGrid& pg, const LinearSystemOps& ops,
                                       int max_output_points = 512);

// Full assembly: evolves the system with the chosen backend and packages
// the decomposed populations and the inversion. The product backend keeps
// every step's propagator in memory; the moments backend is the default.
PopulationSeries inversion_series(const SystemParams& p, const TimeGrid& grid,
                                  EvolutionMethod method, NoiseMode noise_mode,
                                  ProductMethod product_method = ProductMethod::midpoint_product,
                                  int max_output_points = 512);

// Convenience: the inversion at the last grid time.
LogValue final_inversion(const PopulationSeries& s);

}  // namespace plaser
