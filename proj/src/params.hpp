#pragma once

#include <string>

namespace plaser {

// Coupled active-passive cavity dimer with a mechanical mode on the lossy
// cavity. All rates are in units of the passive cavity loss gamma, times in
// 1/gamma. The cavity resonance omega_c only sets an overall rotating frame
// and never enters any computed quantity.
struct SystemParams {
  double gamma = 1.0;    // passive cavity amplitude decay rate (> 0)
  double g = 0.0;        // active cavity gain rate (>= -gamma; negative = extra loss)
  double J = 0.0;        // inter-cavity coupling (>= 0)
  double omega_m = 1.0;  // mechanical frequency (> 0)
  double gamma_m = 1.0;  // mechanical amplitude damping rate (> 0)
  double g_m = 0.0;      // single-photon optomechanical coupling (>= 0)
  double E = 0.0;        // pump amplitude, real (>= 0)
  double Delta = 0.0;    // pump detuning from the cavity resonance
  double n_th = 0.0;     // thermal phonon occupation of the mechanical bath (>= 0)
};

// Throws SimError on invalid parameters. Returns a warning string (empty when
// clean); warnings are non-fatal, e.g. g_m/omega_m outside the weak-coupling
// regime where the linearized model is trustworthy.
std::string validate_params(const SystemParams& p);

// Upper bound on the relative weight of the residual quadratic optomechanical
// coupling dropped by the linearized model, over a run of length `horizon`:
// the largest of the static term g_m/omega_m, the near-resonant sideband term
// (secular, ~g_m*horizon, when |2J - omega_m| < 1/horizon; g_m/|2J - omega_m|
// otherwise) and the fast counter-rotating term g_m/(2J + omega_m).
double approximation_bound(const SystemParams& p, double horizon);

}  // namespace plaser
