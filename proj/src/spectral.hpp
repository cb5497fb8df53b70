#pragma once

#include <vector>

#include "params.hpp"
#include "types.hpp"

namespace plaser {

// Symmetry classification of the coupled-mode spectrum: the splitting
// sqrt(J^2 - ((g+gamma)/2)^2) is real (unbroken), zero (exceptional), or
// imaginary (broken).
enum class PTRegime { unbroken, exceptional, broken };
const char* pt_regime_name(PTRegime r);

// Non-Hermitian coupled-mode Hamiltonian of the dimer in the frame rotating
// at the cavity frequency (reported offsets are relative to it):
//   H = [ -i gamma   J ]
//       [    J     i g ]
Mat2 pt_hamiltonian(const SystemParams& p);

struct PTEigensystem {
  // frequency offsets; [0] carries -sqrt(...), [1] carries +sqrt(...), the
  // root continued to +i|...| in the broken regime so imaginary parts are
  // (g - gamma)/2 -+ |...|
  cplx eigenvalues[2];
  // columns hold the eigenmode coefficients (alpha, beta) over (a1, a2);
  // at the exceptional point the pair coalesces and both columns carry the
  // unit-normalized single mode instead of the diverging normalization
  Mat2 eigenmode_coeffs;
  // vacuum contraction of the unit-normalized single-excitation modes,
  // alpha1 conj(alpha2) + beta1 conj(beta2); 0 exactly when g = -gamma
  cplx overlap;
  PTRegime regime = PTRegime::unbroken;
};

PTEigensystem pt_eigensystem(const SystemParams& p);

// The overlap alone; throws ExceptionalPoint where the modes coalesce and
// the published normalization is undefined.
cplx mode_overlap(const SystemParams& p);

// Steady or horizon-limited drive response of the classical dimer
// (mechanical coupling ignored here). Values are reported on the sorted
// detuning grid.
struct ResponseCurve {
  std::vector<double> delta;
  std::vector<double> response;  // |a2|^2, stationary or at the horizon
  bool stationary = true;        // false: gain-unstable, integrated to horizon
  double horizon = 0.0;
  std::vector<int> peak_indices;
};

ResponseCurve classical_response(const SystemParams& p, std::vector<double> delta_values,
                                 double horizon = 50.0);

// Local maxima whose prominence reaches min_prominence_frac of the curve
// maximum. Exposed for tests and for the spectrum scenario output.
std::vector<int> detect_peaks(const std::vector<double>& y, double min_prominence_frac);

}  // namespace plaser
