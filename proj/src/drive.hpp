#pragma once

#include "params.hpp"
#include "types.hpp"

namespace plaser {

// Detuning regimes of the pump envelopes. At Delta = +-J one of the two
// supermode displacements becomes secular (grows ~ E t); at Delta = 0 the
// envelopes reduce to elementary trigonometric forms.
enum class DriveRegime { generic, delta_eq_J, delta_eq_minus_J, delta_eq_zero };

// Relative switch threshold 1e-6 * J around the resonances.
DriveRegime classify_drive_regime(double Delta, double J);

struct Displacements {
  cplx S1;  // displacement of the upper supermode frame (o1)
  cplx S2;  // displacement of the lower supermode frame (o2)
};

// Lossless driven-dimer solutions in the supermode frame, written in a
// cancellation-free sinc form exact through Delta = +-J and J = 0:
//   S1 = (E t / sqrt2) e^{i(Delta-J)t/2} sinc((Delta+J)t/2)
//   S2 = (E t / sqrt2) e^{i(Delta+J)t/2} sinc((Delta-J)t/2)
Displacements supermode_displacements(const SystemParams& p, double t);

// Cavity-basis pump envelopes: E1 = field accumulated in the lossy cavity,
// E2 = field in the gain cavity; E1 = (S1+S2)/2, E2 = (S1-S2)/2. Both vanish
// at t = 0 to machine precision. Dispatches to the closed-form limits in the
// special regimes.
cplx drive_e1(const SystemParams& p, double t);
cplx drive_e2(const SystemParams& p, double t);

struct DriveEnvelope {
  explicit DriveEnvelope(const SystemParams& p);

  cplx e1(double t) const { return drive_e1(p_, t); }
  cplx e2(double t) const { return drive_e2(p_, t); }
  Displacements displacements(double t) const {
    return supermode_displacements(p_, t);
  }
  DriveRegime regime() const { return regime_; }

  // sup over [0, t_end] of |E1|, used for step-size selection; covers the
  // secular regimes via the min(t_end, .) caps
  double e1_bound(double t_end) const;

 private:
  SystemParams p_;
  DriveRegime regime_;
};

}  // namespace plaser
