#include "drive.hpp"

#include <cmath>

#include "errors.hpp"

namespace plaser {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;
const cplx iu(0.0, 1.0);

// sin(x)/x, continuous through 0
double sindc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

}  // namespace

DriveRegime classify_drive_regime(double Delta, double J) {
  if (J > 0.0) {
    if (std::abs(Delta - J) < 1e-6 * J) return DriveRegime::delta_eq_J;
    if (std::abs(Delta + J) < 1e-6 * J) return DriveRegime::delta_eq_minus_J;
  }
  if (Delta == 0.0) return DriveRegime::delta_eq_zero;
  return DriveRegime::generic;
}

Displacements supermode_displacements(const SystemParams& p, double t) {
  const double a = inv_sqrt2 * p.E * t;
  const cplx s1 = a * std::polar(1.0, 0.5 * (p.Delta - p.J) * t) *
                  sindc(0.5 * (p.Delta + p.J) * t);
  const cplx s2 = a * std::polar(1.0, 0.5 * (p.Delta + p.J) * t) *
                  sindc(0.5 * (p.Delta - p.J) * t);
  return {s1, s2};
}

namespace {

// closed-form limits, used verbatim in the special regimes

cplx e1_at_delta_eq_J(double E, double J, double t) {
  // (E / (2 sqrt2 J)) [sin Jt + Jt e^{iJt}]
  const double c = E / (2.0 * std::sqrt(2.0) * J);
  return c * (std::sin(J * t) + J * t * std::polar(1.0, J * t));
}

cplx e2_at_delta_eq_J(double E, double J, double t) {
  // -(E / (2 sqrt2 J)) [Jt e^{iJt} - sin Jt]
  const double c = E / (2.0 * std::sqrt(2.0) * J);
  return -c * (J * t * std::polar(1.0, J * t) - std::sin(J * t));
}

cplx e1_at_delta_eq_minus_J(double E, double J, double t) {
  const double c = E / (2.0 * std::sqrt(2.0) * J);
  return c * (std::sin(J * t) + J * t * std::polar(1.0, -J * t));
}

cplx e2_at_delta_eq_minus_J(double E, double J, double t) {
  const double c = E / (2.0 * std::sqrt(2.0) * J);
  return c * (J * t * std::polar(1.0, -J * t) - std::sin(J * t));
}

cplx e1_at_delta_eq_zero(double E, double J, double t) {
  // (E / sqrt2 J) sin Jt, continuous through J = 0
  return inv_sqrt2 * E * t * sindc(J * t);
}

cplx e2_at_delta_eq_zero(double E, double J, double t) {
  // -(iE / sqrt2 J)(1 - cos Jt), continuous through J = 0
  return -iu * inv_sqrt2 * E * t * std::sin(0.5 * J * t) * sindc(0.5 * J * t);
}

}  // namespace

cplx drive_e1(const SystemParams& p, double t) {
  switch (classify_drive_regime(p.Delta, p.J)) {
    case DriveRegime::delta_eq_J:
      return e1_at_delta_eq_J(p.E, p.J, t);
    case DriveRegime::delta_eq_minus_J:
      return e1_at_delta_eq_minus_J(p.E, p.J, t);
    case DriveRegime::delta_eq_zero:
      return e1_at_delta_eq_zero(p.E, p.J, t);
    case DriveRegime::generic: {
      const auto [s1, s2] = supermode_displacements(p, t);
      return 0.5 * (s1 + s2);
    }
  }
  fail(ErrCode::UnknownMode, "unreachable drive regime");
}

cplx drive_e2(const SystemParams& p, double t) {
  switch (classify_drive_regime(p.Delta, p.J)) {
    case DriveRegime::delta_eq_J:
      return e2_at_delta_eq_J(p.E, p.J, t);
    case DriveRegime::delta_eq_minus_J:
      return e2_at_delta_eq_minus_J(p.E, p.J, t);
    case DriveRegime::delta_eq_zero:
      return e2_at_delta_eq_zero(p.E, p.J, t);
    case DriveRegime::generic: {
      const auto [s1, s2] = supermode_displacements(p, t);
      return 0.5 * (s1 - s2);
    }
  }
  fail(ErrCode::UnknownMode, "unreachable drive regime");
}

DriveEnvelope::DriveEnvelope(const SystemParams& p) : p_(p) {
  validate_params(p);
  regime_ = classify_drive_regime(p.Delta, p.J);
}

double DriveEnvelope::e1_bound(double t_end) const {
  const auto cap = [t_end](double denom) {
    const double a = std::abs(denom);
    return a > 0.0 ? std::min(t_end, 2.0 / a) : t_end;
  };
  return 0.5 * inv_sqrt2 * p_.E *
         (cap(p_.Delta + p_.J) + cap(p_.Delta - p_.J));
}

}  // namespace plaser
