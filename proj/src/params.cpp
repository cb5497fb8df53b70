#include "params.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace plaser {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be > 0, got " << v;
    fail(ErrCode::NonPositiveRate, os.str());
  }
}

void require_nonnegative(double v, const char* name) {
  if (v < 0.0 || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be >= 0, got " << v;
    fail(ErrCode::NegativeQuantity, os.str());
  }
}

}  // namespace

std::string validate_params(const SystemParams& p) {
  require_positive(p.gamma, "gamma");
  require_positive(p.gamma_m, "gamma_m");
  require_positive(p.omega_m, "omega_m");
  require_nonnegative(p.J, "J");
  require_nonnegative(p.g_m, "g_m");
  require_nonnegative(p.E, "E");
  require_nonnegative(p.n_th, "n_th");
  if (!std::isfinite(p.g) || !std::isfinite(p.Delta)) {
    fail(ErrCode::NegativeQuantity, "g and Delta must be finite");
  }
  if (p.g < -p.gamma) {
    std::ostringstream os;
    os << "g = " << p.g << " below the passive limit -gamma = " << -p.gamma;
    fail(ErrCode::GainBelowPassive, os.str());
  }
  std::string warning;
  if (p.g_m > 1e-2 * p.omega_m) {
    std::ostringstream os;
    os << "g_m/omega_m = " << p.g_m / p.omega_m
       << " exceeds 1e-2; the linearized model may not be quantitative";
    warning = os.str();
  }
  return warning;
}

double approximation_bound(const SystemParams& p, double horizon) {
  validate_params(p);
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    fail(ErrCode::NegativeQuantity, "horizon must be > 0");
  }
  const double static_term = p.g_m / p.omega_m;
  const double det = std::abs(2.0 * p.J - p.omega_m);
  // Near the sideband resonance 2J = omega_m the dropped term is secular and
  // accumulates linearly over the run instead of averaging out.
  const double sideband_term =
      (det < 1.0 / horizon) ? p.g_m * horizon : p.g_m / det;
  const double counter_term = p.g_m / (2.0 * p.J + p.omega_m);
  return std::max({static_term, sideband_term, counter_term});
}

}  // namespace plaser
