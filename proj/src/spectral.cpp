#include "spectral.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace plaser {

const char* pt_regime_name(PTRegime r) {
  switch (r) {
    case PTRegime::unbroken: return "unbroken";
    case PTRegime::exceptional: return "exceptional";
    case PTRegime::broken: return "broken";
  }
  return "?";
}

Mat2 pt_hamiltonian(const SystemParams& p) {
  Mat2 h;
  h(0, 0) = cplx(0.0, -p.gamma);
  h(0, 1) = cplx(p.J, 0.0);
  h(1, 0) = cplx(p.J, 0.0);
  h(1, 1) = cplx(0.0, p.g);
  return h;
}

namespace {

PTRegime classify(double J, double G) {
  const double disc = 4.0 * J * J - G * G;
  const double scale = std::max(4.0 * J * J, G * G);
  if (std::abs(disc) <= 1e-12 * scale) return PTRegime::exceptional;
  return disc > 0.0 ? PTRegime::unbroken : PTRegime::broken;
}

}  // namespace

PTEigensystem pt_eigensystem(const SystemParams& p) {
  validate_params(p);
  const double J = p.J;
  const double G = p.g + p.gamma;
  const cplx center(0.0, 0.5 * (p.g - p.gamma));

  PTEigensystem sys;
  sys.regime = classify(J, G);

  // splitting, continued onto the positive imaginary axis when broken
  cplx sq;
  switch (sys.regime) {
    case PTRegime::unbroken:
      sq = cplx(std::sqrt(J * J - 0.25 * G * G), 0.0);
      break;
    case PTRegime::broken:
      sq = cplx(0.0, std::sqrt(0.25 * G * G - J * J));
      break;
    case PTRegime::exceptional:
      sq = cplx(0.0, 0.0);
      break;
  }
  sys.eigenvalues[0] = center - sq;
  sys.eigenvalues[1] = center + sq;

  if (sys.regime == PTRegime::exceptional) {
    if (J == 0.0 && G == 0.0) {
      // scalar Hamiltonian: degenerate but diagonalizable, the bare modes
      // stay eigenmodes and stay orthogonal
      sys.eigenmode_coeffs = Mat2::Identity();
      sys.overlap = cplx(0.0, 0.0);
      return sys;
    }
    // coalescence direction, unit-normalized
    Vec2 v;
    v(0) = cplx(-J, 0.0);
    v(1) = cplx(0.0, -0.5 * G);
    v /= std::sqrt(std::norm(v(0)) + std::norm(v(1)));
    sys.eigenmode_coeffs.col(0) = v;
    sys.eigenmode_coeffs.col(1) = v;
    sys.overlap = cplx(1.0, 0.0);
    return sys;
  }

  // published normalization with s = 2 sq
  const cplx s = 2.0 * sq;
  const cplx iG(0.0, G);
  Vec2 q1, q2;
  q1(0) = -J / s;
  q1(1) = -(iG - s) / (2.0 * s);
  q2(0) = J / s;
  q2(1) = (iG + s) / (2.0 * s);
  sys.eigenmode_coeffs.col(0) = q1;
  sys.eigenmode_coeffs.col(1) = q2;

  const double n1 = std::sqrt(std::norm(q1(0)) + std::norm(q1(1)));
  const double n2 = std::sqrt(std::norm(q2(0)) + std::norm(q2(1)));
  sys.overlap = (q1(0) * std::conj(q2(0)) + q1(1) * std::conj(q2(1))) / (n1 * n2);
  return sys;
}

cplx mode_overlap(const SystemParams& p) {
  const PTEigensystem sys = pt_eigensystem(p);
  if (sys.regime == PTRegime::exceptional)
    fail(ErrCode::ExceptionalPoint,
         "eigenmodes coalesce at J = (g + gamma)/2; overlap is undefined there");
  return sys.overlap;
}

std::vector<int> detect_peaks(const std::vector<double>& y, double min_prominence_frac) {
  std::vector<int> peaks;
  const int n = static_cast<int>(y.size());
  if (n < 3) return peaks;
  const double ymax = *std::max_element(y.begin(), y.end());
  const double thresh = min_prominence_frac * ymax;

  for (int i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] > y[i + 1])) continue;
    // prominence: drop to the key saddle on the path toward higher ground
    double min_left = y[i];
    for (int j = i - 1; j >= 0; --j) {
      if (y[j] > y[i]) break;
      min_left = std::min(min_left, y[j]);
    }
    double min_right = y[i];
    for (int j = i + 1; j < n; ++j) {
      if (y[j] > y[i]) break;
      min_right = std::min(min_right, y[j]);
    }
    const double prominence = y[i] - std::max(min_left, min_right);
    if (prominence >= thresh && prominence > 0.0) peaks.push_back(i);
  }
  return peaks;
}

ResponseCurve classical_response(const SystemParams& p, std::vector<double> delta_values,
                                 double horizon) {
  validate_params(p);
  if (delta_values.empty())
    fail(ErrCode::ConfigError, "classical response needs at least one detuning value");
  if (!(horizon > 0.0))
    fail(ErrCode::NegativeQuantity, "response horizon must be > 0");
  std::sort(delta_values.begin(), delta_values.end());

  ResponseCurve curve;
  curve.delta = std::move(delta_values);
  curve.horizon = horizon;
  curve.response.reserve(curve.delta.size());

  // drift matrix [[-gamma, -iJ], [-iJ, g]]: stable iff both eigenvalues
  // (g - gamma)/2 +- sqrt(((g + gamma)/2)^2 - J^2) sit in the left half plane
  const double G = 0.5 * (p.g + p.gamma);
  const cplx root = std::sqrt(cplx(G * G - p.J * p.J, 0.0));
  const double max_re = 0.5 * (p.g - p.gamma) + root.real();
  curve.stationary = max_re < 0.0;

  if (curve.stationary) {
    for (double d : curve.delta) {
      const double re = d * d - p.J * p.J + p.gamma * p.g;
      const double im = d * (p.gamma - p.g);
      const double den = re * re + im * im;
      curve.response.push_back(p.J * p.J * p.E * p.E / den);
    }
  } else {
    for (double d : curve.delta) {
      // drive the dimer from rest and report the horizon-limited output
      const double s_max =
          std::max({p.gamma, std::abs(p.g), p.J, std::abs(d), 1.0});
      const long long n = static_cast<long long>(std::ceil(horizon * 40.0 * s_max));
      const double h = horizon / static_cast<double>(n);
      cplx a1(0.0, 0.0), a2(0.0, 0.0);
      const cplx iJ(0.0, p.J);
      const auto deriv = [&](double t, const cplx& x1, const cplx& x2, cplx& d1, cplx& d2) {
        d1 = -p.gamma * x1 - iJ * x2 + p.E * cplx(std::cos(d * t), -std::sin(d * t));
        d2 = p.g * x2 - iJ * x1;
      };
      for (long long k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * h;
        cplx k11, k12, k21, k22, k31, k32, k41, k42;
        deriv(t, a1, a2, k11, k12);
        deriv(t + 0.5 * h, a1 + 0.5 * h * k11, a2 + 0.5 * h * k12, k21, k22);
        deriv(t + 0.5 * h, a1 + 0.5 * h * k21, a2 + 0.5 * h * k22, k31, k32);
        deriv(t + h, a1 + h * k31, a2 + h * k32, k41, k42);
        a1 += (h / 6.0) * (k11 + 2.0 * k21 + 2.0 * k31 + k41);
        a2 += (h / 6.0) * (k12 + 2.0 * k22 + 2.0 * k32 + k42);
        if (!(std::abs(a2) < 1e300)) {
          SimError err(ErrCode::Overflow, "classical response blew up before the horizon");
          err.payload = t;
          throw err;
        }
      }
      curve.response.push_back(std::norm(a2));
    }
  }

  curve.peak_indices = detect_peaks(curve.response, 0.01);
  return curve;
}

}  // namespace plaser
