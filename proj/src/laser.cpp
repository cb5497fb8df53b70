#include "laser.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace plaser {

namespace {

// Piecewise-linear inversion lookup over the series' sampled times.
struct InversionTable {
  std::vector<double> t;
  std::vector<double> dn;

  double operator()(double x) const {
    if (x <= t.front()) return dn.front();
    if (x >= t.back()) return dn.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const size_t j = static_cast<size_t>(it - t.begin());
    const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
    return dn[j - 1] + w * (dn[j] - dn[j - 1]);
  }
};

InversionTable build_table(const PopulationSeries& inv) {
  InversionTable tab;
  tab.t.reserve(inv.points.size());
  tab.dn.reserve(inv.points.size());
  for (const PopulationPoint& pt : inv.points) {
    const LogValue v = pt.inversion();
    if (!v.finite_double()) {
      std::ostringstream os;
      os << "inversion exceeds double range at t = " << pt.t
         << " (far above threshold)";
      SimError err(ErrCode::Overflow, os.str());
      err.payload = pt.t;
      throw err;
    }
    tab.t.push_back(pt.t);
    tab.dn.push_back(v.to_double());
  }
  return tab;
}

}  // namespace

LaserTrajectory integrate_laser(const SystemParams& p, const PopulationSeries& inversion,
                                cplx b_s0, cplx p0) {
  validate_params(p);
  if (b_s0 == cplx(0.0, 0.0))
    fail(ErrCode::ConfigError, "b_s0 must be nonzero, the amplification ratio divides by it");
  if (inversion.points.size() < 2)
    fail(ErrCode::GridMismatch, "inversion series has fewer than two points");
  if (inversion.points.front().t != 0.0)
    fail(ErrCode::GridMismatch, "inversion series does not start at t = 0");

  const double t_ref = 1.0 / p.gamma_m;
  const double t_last = inversion.points.back().t;
  if (t_last < t_ref * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "inversion series ends at t = " << t_last << " but the amplification ratio needs t = "
       << t_ref;
    fail(ErrCode::GridMismatch, os.str());
  }

  const InversionTable dn = build_table(inversion);

  // March over all evolution-grid times with t_ref spliced in; RK4 handles
  // the one short step this creates.
  const TimeGrid& grid = inversion.grid;
  std::vector<double> knots;
  knots.reserve(static_cast<size_t>(grid.n_steps) + 2);
  bool ref_inserted = false;
  for (long long i = 0; i <= grid.n_steps; ++i) {
    const double ti = grid.time(i);
    if (!ref_inserted && ti > t_ref * (1.0 + 1e-15)) {
      knots.push_back(t_ref);
      ref_inserted = true;
    }
    if (ti == t_ref) ref_inserted = true;
    knots.push_back(ti);
  }
  if (!ref_inserted) knots.push_back(std::min(t_ref, t_last));

  // Output at the series' own sampled times (they are grid times, so exact
  // matches), plus t_ref.
  size_t next_out = 0;

  LaserTrajectory traj;
  traj.params = p;
  traj.method = inversion.method;
  traj.noise_mode = inversion.noise_mode;
  traj.t_ref = t_ref;
  traj.t.reserve(inversion.points.size() + 1);
  traj.b_s.reserve(inversion.points.size() + 1);
  traj.p.reserve(inversion.points.size() + 1);

  const cplx mu_b(-p.gamma_m, -p.omega_m);
  const cplx mu_p(0.5 * (p.g - p.gamma), -2.0 * p.J);
  const cplx half_i_gm(0.0, 0.5 * p.g_m);

  cplx b = b_s0, q = p0;
  bool have_ref = false;
  const auto record = [&](double tcur) {
    if (next_out < inversion.points.size() && inversion.points[next_out].t == tcur) {
      traj.t.push_back(tcur);
      traj.b_s.push_back(b);
      traj.p.push_back(q);
      ++next_out;
    }
    if (!have_ref && tcur >= t_ref * (1.0 - 1e-15)) {
      traj.b_ref = b;
      have_ref = true;
    }
  };

  record(knots.front());
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double t0 = knots[k];
    const double h = knots[k + 1] - t0;
    if (h <= 0.0) {
      record(knots[k + 1]);
      continue;
    }
    const auto deriv = [&](double tt, const cplx& bb, const cplx& qq, cplx& db, cplx& dq) {
      db = mu_b * bb - half_i_gm * qq;
      dq = half_i_gm * dn(tt) * bb + mu_p * qq;
    };
    cplx kb1, kq1, kb2, kq2, kb3, kq3, kb4, kq4;
    deriv(t0, b, q, kb1, kq1);
    deriv(t0 + 0.5 * h, b + 0.5 * h * kb1, q + 0.5 * h * kq1, kb2, kq2);
    deriv(t0 + 0.5 * h, b + 0.5 * h * kb2, q + 0.5 * h * kq2, kb3, kq3);
    deriv(t0 + h, b + h * kb3, q + h * kq3, kb4, kq4);
    b += (h / 6.0) * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
    q += (h / 6.0) * (kq1 + 2.0 * kq2 + 2.0 * kq3 + kq4);

    const double mag = std::max(std::abs(b), std::abs(q));
    if (!(mag < 1e300)) {
      std::ostringstream os;
      os << "stimulated phonon amplitude passed 1e300 at t = " << knots[k + 1]
         << " (far above threshold)";
      SimError err(ErrCode::Overflow, os.str());
      err.payload = knots[k + 1];
      throw err;
    }
    record(knots[k + 1]);
  }

  if (!have_ref) {
    traj.b_ref = b;
  }
  traj.amplification = std::norm(traj.b_ref) / std::norm(b_s0);
  return traj;
}

double amplification_ratio(const LaserTrajectory& traj) { return traj.amplification; }

ThresholdScan threshold_scan(const SystemParams& base, std::vector<double> E_values,
                             EvolutionMethod method, NoiseMode noise_mode,
                             ProductMethod product_method) {
  if (E_values.empty())
    fail(ErrCode::ConfigError, "threshold scan needs at least one drive value");
  std::sort(E_values.begin(), E_values.end());
  for (double e : E_values)
    if (!(e >= 0.0)) fail(ErrCode::NegativeQuantity, "drive amplitude E must be >= 0");

  ThresholdScan scan;
  scan.E = E_values;
  scan.amplification.reserve(E_values.size());

  for (double e : E_values) {
    SystemParams p = base;
    p.E = e;
    double amp;
    try {
      const TimeGrid grid = TimeGrid::make(p, 1.0 / p.gamma_m);
      const PopulationSeries inv =
          inversion_series(p, grid, method, noise_mode, product_method);
      amp = integrate_laser(p, inv).amplification;
    } catch (const SimError& err) {
      if (err.code() != ErrCode::Overflow) throw;
      amp = std::numeric_limits<double>::infinity();
    }
    scan.amplification.push_back(amp);
  }

  size_t idx = scan.E.size();
  for (size_t k = 0; k < scan.E.size(); ++k) {
    if (scan.amplification[k] >= 1.0) {
      idx = k;
      break;
    }
  }
  if (idx == scan.E.size())
    fail(ErrCode::NoThresholdInRange,
         "all amplification ratios stay below 1 over the scanned drive range");
  if (idx == 0)
    fail(ErrCode::NoThresholdInRange,
         "already above threshold at the smallest scanned drive; no bracket from below");
  scan.E_threshold = scan.E[idx];
  scan.E_below = scan.E[idx - 1];
  return scan;
}

}  // namespace plaser
