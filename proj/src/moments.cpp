#include "moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace plaser {

namespace {

struct MomentState {
  Vec6 m = Vec6::Zero();
  Mat6 si = Mat6::Zero();  // initial-state part
  Mat6 so = Mat6::Zero();  // optical diffusion part
  Mat6 sv = Mat6::Zero();  // (n_th+1)-channel mechanical part, unit prefactor
  Mat6 sn = Mat6::Zero();  // n_th-channel mechanical part, unit prefactor
};

MomentState operator+(const MomentState& a, const MomentState& b) {
  return {a.m + b.m, a.si + b.si, a.so + b.so, a.sv + b.sv, a.sn + b.sn};
}

MomentState operator*(double c, const MomentState& s) {
  return {c * s.m, c * s.si, c * s.so, c * s.sv, c * s.sn};
}

// Inhomogeneous terms enter scaled by 2^{-k}; once k is large the injected
// contribution is below one ulp of the amplified state and flushing the
// scale factor to zero is exact for all practical purposes.
double injection_scale(long long k) {
  const int e = static_cast<int>(std::min<long long>(k, 2000));
  return std::ldexp(1.0, -e);
}

bool finite(const MomentState& s) {
  const auto ok = [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  };
  for (int r = 0; r < 6; ++r) {
    if (!ok(s.m(r))) return false;
    for (int c = 0; c < 6; ++c)
      if (!ok(s.si(r, c)) || !ok(s.so(r, c)) || !ok(s.sv(r, c)) || !ok(s.sn(r, c)))
        return false;
  }
  return true;
}

}  // namespace

MomentSeries evolve_moments(const LinearSystemOps& ops, const TimeGrid& grid,
                            int max_output_points) {
  MomentSeries series;
  series.grid = grid;
  const std::vector<long long> out = grid.output_indices(max_output_points);
  series.snaps.reserve(out.size());

  MomentState y;
  y.si = ops.sigma0;
  long long k_mean = 0;
  long long k_sig = 0;

  const double h = grid.h;
  // Renormalize once coefficients pass 2^500; scale factors are powers of
  // two so the rescaling itself is exact.
  const double renorm_cap = std::ldexp(1.0, 500);

  size_t next_out = 0;
  const auto snapshot = [&](long long i) {
    MomentSnapshot s;
    s.t = grid.time(i);
    s.mean = y.m;
    s.k_mean = k_mean;
    s.sig_init = y.si;
    s.sig_opt = y.so;
    s.sig_vac = y.sv;
    s.sig_nth = y.sn;
    s.k_sig = k_sig;
    series.snaps.push_back(std::move(s));
  };

  // Unit-prefactor channel sources. The ops split is
  //   D_mech = D_mech_vac + n_th * D_mech_nth
  // with D_mech_vac carrying only the b-row entry and D_mech_nth both; the
  // two per-channel sources recover exactly (the subtraction is 0 or exact).
  const Mat6 d_vac = ops.D_mech_vac;
  const Mat6 d_nth = ops.D_mech_nth - ops.D_mech_vac;

  for (long long i = 0; i <= grid.n_steps; ++i) {
    if (next_out < out.size() && out[next_out] == i) {
      snapshot(i);
      ++next_out;
    }
    if (i == grid.n_steps) break;

    const double t = grid.time(i);
    const Mat6 m_a = ops.M(t);
    const Mat6 m_b = ops.M(t + 0.5 * h);
    const Mat6 m_c = ops.M(t + h);
    const Vec6 lam_a = injection_scale(k_mean) * ops.lambda(t);
    const Vec6 lam_b = injection_scale(k_mean) * ops.lambda(t + 0.5 * h);
    const Vec6 lam_c = injection_scale(k_mean) * ops.lambda(t + h);
    const double ds = injection_scale(k_sig);
    const Mat6 dopt_a = ds * ops.D_optical(t);
    const Mat6 dopt_b = ds * ops.D_optical(t + 0.5 * h);
    const Mat6 dopt_c = ds * ops.D_optical(t + h);
    const Mat6 dvac_s = ds * d_vac;
    const Mat6 dnth_s = ds * d_nth;

    const auto deriv = [&](const MomentState& s, const Mat6& mm, const Vec6& lam,
                           const Mat6& dopt) {
      MomentState d;
      d.m = mm * s.m + lam;
      const Mat6 mmt = mm.transpose();
      d.si = mm * s.si + s.si * mmt;
      d.so = mm * s.so + s.so * mmt + dopt;
      d.sv = mm * s.sv + s.sv * mmt + dvac_s;
      d.sn = mm * s.sn + s.sn * mmt + dnth_s;
      return d;
    };

    const MomentState k1 = deriv(y, m_a, lam_a, dopt_a);
    const MomentState k2 = deriv(y + (0.5 * h) * k1, m_b, lam_b, dopt_b);
    const MomentState k3 = deriv(y + (0.5 * h) * k2, m_b, lam_b, dopt_b);
    const MomentState k4 = deriv(y + h * k3, m_c, lam_c, dopt_c);
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double amax_m = y.m.cwiseAbs().maxCoeff();
    const double amax_s =
        std::max(std::max(y.si.cwiseAbs().maxCoeff(), y.so.cwiseAbs().maxCoeff()),
                 std::max(y.sv.cwiseAbs().maxCoeff(), y.sn.cwiseAbs().maxCoeff()));
    if (!(amax_m < 1e308) || !(amax_s < 1e308) || ((i & 31) == 0 && !finite(y))) {
      std::ostringstream os;
      os << "moment state turned non-finite at t = " << grid.time(i + 1);
      SimError err(ErrCode::Overflow, os.str());
      err.payload = grid.time(i + 1);
      throw err;
    }
    if (amax_m > renorm_cap) {
      const int e = std::ilogb(amax_m);
      y.m *= std::ldexp(1.0, -e);
      k_mean += e;
    }
    if (amax_s > renorm_cap) {
      const int e = std::ilogb(amax_s);
      const double c = std::ldexp(1.0, -e);
      y.si *= c;
      y.so *= c;
      y.sv *= c;
      y.sn *= c;
      k_sig += e;
    }
  }
  return series;
}

}  // namespace plaser
