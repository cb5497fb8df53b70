#include "populations.hpp"

#include <Eigen/LU>
#include <cmath>

#include "drive.hpp"
#include "errors.hpp"

namespace plaser {

const char* evolution_method_name(EvolutionMethod m) {
  return m == EvolutionMethod::product ? "product" : "moments";
}

LogValue PopulationParts::total() const {
  return initial + drive + noise_thermal + noise_optical;
}

LogValue PopulationPoint::inversion() const { return s1.total() - s2.total(); }
LogValue PopulationPoint::inversion_initial() const { return s1.initial - s2.initial; }
LogValue PopulationPoint::inversion_drive() const { return s1.drive - s2.drive; }
LogValue PopulationPoint::inversion_noise_thermal() const {
  return s1.noise_thermal - s2.noise_thermal;
}
LogValue PopulationPoint::inversion_noise_optical() const {
  return s1.noise_optical - s2.noise_optical;
}

namespace {

using Basis = OperatorBasis;

// Scale factor applied to unscaled quantities so they can be combined with
// state stored as value * 2^k; flushes to zero once the unscaled piece is
// far below one ulp of the amplified state.
double descale(long long k) {
  return std::ldexp(1.0, -static_cast<int>(std::min<long long>(k, 2000)));
}

cplx phase(double x) { return {std::cos(x), std::sin(x)}; }

// Composite moduli entering the drive parts: the supermode means in the
// un-rotated frame are S1 + e^{-iJt} <o1~> and S2 - e^{+iJt} <o2~>.
double drive_pop1(const Displacements& d, double J, double t, const cplx& mean_o1,
                  double alpha) {
  return std::norm(alpha * (phase(J * t) * d.S1) + mean_o1);
}
double drive_pop2(const Displacements& d, double J, double t, const cplx& mean_o2,
                  double alpha) {
  return std::norm(alpha * (phase(-J * t) * d.S2) - mean_o2);
}

// One-pass extraction of all product-path parts. For each covariance part X
// with source D_X,
//   Sigma_X(t) = P(t) [ integral_0^t Q(tau) D_X(tau) Q(tau)^T dtau ] P(t)^T
// with Q = P^{-1}, so one running trapezoid per source suffices; the drive
// mean is P(t) integral_0^t Q(tau) lambda(tau) dtau.
struct ProductParts {
  std::vector<long long> idx;
  std::vector<double> t;
  std::vector<Mat6> sig_init, sig_opt, sig_ch45, sig_ch54;
  std::vector<Vec6> mean;
};

// K += w * Q D Q^T accumulated through the nonzero entries of D.
void accumulate_qdqt(Mat6& K, const Mat6& Q, const Mat6& D, double w) {
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      const cplx d = D(r, c);
      if (d == cplx(0.0, 0.0)) continue;
      K.noalias() += (w * d) * (Q.col(r) * Q.col(c).transpose());
    }
}

ProductParts product_extract(const PropagatorGrid& pg, const LinearSystemOps& ops,
                             int max_output_points) {
  const TimeGrid& grid = pg.grid;
  const std::vector<long long> out = grid.output_indices(max_output_points);
  const double h = grid.h;

  const Mat6 d_ch45 = ops.D_mech_vac;
  const Mat6 d_ch54 = ops.D_mech_nth - ops.D_mech_vac;

  ProductParts parts;
  parts.idx = out;
  parts.t.reserve(out.size());

  Mat6 K_opt = Mat6::Zero(), K_45 = Mat6::Zero(), K_54 = Mat6::Zero();
  Vec6 W = Vec6::Zero();
  Mat6 f_opt_prev = Mat6::Zero(), f_45_prev = Mat6::Zero(), f_54_prev = Mat6::Zero();
  Vec6 w_prev = Vec6::Zero();

  size_t next_out = 0;
  for (long long i = 0; i <= grid.n_steps; ++i) {
    const double t = grid.time(i);
    const Mat6& P = pg.P[static_cast<size_t>(i)];
    Mat6 Q;
    if (i == 0) {
      Q = Mat6::Identity();
    } else {
      Q = Eigen::PartialPivLU<Mat6>(P).inverse();
    }

    Mat6 f_opt = Mat6::Zero(), f_45 = Mat6::Zero(), f_54 = Mat6::Zero();
    accumulate_qdqt(f_opt, Q, ops.D_optical(t), 1.0);
    accumulate_qdqt(f_45, Q, d_ch45, 1.0);
    accumulate_qdqt(f_54, Q, d_ch54, 1.0);
    const Vec6 w = Q * ops.lambda(t);

    if (i > 0) {
      K_opt.noalias() += (0.5 * h) * (f_opt_prev + f_opt);
      K_45.noalias() += (0.5 * h) * (f_45_prev + f_45);
      K_54.noalias() += (0.5 * h) * (f_54_prev + f_54);
      W.noalias() += (0.5 * h) * (w_prev + w);
    }
    f_opt_prev = f_opt;
    f_45_prev = f_45;
    f_54_prev = f_54;
    w_prev = w;

    if (next_out < out.size() && out[next_out] == i) {
      const Mat6 Pt = P.transpose();
      parts.t.push_back(t);
      parts.sig_init.push_back(P * ops.sigma0 * Pt);
      parts.sig_opt.push_back(P * K_opt * Pt);
      parts.sig_ch45.push_back(P * K_45 * Pt);
      parts.sig_ch54.push_back(P * K_54 * Pt);
      parts.mean.push_back(P * W);
      ++next_out;
    }
  }
  return parts;
}

PopulationPoint assemble_point(double t, const SystemParams& p, const DriveEnvelope& env,
                               const Vec6& mean, long long k_mean, const Mat6& si,
                               const Mat6& so, const Mat6& sv, const Mat6& sn,
                               long long k_sig) {
  PopulationPoint pt;
  pt.t = t;
  const double nth = p.n_th;
  const auto part = [&](int r, int c, PopulationParts& out) {
    out.initial = LogValue::from_scaled(si(r, c).real(), k_sig);
    out.noise_optical = LogValue::from_scaled(so(r, c).real(), k_sig);
    out.noise_thermal_nplus1 = LogValue::from_scaled((nth + 1.0) * sv(r, c).real(), k_sig);
    out.noise_thermal_nth = LogValue::from_scaled(nth * sn(r, c).real(), k_sig);
    out.noise_thermal = out.noise_thermal_nplus1 + out.noise_thermal_nth;
  };
  part(Basis::o1d, Basis::o1, pt.s1);
  part(Basis::o2d, Basis::o2, pt.s2);

  const Displacements d = env.displacements(t);
  const double alpha = descale(k_mean);
  pt.s1.drive = LogValue::from_scaled(drive_pop1(d, p.J, t, mean(Basis::o1), alpha),
                                      2 * k_mean);
  pt.s2.drive = LogValue::from_scaled(drive_pop2(d, p.J, t, mean(Basis::o2), alpha),
                                      2 * k_mean);

  const double sig_mech = si(Basis::bd, Basis::b).real() + so(Basis::bd, Basis::b).real() +
                          (nth + 1.0) * sv(Basis::bd, Basis::b).real() +
                          nth * sn(Basis::bd, Basis::b).real();
  pt.mech_occupation = LogValue::from_scaled(sig_mech, k_sig) +
                       LogValue::from_scaled(std::norm(mean(Basis::b)), 2 * k_mean);
  return pt;
}

}  // namespace

PartPairSeries initial_state_populations(const PropagatorGrid& pg, double n_th,
                                         int max_output_points) {
  if (!(n_th >= 0.0))
    fail(ErrCode::NegativeQuantity, "n_th must be >= 0 in initial_state_populations");
  Mat6 sigma0 = Mat6::Zero();
  sigma0(Basis::o1, Basis::o1d) = 1.0;
  sigma0(Basis::o2, Basis::o2d) = 1.0;
  sigma0(Basis::b, Basis::bd) = n_th + 1.0;
  sigma0(Basis::bd, Basis::b) = n_th;

  const std::vector<long long> out = pg.grid.output_indices(max_output_points);
  PartPairSeries s;
  s.t.reserve(out.size());
  for (long long i : out) {
    const Mat6& P = pg.P[static_cast<size_t>(i)];
    const Mat6 x = P * sigma0 * P.transpose();
    s.t.push_back(pg.grid.time(i));
    s.pop1.push_back(LogValue::from_double(x(Basis::o1d, Basis::o1).real()));
    s.pop2.push_back(LogValue::from_double(x(Basis::o2d, Basis::o2).real()));
  }
  return s;
}

PartPairSeries drive_populations(const PropagatorGrid& pg, const LinearSystemOps& ops,
                                 int max_output_points) {
  const DriveEnvelope env(ops.params);
  const ProductParts parts = product_extract(pg, ops, max_output_points);
  PartPairSeries s;
  s.t = parts.t;
  s.pop1.reserve(parts.t.size());
  s.pop2.reserve(parts.t.size());
  for (size_t k = 0; k < parts.t.size(); ++k) {
    const double t = parts.t[k];
    const Displacements d = env.displacements(t);
    s.pop1.push_back(LogValue::from_double(
        drive_pop1(d, ops.params.J, t, parts.mean[k](Basis::o1), 1.0)));
    s.pop2.push_back(LogValue::from_double(
        drive_pop2(d, ops.params.J, t, parts.mean[k](Basis::o2), 1.0)));
  }
  return s;
}

NoiseBreakdownSeries noise_populations(const PropagatorGrid& pg, const LinearSystemOps& ops,
                                       int max_output_points) {
  const ProductParts parts = product_extract(pg, ops, max_output_points);
  NoiseBreakdownSeries s;
  s.t = parts.t;
  const double nth = ops.n_th;
  for (size_t k = 0; k < parts.t.size(); ++k) {
    const auto push = [&](int r, int c, std::vector<LogValue>& thermal,
                          std::vector<LogValue>& th_np1, std::vector<LogValue>& th_nth,
                          std::vector<LogValue>& optical) {
      const LogValue np1 =
          LogValue::from_double((nth + 1.0) * parts.sig_ch45[k](r, c).real());
      const LogValue nn = LogValue::from_double(nth * parts.sig_ch54[k](r, c).real());
      th_np1.push_back(np1);
      th_nth.push_back(nn);
      thermal.push_back(np1 + nn);
      optical.push_back(LogValue::from_double(parts.sig_opt[k](r, c).real()));
    };
    push(Basis::o1d, Basis::o1, s.pop1_thermal, s.pop1_thermal_nplus1, s.pop1_thermal_nth,
         s.pop1_optical);
    push(Basis::o2d, Basis::o2, s.pop2_thermal, s.pop2_thermal_nplus1, s.pop2_thermal_nth,
         s.pop2_optical);
  }
  return s;
}

PopulationSeries inversion_series(const SystemParams& p, const TimeGrid& grid,
                                  EvolutionMethod method, NoiseMode noise_mode,
                                  ProductMethod product_method, int max_output_points) {
  const LinearSystemOps ops = make_system(p, noise_mode);
  const DriveEnvelope env(p);

  PopulationSeries series;
  series.params = p;
  series.method = method;
  series.product_method = product_method;
  series.noise_mode = noise_mode;
  series.grid = grid;
  series.validity_bound = approximation_bound(p, grid.t_end);

  if (method == EvolutionMethod::moments) {
    const MomentSeries ms = evolve_moments(ops, grid, max_output_points);
    series.points.reserve(ms.snaps.size());
    for (const MomentSnapshot& s : ms.snaps)
      series.points.push_back(assemble_point(s.t, p, env, s.mean, s.k_mean, s.sig_init,
                                             s.sig_opt, s.sig_vac, s.sig_nth, s.k_sig));
  } else {
    const PropagatorGrid pg = evolve_product(ops, grid, product_method);
    const ProductParts parts = product_extract(pg, ops, max_output_points);
    series.points.reserve(parts.t.size());
    for (size_t k = 0; k < parts.t.size(); ++k)
      series.points.push_back(assemble_point(parts.t[k], p, env, parts.mean[k], 0,
                                             parts.sig_init[k], parts.sig_opt[k],
                                             parts.sig_ch45[k], parts.sig_ch54[k], 0));
  }
  return series;
}

LogValue final_inversion(const PopulationSeries& s) {
  if (s.points.empty()) fail(ErrCode::GridMismatch, "population series is empty");
  return s.points.back().inversion();
}

}  // namespace plaser
