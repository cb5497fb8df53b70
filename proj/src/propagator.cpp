#include "propagator.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace plaser {

ProductMethod parse_product_method(const std::string& s) {
  if (s == "euler_product") return ProductMethod::euler_product;
  if (s == "midpoint_product") return ProductMethod::midpoint_product;
  fail(ErrCode::UnknownMode, "unknown product method '" + s +
                                 "' (expected euler_product or midpoint_product)");
}

const char* product_method_name(ProductMethod m) {
  return m == ProductMethod::euler_product ? "euler_product" : "midpoint_product";
}

namespace {

constexpr double overflow_cap = 1e300;

[[noreturn]] void throw_blowup(double t) {
  std::ostringstream os;
  os << "propagator magnitude passed 1e300 at t = " << t
     << "; solution has blown up (likely far above threshold)";
  SimError err(ErrCode::Overflow, os.str());
  err.payload = t;
  throw err;
}

}  // namespace

PropagatorGrid evolve_product(const LinearSystemOps& ops, const TimeGrid& grid,
                              ProductMethod method) {
  PropagatorGrid pg;
  pg.grid = grid;
  pg.method = method;
  pg.P.resize(static_cast<size_t>(grid.n_steps) + 1);
  pg.P[0] = Mat6::Identity();

  const double h = grid.h;
  for (long long i = 0; i < grid.n_steps; ++i) {
    Mat6 factor;
    if (method == ProductMethod::euler_product) {
      factor = Mat6::Identity() + h * ops.M(grid.time(i));
    } else {
      const Mat6 mh = h * ops.M(grid.time(i) + 0.5 * h);
      factor = Mat6::Identity() + mh + 0.5 * (mh * mh);
    }
    pg.P[i + 1] = factor * pg.P[i];
    const double amax = pg.P[i + 1].cwiseAbs().maxCoeff();
    if (!(amax < overflow_cap)) throw_blowup(grid.time(i + 1));
  }
  return pg;
}

double condition_estimate(const Mat6& m) {
  // 1-norm (max column absolute sum) of m and of its LU inverse.
  const auto colnorm1 = [](const Mat6& a) {
    double best = 0.0;
    for (int c = 0; c < 6; ++c) best = std::max(best, a.col(c).cwiseAbs().sum());
    return best;
  };
  Eigen::PartialPivLU<Mat6> lu(m);
  const Mat6 inv = lu.inverse();
  if (!inv.allFinite()) return std::numeric_limits<double>::infinity();
  return colnorm1(m) * colnorm1(inv);
}

Mat6 interval_propagator(const PropagatorGrid& pg, int i, int j) {
  const long long n = pg.grid.n_steps;
  if (i < 0 || j < 0 || i > n || j > n)
    fail(ErrCode::GridMismatch, "interval endpoints outside the propagator grid");
  if (i == j) return Mat6::Identity();

  const Mat6& pj = pg.P[static_cast<size_t>(j)];
  const double cond = condition_estimate(pj);
  if (!(cond <= 1e12)) {
    std::ostringstream os;
    os << "interval propagator ill conditioned: cond_1 = " << cond << " at t = "
       << pg.grid.time(j);
    fail(ErrCode::IllConditioned, os.str());
  }
  Eigen::PartialPivLU<Mat6> lu(pj);
  return pg.P[static_cast<size_t>(i)] * lu.inverse();
}

}  // namespace plaser
