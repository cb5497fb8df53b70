#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "drive.hpp"
#include "errors.hpp"

namespace plaser {

TimeGrid::TimeGrid(double t_end_, long long n_steps_)
    : t_end(t_end_), n_steps(n_steps_) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    fail(ErrCode::NegativeQuantity, "t_end must be > 0");
  }
  if (n_steps < 1) {
    fail(ErrCode::NegativeQuantity, "n_steps must be >= 1");
  }
  h = t_end / static_cast<double>(n_steps);
}

TimeGrid TimeGrid::make(const SystemParams& p, double t_end, long long n_steps) {
  validate_params(p);
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    fail(ErrCode::NegativeQuantity, "t_end must be > 0");
  }
  const double frame_rate = std::max(
      {p.omega_m, 2.0 * p.J, std::abs(p.Delta) + p.J, p.gamma, std::abs(p.g)});
  if (n_steps == 0) {
    DriveEnvelope env(p);
    const double s_max = std::max({frame_rate, p.gamma_m,
                                   p.g_m * env.e1_bound(t_end)});
    const double steps_d = std::ceil(t_end * 40.0 * s_max);
    if (steps_d > 2e8) {
      std::ostringstream os;
      os << "auto grid would need " << steps_d
         << " steps; the parameter scales are too far apart";
      fail(ErrCode::StepTooLarge, os.str());
    }
    n_steps = std::max<long long>(1, static_cast<long long>(steps_d));
  }
  TimeGrid grid(t_end, n_steps);
  const double h_max = 1.0 / (20.0 * frame_rate);
  if (grid.h > h_max) {
    std::ostringstream os;
    os << "h = " << grid.h << " exceeds 1/(20 max rate) = " << h_max
       << "; increase steps";
    fail(ErrCode::StepTooLarge, os.str());
  }
  return grid;
}

std::vector<long long> TimeGrid::output_indices(int max_points) const {
  std::vector<long long> idx;
  if (max_points < 1) max_points = 1;
  const long long stride =
      std::max<long long>(1, (n_steps + max_points - 1) / max_points);
  for (long long i = 0; i < n_steps; i += stride) idx.push_back(i);
  idx.push_back(n_steps);
  return idx;
}

}  // namespace plaser
