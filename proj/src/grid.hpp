#pragma once

#include <vector>

#include "params.hpp"

namespace plaser {

// Uniform time grid t_i = i * h, i = 0..n_steps, h = t_end / n_steps.
struct TimeGrid {
  double t_end = 0.0;
  long long n_steps = 0;
  double h = 0.0;

  TimeGrid() = default;
  TimeGrid(double t_end_, long long n_steps_);

  // Grid with the resolution rule h = 1/(40 s_max), where s_max covers every
  // rate in the problem: the frame phases (omega_m, 2J, |Delta|+J), the
  // damping/gain rates and the pump-induced coupling g_m * sup|E1|. Enforces
  // the hard invariant h <= 1/(20 max(omega_m, 2J, |Delta|+J, gamma, |g|))
  // (StepTooLarge otherwise), which also rejects undersized explicit counts.
  static TimeGrid make(const SystemParams& p, double t_end, long long n_steps = 0);

  double time(long long i) const {
    return i == n_steps ? t_end : static_cast<double>(i) * h;
  }

  // at most max_points+1 roughly uniform indices, always including 0 and n
  std::vector<long long> output_indices(int max_points = 512) const;
};

}  // namespace plaser
