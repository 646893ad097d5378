#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "womsearch/benefit.hpp"

namespace womsearch {

// Best-response adjustment of the population search share:
//   q_{t+1} = clamp(q_t + gain * (benefit(q_t) - c)/v, 1e-6, 1 - 1e-6).
// Stable interior roots attract, unstable ones repel; trajectories that exit
// toward q = 0 pile up on the lower clamp.
struct DynamicsResult {
  std::vector<double> trajectory;  // q_0 .. q_T
  bool converged = false;
  std::size_t steps_taken = 0;
};

inline DynamicsResult best_response_dynamics(double v, double c, std::int64_t k, double q0,
                                             std::size_t max_steps, double gain = 0.1) {
  detail::check_k(k);
  if (!(v > 0.0) || !(c > 0.0)) throw std::domain_error("best_response_dynamics: v, c must be positive");
  if (!(q0 > 0.0 && q0 < 1.0)) throw std::domain_error("best_response_dynamics: q0 must lie in (0,1)");
  if (!(gain > 0.0)) throw std::domain_error("best_response_dynamics: gain must be positive");

  constexpr double clamp_lo = 1e-6, clamp_hi = 1.0 - 1e-6;
  const double ch = c / v;

  DynamicsResult res;
  res.trajectory.reserve(std::min<std::size_t>(max_steps + 1, 1 << 20));
  double q = std::clamp(q0, clamp_lo, clamp_hi);
  res.trajectory.push_back(q);
  for (std::size_t t = 0; t < max_steps; ++t) {
    const double next =
        std::clamp(q + gain * (detail::search_benefit_unit(q, k) - ch), clamp_lo, clamp_hi);
    res.trajectory.push_back(next);
    ++res.steps_taken;
    if (std::abs(next - q) < 1e-10) {
      res.converged = true;
      q = next;
      break;
    }
    q = next;
  }
  return res;
}

}  // namespace womsearch
