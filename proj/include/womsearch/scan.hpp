#pragma once

#include <cstdint>
#include <future>
#include <optional>
#include <stdexcept>
#include <vector>

#include "womsearch/equilibrium.hpp"
#include "womsearch/links.hpp"

namespace womsearch {

enum class ScanStatus { StableRoot, NoStableRoot, NoInteriorEquilibrium };

inline const char* to_string(ScanStatus s) {
  switch (s) {
    case ScanStatus::StableRoot: return "stable";
    case ScanStatus::NoStableRoot: return "no_stable_root";
    case ScanStatus::NoInteriorEquilibrium: return "no_interior_equilibrium";
  }
  return "?";
}

struct ScanStableStats {
  double q_star = 0.0;
  double eta = 0.0;
  double expected_price = 0.0;
  double firm_profit = 0.0;
  double l_bar = 0.0;
};

struct ScanRow {
  std::int64_t k = 1;
  ScanStatus status = ScanStatus::NoStableRoot;
  double c_lower = 0.0;  // closed form, always reported
  std::optional<ScanStableStats> stable;
};

// Solve the market for each k in the schedule and tabulate the stable root
// and its derived statistics.  Entries with no stable interior root are
// reported with a status rather than dropped.  Rows are independent and
// computed concurrently; the output order is the schedule order.
inline std::vector<ScanRow> asymptotic_scan(double v, double c, const std::vector<std::int64_t>& ks) {
  if (!(v > 0.0) || !(c > 0.0) || !(c < v))
    throw std::invalid_argument("asymptotic_scan: need 0 < c < v");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1 || (i > 0 && ks[i] <= ks[i - 1]))
      throw std::invalid_argument("asymptotic_scan: k schedule must be strictly increasing, >= 1");
  }

  auto run_one = [v, c](std::int64_t k) {
    ScanRow row;
    row.k = k;
    row.c_lower = lower_cost_bound(v, k);
    const SolveResult sol = solve_search_equilibrium({v, c, k, 0.0});
    if (sol.status == SolveStatus::NoInteriorEquilibrium) {
      row.status = ScanStatus::NoInteriorEquilibrium;
      return row;
    }
    const EquilibriumRoot* stable = nullptr;
    for (const auto& r : sol.roots)
      if (r.stability == Stability::Stable) stable = &r;
    if (!stable) {
      row.status = ScanStatus::NoStableRoot;
      return row;
    }
    row.status = ScanStatus::StableRoot;
    const double l_bar = link_decision({v, c, k, 0.0}, stable->q).l_bar;
    row.stable = ScanStableStats{stable->q, stable->eta, stable->expected_price,
                                 stable->firm_profit, l_bar};
    return row;
  };

  std::vector<std::future<ScanRow>> futs;
  futs.reserve(ks.size());
  for (std::int64_t k : ks)
    futs.push_back(std::async(std::launch::async | std::launch::deferred, run_one, k));
  std::vector<ScanRow> rows;
  rows.reserve(ks.size());
  for (auto& f : futs) rows.push_back(f.get());
  return rows;
}

// Convenience schedule k = 2^0 .. 2^max_exp.
inline std::vector<std::int64_t> power_of_two_schedule(int max_exp) {
  if (max_exp < 0 || max_exp > 62) throw std::invalid_argument("power_of_two_schedule: bad exponent");
  std::vector<std::int64_t> ks;
  for (int j = 0; j <= max_exp; ++j) ks.push_back(std::int64_t{1} << j);
  return ks;
}

}  // namespace womsearch
