#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "womsearch/benefit.hpp"
#include "womsearch/market.hpp"
#include "womsearch/numeric.hpp"
#include "womsearch/pricing.hpp"

namespace womsearch {

enum class Stability { Stable, Unstable, Tangent };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Tangent: return "tangent";
  }
  return "?";
}

// One interior solution q of search_benefit(q,k,v) = c with derived statistics.
struct EquilibriumRoot {
  double q = 0.0;
  Stability stability = Stability::Tangent;
  double eta = 0.0;
  double expected_price = 0.0;
  double expected_min_price = 0.0;
  double firm_profit = 0.0;
  double support_low = 0.0;
};

// Search-cost band [c_lower, c_upper] inside which a stable interior
// equilibrium exists.  c_lower is the q->1 limit of the benefit curve,
// c_upper its maximum over (0,1).
struct CostBounds {
  double c_lower = 0.0;
  double c_upper = 0.0;
  double q_at_peak = 0.0;
};

enum class SolveStatus { Ok, NoInteriorEquilibrium };

struct SolveResult {
  SolveStatus status = SolveStatus::Ok;
  CostBounds bounds;
  std::vector<EquilibriumRoot> roots;
  // The no-search outcome q = 0 (no price information, no trade) always
  // coexists with any interior equilibrium; it is a boundary fact of the
  // model, never reported as a root.
  static constexpr const char* boundary_note =
      "q=0 no-search/no-trade outcome always coexists; excluded from roots";
};

// log(c_lower(k)/v) for
//   c_lower(k) = v/(2^k (2^k-1)) * (2^{k-1} ln(2^{k+1}-1)/(2^k-1) - 1),
// evaluated fully in log space so k up to 2^40 and beyond is exact even when
// the value itself underflows any floating-point range.
inline double lower_cost_bound_log(std::int64_t k) {
  detail::check_k(k);
  constexpr double ln2 = 0.6931471805599453;
  const double kd = static_cast<double>(k);
  // log(2^k - 1) and log(2^{k+1} - 1)
  const double log_x = kd * ln2 + (k < 1075 ? std::log1p(-std::exp2(-kd)) : 0.0);
  const double big_log = (kd + 1.0) * ln2 + (k < 1074 ? std::log1p(-std::exp2(-kd - 1.0)) : 0.0);
  // c_lower/v = big_log/(2 x^2) - 1/(2^k x)
  const double term1 = std::log(big_log) - ln2 - 2.0 * log_x;
  const double term2 = -kd * ln2 - log_x;
  return term1 + std::log1p(-std::exp(term2 - term1));
}

// Closed-form c_lower(k); underflows gracefully to 0 for very large k.
inline double lower_cost_bound(double v, std::int64_t k) {
  if (!(v > 0.0)) throw std::domain_error("lower_cost_bound: v must be positive");
  return v * std::exp(lower_cost_bound_log(k));
}

namespace detail {

// Candidate abscissae for bracketing: a uniform grid on [1e-9, 1-1e-9]
// merged with a log-spaced one.  The benefit curve of a large-k market
// lives entirely at q = O(1/k), far below uniform-grid resolution.
inline const std::vector<double>& bracket_grid() {
  static const std::vector<double> grid = [] {
    constexpr int n = 2048;
    constexpr double lo = 1e-9, hi = 1.0 - 1e-9;
    std::vector<double> g;
    g.reserve(2 * n);
    for (int i = 0; i < n; ++i)
      g.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
      g.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1)));
    g.push_back(1.0);  // the curve is defined at q = 1; roots can sit this close
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
  }();
  return grid;
}

// Bisection on f over a sign-changing bracket, run to adjacent doubles.
template <typename F>
double bisect_root(F&& f, double a, double b, double fa, double fb) {
  for (int it = 0; it < 200; ++it) {
    const double mid = a + 0.5 * (b - a);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) != (fm < 0.0)) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
  }
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

// d(benefit)/dq at v = 1, central difference with the stencil clamped into
// (0, 1].
inline double benefit_derivative(double q, std::int64_t k, double h = 1e-6) {
  const double hi = std::min(q + std::min(h, (1.0 - q) * 0.5 + 1e-18), 1.0);
  const double lo = std::max(q - std::min(h, q * 0.5), 1e-12);
  return (search_benefit_unit(hi, k) - search_benefit_unit(lo, k)) / (hi - lo);
}

inline EquilibriumRoot make_root(double q, Stability st, std::int64_t k, double v) {
  const double e = eta(q, k);
  const double ep = expected_price(e, v);
  const double gap = expected_min_gap(e, v);
  const PriceDistribution d = make_price_distribution(e, v);
  return {q, st, e, ep, ep - gap, firm_profit(q, k, v), d.p_low};
}

}  // namespace detail

// Lower and upper search-cost bounds for a k-friend market.  The lower bound
// is computed both from the closed form and as the q = 1 value of the benefit
// curve; the two routes must agree to 1e-9*v.  The peak is bracketed on the
// candidate grid and refined by golden-section search to 1e-12 in q.
inline CostBounds cost_bounds(double v, std::int64_t k) {
  detail::check_k(k);
  if (!(v > 0.0)) throw std::domain_error("cost_bounds: v must be positive");
  const double closed = std::exp(lower_cost_bound_log(k));
  const double limit = detail::search_benefit_unit(1.0, k);
  if (std::abs(closed - limit) > 1e-9)
    throw std::logic_error("cost_bounds: closed form and q->1 limit disagree");

  const auto& grid = detail::bracket_grid();
  std::size_t best = 0;
  double best_val = -1.0;
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = detail::search_benefit_unit(grid[i], k);
    if (vals[i] > best_val) {
      best_val = vals[i];
      best = i;
    }
  }
  const double a = best > 0 ? grid[best - 1] : grid[best];
  const double b = best + 1 < grid.size() ? grid[best + 1] : grid[best];
  const double q_peak = detail::golden_section_max(
      [k](double q) { return detail::search_benefit_unit(q, k); }, a, b, 1e-12);
  const double c_upper = detail::search_benefit_unit(q_peak, k);
  return {v * closed, v * c_upper, q_peak};
}

// All interior roots of search_benefit(q,k,v) = c, bracketed on the candidate
// grid and bisected to machine precision, classified by the sign of the
// numerically differentiated benefit (step 1e-6, tolerance 1e-8): negative
// slope means locally attracting (Stable).  A cost within 1e-10*v of the
// curve maximum is treated as the tangent case and reported as a single
// Tangent root at the peak.
inline SolveResult solve_search_equilibrium(const MarketParams& params) {
  params.validate();
  if (!(params.c < params.v))
    throw std::invalid_argument("solve_search_equilibrium: requires c < v");
  const std::int64_t k = params.k;
  const double ch = params.c / params.v;  // cost in units of v

  SolveResult res;
  res.bounds = cost_bounds(1.0, k);
  const double c_upper_unit = res.bounds.c_upper;
  const double q_peak = res.bounds.q_at_peak;
  res.bounds.c_lower *= params.v;
  res.bounds.c_upper *= params.v;
  res.bounds.q_at_peak = q_peak;

  constexpr double tangent_tol = 1e-10;
  const double peak_gap = c_upper_unit - ch;

  if (peak_gap < -tangent_tol) {
    res.status = SolveStatus::NoInteriorEquilibrium;
    return res;
  }

  auto h = [k, ch](double q) { return detail::search_benefit_unit(q, k) - ch; };

  std::vector<double> qs;
  const auto& grid = detail::bracket_grid();
  double prev_q = grid[0];
  double prev_h = h(prev_q);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur_q = grid[i];
    const double cur_h = h(cur_q);
    if (prev_h == 0.0) {
      qs.push_back(prev_q);
    } else if ((prev_h < 0.0) != (cur_h < 0.0)) {
      qs.push_back(detail::bisect_root(h, prev_q, cur_q, prev_h, cur_h));
    }
    prev_q = cur_q;
    prev_h = cur_h;
  }
  if (prev_h == 0.0) qs.push_back(prev_q);

  if (std::abs(peak_gap) <= tangent_tol) {
    // Tangency: collapse any crossings produced by the sliver above the
    // cost line into one root at the peak.  The sliver half-width is
    // sqrt(2*tol/|B''|).
    const double hs = std::max(1e-7, q_peak * 1e-3);
    const double b2 = std::abs((detail::search_benefit_unit(std::min(q_peak + hs, 1.0), k) -
                                2.0 * detail::search_benefit_unit(q_peak, k) +
                                detail::search_benefit_unit(std::max(q_peak - hs, 1e-12), k)) /
                               (hs * hs));
    const double window =
        std::clamp(3.0 * std::sqrt(2.0 * tangent_tol / std::max(b2, 1e-6)), 1e-8, 1e-2);
    std::erase_if(qs, [&](double q) { return std::abs(q - q_peak) <= window; });
    qs.push_back(q_peak);
  }

  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end(),
                       [](double x, double y) { return std::abs(x - y) < 1e-13; }),
           qs.end());

  constexpr double stab_tol = 1e-8;
  for (double q : qs) {
    const double d = detail::benefit_derivative(q, k);
    const Stability st = d < -stab_tol   ? Stability::Stable
                         : d > stab_tol ? Stability::Unstable
                                        : Stability::Tangent;
    res.roots.push_back(detail::make_root(q, st, k, params.v));
  }
  return res;
}

}  // namespace womsearch
