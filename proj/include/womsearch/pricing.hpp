#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "womsearch/numeric.hpp"
#include "womsearch/shares.hpp"

namespace womsearch {

// Equilibrium mixed pricing strategy of both firms:
//   F(p) = 1 - eta*(v/p - 1)  on [eta*v/(1+eta), v].
struct PriceDistribution {
  double eta = 1.0;
  double v = 1.0;
  double p_low = 0.5;
  double p_high = 1.0;
};

inline PriceDistribution make_price_distribution(double eta, double v) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw std::domain_error("PriceDistribution: eta must be positive and finite");
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::domain_error("PriceDistribution: v must be positive and finite");
  return {eta, v, eta * v / (eta + 1.0), v};
}

inline double price_cdf(double p, const PriceDistribution& d) {
  if (!(p >= d.p_low && p <= d.p_high))
    throw std::domain_error("price_cdf: p outside the support");
  return std::clamp(1.0 - d.eta * (d.v / p - 1.0), 0.0, 1.0);
}

inline double price_quantile(double u, const PriceDistribution& d) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("price_quantile: u must lie in [0,1]");
  // u = 1 maps to v exactly; u = 0 reproduces p_low bit for bit.
  return d.eta * d.v / (d.eta + (1.0 - u));
}

// E[p] = v*eta*ln(1 + 1/eta).
inline double expected_price(double eta, double v) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::domain_error("expected_price: eta must be positive");
  if (!(v > 0.0)) throw std::domain_error("expected_price: v must be positive");
  return v * (1.0 - detail::surplus_factor(eta));
}

// E[p] - E[min{p1,p2}] = eta*v*((1+2*eta)*ln(1+1/eta) - 2).
inline double expected_min_gap(double eta, double v) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::domain_error("expected_min_gap: eta must be positive");
  if (!(v > 0.0)) throw std::domain_error("expected_min_gap: v must be positive");
  return v * detail::min_gap_factor(eta);
}

// Per-firm equilibrium profit.  At p = v a firm serves half the captive
// pool, and the equal-profit construction of F makes every supported price
// earn the same:  pi = v*((1-q/2)^{k+1} - (1-q)^{k+1}).
inline double firm_profit(double q, std::int64_t k, double v) {
  detail::check_k(k);
  if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("firm_profit: q must lie in (0,1]");
  if (!(v > 0.0)) throw std::domain_error("firm_profit: v must be positive");
  return v * detail::pow1m_half_diff(q, static_cast<double>(k) + 1.0);
}

}  // namespace womsearch
