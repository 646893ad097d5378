#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "womsearch/numeric.hpp"

namespace womsearch {

// Decomposition of the consumer population by the price information that
// reaches them, own search plus word of mouth from k friends.  Each of the
// k+1 pool members independently samples one firm (chosen uniformly) with
// probability q.
struct InformationShares {
  double none_share = 1.0;     // observes no price at all
  double captive_share = 0.0;  // observes exactly one firm's price
  double compare_share = 0.0;  // observes both firms' prices
};

namespace detail {

inline void check_k(std::int64_t k) {
  if (k < 1) throw std::domain_error("k must be >= 1");
}

}  // namespace detail

inline InformationShares information_shares(double q, std::int64_t k) {
  detail::check_k(k);
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("information_shares: q must lie in [0,1]");
  const double m = static_cast<double>(k) + 1.0;  // pool = consumer + k friends
  InformationShares s;
  s.none_share = detail::pow1m(q, m);
  s.captive_share = 2.0 * detail::pow1m_half_diff(q, m);
  s.compare_share = detail::two_firm_coverage(q, m);
  return s;
}

// Ratio of captive mass to twice the price-comparing mass,
//   eta(q,k) = ((1-q/2)^{k+1} - (1-q)^{k+1}) / (1 + (1-q)^{k+1} - 2(1-q/2)^{k+1}).
// The single parameter of the equilibrium price distribution.  Diverges as
// q -> 0, so q = 0 is rejected rather than mapped to infinity.  For extreme
// q*k the captive mass falls below the double range and the ratio underflows
// to 0; use log_eta where that matters.
inline double eta(double q, std::int64_t k) {
  detail::check_k(k);
  if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("eta: q must lie in (0,1]");
  const double m = static_cast<double>(k) + 1.0;
  const double captive_half = detail::pow1m_half_diff(q, m);
  const double compare = detail::two_firm_coverage(q, m);
  if (compare <= 0.0) throw std::domain_error("eta: comparing share vanished");
  return captive_half / compare;
}

// log(eta(q,k)) evaluated in log space, stable across the full range the
// asymptotic scans visit (eta spans hundreds of orders of magnitude).
inline double log_eta(double q, std::int64_t k) {
  detail::check_k(k);
  if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("log_eta: q must lie in (0,1]");
  const double m = static_cast<double>(k) + 1.0;
  const double log_a = m * std::log1p(-q / 2.0);  // log (1-q/2)^m
  // log of (1-q/2)^m - (1-q)^m
  const double ratio_m1 = -(q / 2.0) / (1.0 - q / 2.0);
  const double log_captive_half = log_a + detail::log1mexp(m * std::log1p(ratio_m1));
  // log of 1 + (1-q)^m - 2(1-q/2)^m via the two-term coverage identity
  const double s = 1.0 - q / 2.0;
  const double log_w2 = 2.0 * detail::log1mexp(log_a);  // log (1-s^m)^2
  const double t_over_s2 = (q * q / 4.0) / (s * s);
  const double log_neg =
      2.0 * log_a + detail::log1mexp(m * std::log1p(-t_over_s2));
  const double log_compare = log_w2 + std::log1p(-std::exp(log_neg - log_w2));
  return log_captive_half - log_compare;
}

}  // namespace womsearch
