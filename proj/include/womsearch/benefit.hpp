#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "womsearch/numeric.hpp"
#include "womsearch/shares.hpp"

namespace womsearch {

namespace detail {

inline void check_search_q(double q) {
  if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("q must lie in (0,1]");
}

// Benefit of the first search in units of v, at v = 1.
inline double search_benefit_unit(double q, std::int64_t k) {
  const double kk = static_cast<double>(k);
  const double m = kk + 1.0;
  const double captive_half = pow1m_half_diff(q, m);
  const double compare = two_firm_coverage(q, m);
  const double e = compare > 0.0 ? captive_half / compare : 0.0;
  const double friends_silent = pow1m(q, kk);          // (1-q)^k
  const double friends_one_firm = pow1m_half_diff(q, kk);
  return friends_silent * surplus_factor(e) + friends_one_firm * min_gap_factor(e);
}

}  // namespace detail

// Expected incremental benefit of sampling one firm for a consumer with k
// friends, given population search intensity q:
//   (1-q)^k (v - E[p]) + ((1-q/2)^k - (1-q)^k)(E[p] - E[min{p1,p2}]).
// Equating this to c is the interior-equilibrium condition.
inline double search_benefit(double q, std::int64_t k, double v) {
  detail::check_k(k);
  detail::check_search_q(q);
  if (!(v > 0.0)) throw std::domain_error("search_benefit: v must be positive");
  return v * detail::search_benefit_unit(q, k);
}

// Incremental benefit of sampling the second firm for a consumer who already
// samples one: (1-q/2)^k (E[p] - E[min{p1,p2}]).  Strictly below
// search_benefit for q in (0,1), which is what keeps q2 = 0 in equilibrium.
inline double second_search_benefit(double q, std::int64_t k, double v) {
  detail::check_k(k);
  detail::check_search_q(q);
  if (!(v > 0.0)) throw std::domain_error("second_search_benefit: v must be positive");
  const double e = eta(q, k);
  return v * detail::pow1m(q / 2.0, static_cast<double>(k)) * detail::min_gap_factor(e);
}

}  // namespace womsearch
