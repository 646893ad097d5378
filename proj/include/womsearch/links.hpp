#pragma once

#include <cmath>
#include <stdexcept>

#include "womsearch/market.hpp"
#include "womsearch/pricing.hpp"
#include "womsearch/shares.hpp"

namespace womsearch {

// Link-formation incentives at a candidate equilibrium q.  A searching
// consumer forms her k links iff
//   (1 - (1-q/2)^k) * (E[p] - E[min]) > l,                  (searchers)
// a non-searching consumer iff
//   (1 - (1-q)^k)(v - E[p])
//     + (1 + (1-q)^k - 2(1-q/2)^k)(E[p] - E[min]) > l.      (non-searchers)
// The first condition is the binding one; l_bar is where it holds with
// equality.
struct LinkDecision {
  bool searcher_forms = false;
  bool nonsearcher_forms = false;
  double l_bar = 0.0;
};

inline LinkDecision link_decision(const MarketParams& params, double q) {
  params.validate();
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("link_decision: q must lie in (0,1)");
  const double kk = static_cast<double>(params.k);
  const double e = eta(q, params.k);
  const double gap = expected_min_gap(e, params.v);
  const double surplus = params.v * detail::surplus_factor(e);  // v - E[p]

  const double searcher_lhs = detail::one_minus_pow1m(q / 2.0, kk) * gap;
  const double nonsearcher_lhs =
      detail::one_minus_pow1m(q, kk) * surplus + detail::two_firm_coverage(q, kk) * gap;

  return {searcher_lhs > params.l, nonsearcher_lhs > params.l, searcher_lhs};
}

}  // namespace womsearch
