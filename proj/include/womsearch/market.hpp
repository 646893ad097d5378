#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace womsearch {

// Primitives of one market instance.  Two firms sell a homogeneous good at
// zero marginal cost; prices are absolute markups.
struct MarketParams {
  double v = 1.0;        // willingness to pay, > 0
  double c = 0.05;       // cost of sampling one firm, > 0
  std::int64_t k = 1;    // number of inbound friend links, >= 1
  double l = 0.0;        // cost of forming the k links, >= 0

  void validate() const {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("MarketParams: v must be positive and finite");
    if (!(c > 0.0) || !std::isfinite(c))
      throw std::invalid_argument("MarketParams: c must be positive and finite");
    if (k < 1) throw std::invalid_argument("MarketParams: k must be >= 1");
    if (!(l >= 0.0) || !std::isfinite(l))
      throw std::invalid_argument("MarketParams: l must be >= 0 and finite");
  }
};

// Mixed strategy over the number of firms sampled (0, 1 or 2).
// Every equilibrium this library computes has q2 == 0, so the strategy is
// summarized by q = q1.
struct SearchStrategy {
  double q0 = 1.0;
  double q1 = 0.0;
  double q2 = 0.0;

  static SearchStrategy from_search_probability(double q) {
    if (!(q >= 0.0 && q <= 1.0))
      throw std::domain_error("SearchStrategy: q must lie in [0,1]");
    return {1.0 - q, q, 0.0};
  }

  void validate() const {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(q0) || !in01(q1) || !in01(q2))
      throw std::invalid_argument("SearchStrategy: probabilities must lie in [0,1]");
    if (std::abs(q0 + q1 + q2 - 1.0) > 1e-12)
      throw std::invalid_argument("SearchStrategy: probabilities must sum to 1");
  }
};

}  // namespace womsearch
