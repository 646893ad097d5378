#pragma once

#include <cmath>
#include <cstdint>

// Exact information shares for a pool of m independent samplers, each of whom
// draws firm 0 or firm 1 with probability q/2 apiece and nothing otherwise.
// Brute-force sum over (count searching firm 0, count searching firm 1) with
// multinomial weights -- the independent oracle for the library's
// cancellation-free share formulas.
namespace testutil {

struct PoolShares {
  double none = 0.0;
  double one_firm = 0.0;
  double both_firms = 0.0;
};

inline PoolShares enumerate_pool_shares(double q, int m) {
  // binomial table (exact in double for the small m used in tests)
  double choose[64][64] = {};
  for (int i = 0; i <= m + 1; ++i) {
    choose[i][0] = 1.0;
    for (int j = 1; j <= i; ++j)
      choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0.0);
  }
  PoolShares s;
  for (int n0 = 0; n0 <= m; ++n0) {
    for (int n1 = 0; n1 + n0 <= m; ++n1) {
      const int rest = m - n0 - n1;
      const double prob = choose[m][n0] * choose[m - n0][n1] * std::pow(q / 2.0, n0 + n1) *
                          std::pow(1.0 - q, rest);
      if (n0 == 0 && n1 == 0)
        s.none += prob;
      else if (n0 > 0 && n1 > 0)
        s.both_firms += prob;
      else
        s.one_firm += prob;
    }
  }
  return s;
}

}  // namespace testutil
