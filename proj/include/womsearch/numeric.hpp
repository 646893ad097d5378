#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>

namespace womsearch::detail {

// (1 - x)^n evaluated as exp(n*log1p(-x)).
// Direct pow() loses the tail entirely for n ~ 1e6 with x ~ 1e-9.
inline double pow1m(double x, double n) {
  if (x >= 1.0) return 0.0;
  return std::exp(n * std::log1p(-x));
}

// 1 - (1 - x)^n without cancellation.
inline double one_minus_pow1m(double x, double n) {
  if (x >= 1.0) return 1.0;
  return -std::expm1(n * std::log1p(-x));
}

// (1 - x/2)^n - (1 - x)^n, rewritten as
//   (1-x/2)^n * (1 - ((1-x)/(1-x/2))^n)
// so the two nearly-equal powers are never subtracted directly.
inline double pow1m_half_diff(double x, double n) {
  if (x <= 0.0) return 0.0;
  const double a = pow1m(x / 2.0, n);
  const double ratio_m1 = -(x / 2.0) / (1.0 - x / 2.0);  // (1-x)/(1-x/2) - 1
  return -a * std::expm1(n * std::log1p(ratio_m1));
}

// 1 + (1-x)^n - 2(1-x/2)^n, the probability that a pool of n independent
// samplers (each drawing one of two firms with probability x/2 apiece)
// covers both firms.  Uses the identity
//   1 - 2s^n + (s^2 - t)^n = (1 - s^n)^2 + s^{2n}*((1 - t/s^2)^n - 1)
// with s = 1-x/2, t = x^2/4, which subtracts terms of relative size 1/n
// instead of nearly-equal ones.
inline double two_firm_coverage(double x, double n) {
  if (x <= 0.0) return 0.0;
  const double s = 1.0 - x / 2.0;
  const double w = one_minus_pow1m(x / 2.0, n);  // 1 - s^n
  const double a = pow1m(x / 2.0, n);            // s^n
  const double t_over_s2 = (x * x / 4.0) / (s * s);
  const double r = w * w + a * a * std::expm1(n * std::log1p(-t_over_s2));
  return std::max(0.0, r);
}

// log(1 - exp(x)) for x <= 0.
inline double log1mexp(double x) {
  if (x > -0.6931471805599453) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

// 1 - eta*ln(1 + 1/eta): the buyer surplus share v - E[p] in units of v.
// Direct evaluation cancels for large eta; switch to the series
//   sum_{n>=1} (-1)^{n+1} z^n / (n+1),  z = 1/eta.
inline double surplus_factor(double eta) {
  if (eta < std::numeric_limits<double>::min()) return 1.0;
  const double z = 1.0 / eta;
  if (z > 0.5) return 1.0 - eta * std::log1p(z);
  double term = z, sum = 0.0;
  for (int n = 1; n < 200; ++n) {
    const double contrib = term / (n + 1);
    sum += (n % 2 == 1) ? contrib : -contrib;
    if (contrib < sum * 1e-17) break;
    term *= z;
  }
  return sum;
}

// eta*((1+2*eta)*ln(1 + 1/eta) - 2): the price-comparison gain
// (E[p] - E[min{p1,p2}]) in units of v.  Series for large eta:
//   sum_{m>=3} (-1)^{m+1} (m-2)/(m(m-1)) z^{m-2},  z = 1/eta.
inline double min_gap_factor(double eta) {
  if (eta < std::numeric_limits<double>::min()) return 0.0;
  const double z = 1.0 / eta;
  if (z > 0.5) return eta * ((1.0 + 2.0 * eta) * std::log1p(z) - 2.0);
  double zpow = z, sum = 0.0;
  for (int m = 3; m < 200; ++m) {
    const double contrib = zpow * (m - 2) / (double(m) * (m - 1));
    sum += (m % 2 == 1) ? contrib : -contrib;
    if (contrib < sum * 1e-17) break;
    zpow *= z;
  }
  return sum;
}

// Golden-section maximum refinement on [a, b]; assumes a single interior
// maximum between the endpoints.  Returns the abscissa.
inline double golden_section_max(const std::function<double(double)>& f,
                                 double a, double b, double tol) {
  constexpr double inv_gr = 0.6180339887498949;  // 1/phi
  double c = b - inv_gr * (b - a);
  double d = a + inv_gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace womsearch::detail
