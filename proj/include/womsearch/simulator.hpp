#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_set>
#include <vector>

#include "womsearch/pricing.hpp"
#include "womsearch/shares.hpp"

namespace womsearch {

// One Monte Carlo experiment: a finite consumer population with directed
// k-friend sampling, probabilistic search, WOM diffusion of observed quotes,
// and firm prices drawn from the equilibrium distribution.
struct SimConfig {
  std::int64_t n_consumers = 100000;
  std::int64_t k = 1;
  double q = 0.5;
  std::optional<double> eta_override;  // price draws use this eta instead of eta(q,k)
  double v = 1.0;
  std::uint64_t master_seed = 0;
  std::int64_t replications = 1;
  std::optional<double> deviation_price;  // firm 0 posts this instead of drawing

  void validate() const {
    if (n_consumers < 1000) throw std::invalid_argument("SimConfig: n_consumers must be >= 1000");
    if (k < 1 || k >= n_consumers)
      throw std::invalid_argument("SimConfig: need 1 <= k < n_consumers");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("SimConfig: q must lie in [0,1]");
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("SimConfig: v must be positive");
    if (replications < 1) throw std::invalid_argument("SimConfig: replications must be >= 1");
    if (eta_override && (!(*eta_override > 0.0) || !std::isfinite(*eta_override)))
      throw std::invalid_argument("SimConfig: eta_override must be positive and finite");
    if (q == 0.0 && deviation_price)
      throw std::invalid_argument("SimConfig: deviation_price requires q > 0");
  }

  // eta used for price draws; requires q > 0 or an override.
  double effective_eta() const {
    return eta_override ? *eta_override : eta(q, k);
  }
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct SimResult {
  Estimate share_none;
  Estimate share_captive;
  Estimate share_compare;
  std::array<Estimate, 2> firm_profits;        // average revenue per consumer
  Estimate search_benefit_estimate;            // 0 -> 1 searches, paired runs
  Estimate second_search_benefit_estimate;     // 1 -> 2 searches, paired runs
  double mean_transaction_price = 0.0;         // 0 when nothing is traded
};

enum class SearchOrder { First, Second };

struct DeviationProfit {
  double price = 0.0;
  Estimate profit;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent stream seed for a replication, derived from the master seed.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0xA5A5A5A55A5A5A5Aull + stream * 0x9E3779B97F4A7C15ull);
  splitmix64(s);
  return splitmix64(s);
}

inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n): reject draws below 2^64 mod n so the kept
// range is an exact multiple of n.
inline std::uint64_t bounded(std::mt19937_64& g, std::uint64_t n) {
  const std::uint64_t cutoff = (0ull - n) % n;
  std::uint64_t r = g();
  while (r < cutoff) r = g();
  return r % n;
}

// k distinct friends of consumer self, uniform over the other n-1 consumers.
inline void sample_friends(std::mt19937_64& g, std::int64_t n, std::int64_t self,
                           std::int64_t k, std::vector<std::int64_t>& out) {
  out.clear();
  if (k <= 64) {
    while (static_cast<std::int64_t>(out.size()) < k) {
      const auto j = static_cast<std::int64_t>(bounded(g, static_cast<std::uint64_t>(n)));
      if (j == self) continue;
      if (std::find(out.begin(), out.end(), j) != out.end()) continue;
      out.push_back(j);
    }
    return;
  }
  // Floyd's algorithm over [0, n-1) with the self index mapped out.
  std::unordered_set<std::int64_t> seen;
  seen.reserve(static_cast<std::size_t>(k) * 2);
  const std::int64_t m = n - 1;
  for (std::int64_t t = m - k; t < m; ++t) {
    auto r = static_cast<std::int64_t>(bounded(g, static_cast<std::uint64_t>(t + 1)));
    if (!seen.insert(r).second) {
      seen.insert(t);
      out.push_back(t < self ? t : t + 1);
    } else {
      out.push_back(r < self ? r : r + 1);
    }
  }
}

struct RepStats {
  double share_none = 0.0;
  double share_captive = 0.0;
  double share_compare = 0.0;
  double profit0 = 0.0;
  double profit1 = 0.0;
  double benefit1 = 0.0;
  double benefit2 = 0.0;
  double mean_price = 0.0;
};

inline RepStats run_replication(const SimConfig& cfg, std::uint64_t rep,
                                std::vector<std::int8_t>& searched_firm,
                                std::vector<std::int8_t>& coin_firm) {
  const std::int64_t n = cfg.n_consumers;
  std::mt19937_64 rng(stream_seed(cfg.master_seed, rep));

  // 1. posted prices
  std::array<double, 2> price{cfg.v, cfg.v};
  const double u0 = uniform01(rng);
  const double u1 = uniform01(rng);
  if (cfg.q > 0.0) {
    const PriceDistribution dist = make_price_distribution(cfg.effective_eta(), cfg.v);
    price[0] = price_quantile(u0, dist);
    price[1] = price_quantile(u1, dist);
  }
  if (cfg.deviation_price) price[0] = *cfg.deviation_price;

  // 2. search outcomes; the firm draw is made for everyone so the paired
  //    benefit scenarios below can reuse it.
  searched_firm.assign(static_cast<std::size_t>(n), -1);
  coin_firm.assign(static_cast<std::size_t>(n), 0);
  for (std::int64_t i = 0; i < n; ++i) {
    const bool searches = uniform01(rng) < cfg.q;
    const auto firm = static_cast<std::int8_t>(rng() & 1u);
    coin_firm[static_cast<std::size_t>(i)] = firm;
    if (searches) searched_firm[static_cast<std::size_t>(i)] = firm;
  }

  // 3.-5. diffusion, purchases, and paired search-benefit scenarios
  std::int64_t count_none = 0, count_captive = 0, count_compare = 0;
  std::array<double, 2> revenue{0.0, 0.0};
  double price_sum = 0.0;
  double benefit1_sum = 0.0, benefit2_sum = 0.0;
  std::vector<std::int64_t> friends;
  friends.reserve(static_cast<std::size_t>(std::min<std::int64_t>(cfg.k, 1 << 16)));

  const double surplus_both = cfg.v - std::min(price[0], price[1]);
  for (std::int64_t i = 0; i < n; ++i) {
    sample_friends(rng, n, i, cfg.k, friends);
    bool friend_saw0 = false, friend_saw1 = false;
    for (const std::int64_t j : friends) {
      const std::int8_t f = searched_firm[static_cast<std::size_t>(j)];
      if (f == 0) friend_saw0 = true;
      else if (f == 1) friend_saw1 = true;
    }
    const std::int8_t own = searched_firm[static_cast<std::size_t>(i)];
    const bool saw0 = friend_saw0 || own == 0;
    const bool saw1 = friend_saw1 || own == 1;

    if (!saw0 && !saw1) {
      ++count_none;
    } else if (saw0 && saw1) {
      ++count_compare;
      int buys_from = price[0] < price[1] ? 0 : 1;
      if (price[0] == price[1]) buys_from = static_cast<int>(rng() & 1u);
      revenue[static_cast<std::size_t>(buys_from)] += price[static_cast<std::size_t>(buys_from)];
      price_sum += price[static_cast<std::size_t>(buys_from)];
    } else {
      ++count_captive;
      const int only = saw0 ? 0 : 1;
      revenue[static_cast<std::size_t>(only)] += price[static_cast<std::size_t>(only)];
      price_sum += price[static_cast<std::size_t>(only)];
    }

    // Common-random-numbers scenarios for consumer i:
    //   B: no own search (friends only), A: one search at coin_firm[i],
    //   C: both firms sampled.
    double friend_min = std::numeric_limits<double>::infinity();
    if (friend_saw0) friend_min = price[0];
    if (friend_saw1) friend_min = std::min(friend_min, price[1]);
    const double surplus_none = (friend_saw0 || friend_saw1) ? cfg.v - friend_min : 0.0;
    const double own_price = price[static_cast<std::size_t>(coin_firm[static_cast<std::size_t>(i)])];
    const double surplus_one = cfg.v - std::min(friend_min, own_price);
    benefit1_sum += surplus_one - surplus_none;
    benefit2_sum += surplus_both - surplus_one;
  }

  const auto nd = static_cast<double>(n);
  RepStats s;
  s.share_none = static_cast<double>(count_none) / nd;
  s.share_captive = static_cast<double>(count_captive) / nd;
  s.share_compare = static_cast<double>(count_compare) / nd;
  s.profit0 = revenue[0] / nd;
  s.profit1 = revenue[1] / nd;
  s.benefit1 = benefit1_sum / nd;
  s.benefit2 = benefit2_sum / nd;
  const std::int64_t buyers = n - count_none;
  s.mean_price = buyers > 0 ? price_sum / static_cast<double>(buyers) : 0.0;
  return s;
}

inline Estimate across_reps(const std::vector<double>& xs) {
  const auto r = static_cast<double>(xs.size());
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= r;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (r - 1.0) / r)};
}

}  // namespace detail

// Run the full experiment.  Replications execute on thread_count threads
// (0 = hardware default) with independent derived RNG streams; results are
// aggregated in replication order, so the output is bit-identical for a
// given config no matter the parallelism.
inline SimResult simulate_market(const SimConfig& cfg, unsigned thread_count = 0) {
  cfg.validate();
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<detail::RepStats> stats(reps);

  unsigned hw = thread_count ? thread_count : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(reps, hw));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    std::vector<std::int8_t> searched, coin;
    for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1))
      stats[r] = detail::run_replication(cfg, r, searched, coin);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  auto column = [&](auto proj) {
    std::vector<double> xs(reps);
    for (std::size_t r = 0; r < reps; ++r) xs[r] = proj(stats[r]);
    return detail::across_reps(xs);
  };

  SimResult out;
  out.share_none = column([](const auto& s) { return s.share_none; });
  out.share_captive = column([](const auto& s) { return s.share_captive; });
  out.share_compare = column([](const auto& s) { return s.share_compare; });
  out.firm_profits[0] = column([](const auto& s) { return s.profit0; });
  out.firm_profits[1] = column([](const auto& s) { return s.profit1; });
  out.search_benefit_estimate = column([](const auto& s) { return s.benefit1; });
  out.second_search_benefit_estimate = column([](const auto& s) { return s.benefit2; });
  out.mean_transaction_price = column([](const auto& s) { return s.mean_price; }).mean;
  return out;
}

// Paired-run estimate of the incremental benefit of the first (0 -> 1) or
// second (1 -> 2) price search, gross of the search cost.
inline Estimate estimate_search_benefit(const SimConfig& cfg, SearchOrder order = SearchOrder::First,
                                        unsigned thread_count = 0) {
  if (!(cfg.q > 0.0 && cfg.q < 1.0))
    throw std::domain_error("estimate_search_benefit: q must lie in (0,1)");
  const SimResult r = simulate_market(cfg, thread_count);
  return order == SearchOrder::First ? r.search_benefit_estimate
                                     : r.second_search_benefit_estimate;
}

// Profit of a firm posting each fixed price on the grid while the rival
// mixes.  Under the equilibrium price distribution the profits are flat
// across the support.
inline std::vector<DeviationProfit> verify_equal_profit(const SimConfig& cfg,
                                                        const std::vector<double>& price_grid,
                                                        unsigned thread_count = 0) {
  cfg.validate();
  if (!(cfg.q > 0.0)) throw std::domain_error("verify_equal_profit: q must be positive");
  const PriceDistribution dist = make_price_distribution(cfg.effective_eta(), cfg.v);
  for (const double p : price_grid) {
    if (!(p >= dist.p_low && p <= dist.p_high))
      throw std::domain_error("verify_equal_profit: grid price outside the support");
  }
  std::vector<DeviationProfit> table;
  table.reserve(price_grid.size());
  for (const double p : price_grid) {
    SimConfig dev = cfg;
    dev.deviation_price = p;
    table.push_back({p, simulate_market(dev, thread_count).firm_profits[0]});
  }
  return table;
}

}  // namespace womsearch
