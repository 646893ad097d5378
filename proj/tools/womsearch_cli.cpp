// Command-line front end: equilibrium solving, cost bounds, benefit curves,
// asymptotic scans, link thresholds, best-response dynamics and Monte Carlo
// simulation, with machine-readable CSV/JSON output.
//
// Exit codes: 0 success, 2 invalid input, 3 no interior equilibrium.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "womsearch/womsearch.hpp"

namespace {

using json = nlohmann::ordered_json;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::map<std::string, std::string> values;  // resolved flag -> raw text
  std::set<std::string> from_cmdline;

  bool has(const std::string& key) const { return values.count(key) != 0; }
};

const std::map<std::string, std::set<std::string>> kCommandFlags = {
    {"solve", {"v", "c", "k", "l", "format", "out", "config"}},
    {"figure1", {"v", "c", "k", "format", "out", "config"}},
    {"scan", {"v", "c", "k-max-exp", "format", "out", "config"}},
    {"simulate", {"v", "q", "k", "n", "seed", "reps", "format", "out", "config"}},
    {"dynamics", {"v", "c", "k", "q0", "steps", "gain", "format", "out", "config"}},
};

void usage(std::ostream& os) {
  os << "usage: womsearch <command> [--flag value ...]\n"
        "\n"
        "commands:\n"
        "  solve     --v V --c C --k K [--l L] [--format csv|json]\n"
        "            interior equilibria of the search market with stability,\n"
        "            price statistics and (with --l) link-formation decisions\n"
        "  figure1   [--v V --k K --c C]\n"
        "            1001-point search-benefit curve plus the c_lower/c/c_upper\n"
        "            reference levels (defaults v=1, k=1, c=0.075)\n"
        "  scan      --v V --c C [--k-max-exp J]\n"
        "            stable equilibrium statistics for k = 2^0 .. 2^J\n"
        "  simulate  --q Q --k K [--n N --seed S --reps R --v V]\n"
        "            agent-based Monte Carlo estimates (JSON)\n"
        "  dynamics  --v V --c C --k K --q0 Q0 [--steps T --gain G]\n"
        "            best-response adjustment trajectory of the search share\n"
        "\n"
        "common flags: --out <path> writes the report to a file,\n"
        "              --config <path> reads key=value defaults (flags win),\n"
        "              WOM_SEED overrides the default seed (explicit --seed wins).\n";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Options parse_args(int argc, char** argv) {
  if (argc < 2) throw CliError("missing command");
  Options opt;
  opt.command = argv[1];
  const auto it = kCommandFlags.find(opt.command);
  if (it == kCommandFlags.end()) throw CliError("unknown command '" + opt.command + "'");
  const auto& allowed = it->second;

  for (int i = 2; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0) throw CliError("expected a --flag, got '" + arg + "'");
    arg = arg.substr(2);
    std::string key, val;
    const auto eq = arg.find('=');
    if (eq != std::string::npos) {
      key = arg.substr(0, eq);
      val = arg.substr(eq + 1);
    } else {
      key = arg;
      if (i + 1 >= argc) throw CliError("flag --" + key + " needs a value");
      val = argv[++i];
    }
    if (!allowed.count(key)) throw CliError("unknown flag --" + key + " for '" + opt.command + "'");
    if (opt.from_cmdline.count(key)) throw CliError("duplicate flag --" + key);
    opt.values[key] = val;
    opt.from_cmdline.insert(key);
  }

  // Optional key=value config file; command-line flags take precedence.
  if (opt.has("config")) {
    std::ifstream in(opt.values.at("config"));
    if (!in) throw CliError("cannot open config file '" + opt.values.at("config") + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw CliError("config line " + std::to_string(lineno) + ": expected key=value");
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key == "config" || !allowed.count(key))
        throw CliError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      if (!opt.from_cmdline.count(key)) opt.values[key] = val;
    }
  }

  // Environment seed, below any explicit flag.
  if (allowed.count("seed") && !opt.from_cmdline.count("seed") && !opt.has("seed")) {
    if (const char* env = std::getenv("WOM_SEED")) opt.values["seed"] = env;
  }
  return opt;
}

double get_double(const Options& o, const std::string& key) {
  const std::string& s = o.values.at(key);
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw CliError("--" + key + ": '" + s + "' is not a number");
  }
  if (pos != s.size()) throw CliError("--" + key + ": '" + s + "' is not a number");
  return x;
}

double get_double(const Options& o, const std::string& key, double dflt) {
  return o.has(key) ? get_double(o, key) : dflt;
}

std::int64_t get_int(const Options& o, const std::string& key) {
  const std::string& s = o.values.at(key);
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw CliError("--" + key + ": '" + s + "' is not an integer");
  }
  if (pos != s.size()) throw CliError("--" + key + ": '" + s + "' is not an integer");
  return x;
}

std::int64_t get_int(const Options& o, const std::string& key, std::int64_t dflt) {
  return o.has(key) ? get_int(o, key) : dflt;
}

std::uint64_t get_seed(const Options& o, std::uint64_t dflt) {
  if (!o.has("seed")) return dflt;
  const std::string& s = o.values.at("seed");
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw CliError("--seed: '" + s + "' is not an unsigned integer");
  }
  if (pos != s.size()) throw CliError("--seed: '" + s + "' is not an unsigned integer");
  return x;
}

void require_flags(const Options& o, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!o.has(k)) throw CliError(o.command + ": missing required flag --" + std::string(k));
}

std::string get_format(const Options& o, const std::string& dflt,
                       const std::set<std::string>& supported) {
  const std::string f = o.has("format") ? o.values.at("format") : dflt;
  if (!supported.count(f))
    throw CliError(o.command + ": unsupported --format '" + f + "'");
  return f;
}

// Fixed-width significant-digit formatting for CSV cells.
std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void emit(const Options& o, const std::string& text) {
  if (o.has("out")) {
    std::ofstream out(o.values.at("out"), std::ios::binary);
    if (!out) throw CliError("cannot open output file '" + o.values.at("out") + "'");
    out << text;
    if (!out) throw CliError("failed writing '" + o.values.at("out") + "'");
  } else {
    std::cout << text;
  }
}

// ---------------------------------------------------------------------------

int cmd_solve(const Options& o) {
  require_flags(o, {"v", "c", "k"});
  const std::string format = get_format(o, "csv", {"csv", "json"});
  womsearch::MarketParams params;
  params.v = get_double(o, "v");
  params.c = get_double(o, "c");
  params.k = get_int(o, "k");
  const bool has_l = o.has("l");
  params.l = get_double(o, "l", 0.0);
  params.validate();

  const auto sol = womsearch::solve_search_equilibrium(params);
  if (sol.status == womsearch::SolveStatus::NoInteriorEquilibrium) {
    std::cerr << "no interior equilibrium: c=" << num(params.c)
              << " exceeds c_upper(k=" << params.k << ")=" << num(sol.bounds.c_upper) << "\n";
    return 3;
  }

  struct LinkCells {
    std::string forms, nforms, lbar;
  };
  auto link_cells = [&](const womsearch::EquilibriumRoot& r) -> LinkCells {
    if (!has_l) return {"", "", ""};
    const auto d = womsearch::link_decision(params, std::min(r.q, 1.0 - 1e-15));
    return {d.searcher_forms ? "true" : "false", d.nonsearcher_forms ? "true" : "false",
            num(d.l_bar)};
  };

  if (format == "csv") {
    std::ostringstream os;
    os << "v,c,k,l,c_lower,c_upper,q_at_peak,root_index,q,stability,eta,expected_price,"
          "expected_min_price,support_low,support_high,firm_profit,searcher_forms,"
          "nonsearcher_forms,l_bar\n";
    for (std::size_t i = 0; i < sol.roots.size(); ++i) {
      const auto& r = sol.roots[i];
      const auto lc = link_cells(r);
      os << num(params.v) << ',' << num(params.c) << ',' << params.k << ','
         << (has_l ? num(params.l) : "") << ',' << num(sol.bounds.c_lower) << ','
         << num(sol.bounds.c_upper) << ',' << num(sol.bounds.q_at_peak) << ',' << i << ','
         << num(r.q) << ',' << womsearch::to_string(r.stability) << ',' << num(r.eta) << ','
         << num(r.expected_price) << ',' << num(r.expected_min_price) << ',' << num(r.support_low)
         << ',' << num(params.v) << ',' << num(r.firm_profit) << ',' << lc.forms << ','
         << lc.nforms << ',' << lc.lbar << '\n';
    }
    emit(o, os.str());
  } else {
    json j;
    j["params"] = {{"v", params.v}, {"c", params.c}, {"k", params.k}};
    if (has_l) j["params"]["l"] = params.l;
    j["c_lower"] = sol.bounds.c_lower;
    j["c_upper"] = sol.bounds.c_upper;
    j["q_at_peak"] = sol.bounds.q_at_peak;
    j["note"] = womsearch::SolveResult::boundary_note;
    j["roots"] = json::array();
    for (const auto& r : sol.roots) {
      json jr = {{"q", r.q},
                 {"stability", womsearch::to_string(r.stability)},
                 {"eta", r.eta},
                 {"expected_price", r.expected_price},
                 {"expected_min_price", r.expected_min_price},
                 {"support_low", r.support_low},
                 {"support_high", params.v},
                 {"firm_profit", r.firm_profit}};
      if (has_l) {
        const auto d = womsearch::link_decision(params, std::min(r.q, 1.0 - 1e-15));
        jr["link"] = {{"searcher_forms", d.searcher_forms},
                      {"nonsearcher_forms", d.nonsearcher_forms},
                      {"l_bar", d.l_bar}};
      }
      j["roots"].push_back(jr);
    }
    emit(o, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_figure1(const Options& o) {
  get_format(o, "csv", {"csv"});
  const double v = get_double(o, "v", 1.0);
  const std::int64_t k = get_int(o, "k", 1);
  const double c1 = get_double(o, "c", 0.075);
  if (!(v > 0.0) || k < 1) throw CliError("figure1: need v > 0 and k >= 1");

  const auto bounds = womsearch::cost_bounds(v, k);
  std::ostringstream os;
  os << "q,benefit,c_lower,c1,c_upper\n";
  constexpr int points = 1001;
  constexpr double q_lo = 1e-3;
  for (int i = 0; i < points; ++i) {
    const double q = q_lo + (1.0 - q_lo) * static_cast<double>(i) / (points - 1);
    os << num(q) << ',' << num(womsearch::search_benefit(q, k, v)) << ','
       << num(bounds.c_lower) << ',' << num(c1) << ',' << num(bounds.c_upper) << '\n';
  }
  emit(o, os.str());
  return 0;
}

int cmd_scan(const Options& o) {
  require_flags(o, {"v", "c"});
  get_format(o, "csv", {"csv"});
  const double v = get_double(o, "v");
  const double c = get_double(o, "c");
  const std::int64_t max_exp = get_int(o, "k-max-exp", 16);
  if (max_exp < 0 || max_exp > 62) throw CliError("scan: --k-max-exp must lie in [0,62]");

  const auto rows = womsearch::asymptotic_scan(v, c, womsearch::power_of_two_schedule(
                                                         static_cast<int>(max_exp)));
  std::ostringstream os;
  os << "v,c,k,status,q_star,eta,expected_price,c_lower,l_bar,firm_profit\n";
  for (const auto& row : rows) {
    os << num(v) << ',' << num(c) << ',' << row.k << ',' << womsearch::to_string(row.status);
    if (row.stable) {
      os << ',' << num(row.stable->q_star) << ',' << num(row.stable->eta) << ','
         << num(row.stable->expected_price) << ',' << num(row.c_lower) << ','
         << num(row.stable->l_bar) << ',' << num(row.stable->firm_profit) << '\n';
    } else {
      os << ",,,," << num(row.c_lower) << ",,\n";
    }
  }
  emit(o, os.str());
  return 0;
}

int cmd_simulate(const Options& o) {
  require_flags(o, {"q", "k"});
  get_format(o, "json", {"json"});
  womsearch::SimConfig cfg;
  cfg.q = get_double(o, "q");
  cfg.k = get_int(o, "k");
  cfg.n_consumers = get_int(o, "n", 100000);
  cfg.v = get_double(o, "v", 1.0);
  cfg.master_seed = get_seed(o, 0);
  cfg.replications = get_int(o, "reps", 64);
  cfg.validate();

  const auto res = womsearch::simulate_market(cfg);

  auto est = [](const womsearch::Estimate& e) {
    return json{{"mean", e.mean}, {"std_error", e.std_error}};
  };
  json j;
  j["params"] = {{"q", cfg.q},         {"k", cfg.k},
                 {"n", cfg.n_consumers}, {"v", cfg.v},
                 {"seed", cfg.master_seed}, {"reps", cfg.replications}};
  if (cfg.q > 0.0) j["params"]["eta"] = cfg.effective_eta();
  j["shares"] = {{"none", est(res.share_none)},
                 {"captive", est(res.share_captive)},
                 {"compare", est(res.share_compare)}};
  j["firm_profits"] = json::array({est(res.firm_profits[0]), est(res.firm_profits[1])});
  j["search_benefit"] = est(res.search_benefit_estimate);
  j["second_search_benefit"] = est(res.second_search_benefit_estimate);
  j["mean_transaction_price"] = res.mean_transaction_price;
  emit(o, j.dump(2) + "\n");
  return 0;
}

int cmd_dynamics(const Options& o) {
  require_flags(o, {"v", "c", "k", "q0"});
  get_format(o, "csv", {"csv"});
  const double v = get_double(o, "v");
  const double c = get_double(o, "c");
  const std::int64_t k = get_int(o, "k");
  const double q0 = get_double(o, "q0");
  const std::int64_t steps = get_int(o, "steps", 100000);
  const double gain = get_double(o, "gain", 0.1);
  if (steps < 1) throw CliError("dynamics: --steps must be >= 1");

  const auto res = womsearch::best_response_dynamics(v, c, k, q0,
                                                     static_cast<std::size_t>(steps), gain);
  const char* status = res.converged ? "converged" : "not_converged";
  std::ostringstream os;
  os << "v,c,k,q0,gain,status,step,q\n";
  for (std::size_t t = 0; t < res.trajectory.size(); ++t) {
    os << num(v) << ',' << num(c) << ',' << k << ',' << num(q0) << ',' << num(gain) << ','
       << status << ',' << t << ',' << num(res.trajectory[t]) << '\n';
  }
  emit(o, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    if (argc >= 2 && (std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h")) {
      usage(std::cout);
      return 0;
    }
    const Options opt = parse_args(argc, argv);
    if (opt.command == "solve") return cmd_solve(opt);
    if (opt.command == "figure1") return cmd_figure1(opt);
    if (opt.command == "scan") return cmd_scan(opt);
    if (opt.command == "simulate") return cmd_simulate(opt);
    if (opt.command == "dynamics") return cmd_dynamics(opt);
    usage(std::cerr);
    return 2;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
