#include "boxspin/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "boxspin/bell.hpp"
#include "boxspin/bits.hpp"
#include "boxspin/correlators.hpp"
#include "boxspin/errors.hpp"
#include "boxspin/gaussian_state.hpp"
#include "boxspin/verify/acceptance.hpp"

namespace boxspin::cli {

using nlohmann::json;

void SweepConfig::validate() const {
  if (r_list.empty()) throw Error(ErrorKind::RangeError, "r list is empty");
  for (double r : r_list) {
    if (!(r >= 0.0 && r <= kMaxSqueezing)) {
      throw Error(ErrorKind::RangeError, "r must lie in [0, " + std::to_string(kMaxSqueezing) + "]");
    }
  }
  if (!(l_min > 0.0 && l_min < l_max && std::isfinite(l_max))) {
    throw Error(ErrorKind::RangeError, "need 0 < l_min < l_max");
  }
  if (points < 2) throw Error(ErrorKind::RangeError, "points must be at least 2");
  if (!(tol > 0.0)) throw Error(ErrorKind::RangeError, "tol must be positive");
}

std::vector<double> SweepConfig::l_values() const {
  const double a = std::log2(l_min);
  const double b = std::log2(l_max);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out.push_back(i == points - 1 ? l_max : std::exp2(a + (b - a) * i / (points - 1)));
  }
  out.front() = l_min;
  return out;
}

void to_json(json& j, const SweepConfig& c) {
  j = json{{"r_list", c.r_list}, {"l_min", c.l_min},   {"l_max", c.l_max},
           {"points", c.points}, {"tol", c.tol},       {"seed", c.seed},
           {"format", c.format == OutputFormat::Csv ? "csv" : "json"}, {"out", c.out}};
}

void from_json(const json& j, SweepConfig& c) {
  if (!j.is_object()) throw Error(ErrorKind::RangeError, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "r_list") {
      c.r_list = value.get<std::vector<double>>();
    } else if (key == "l_min") {
      c.l_min = value.get<double>();
    } else if (key == "l_max") {
      c.l_max = value.get<double>();
    } else if (key == "points") {
      c.points = value.get<int>();
    } else if (key == "tol") {
      c.tol = value.get<double>();
    } else if (key == "seed") {
      c.seed = value.get<std::uint64_t>();
    } else if (key == "format") {
      const auto f = value.get<std::string>();
      if (f != "csv" && f != "json") throw Error(ErrorKind::RangeError, "format must be csv or json");
      c.format = f == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    } else if (key == "out") {
      c.out = value.get<std::string>();
    } else {
      throw Error(ErrorKind::RangeError, "unknown config key '" + key + "'");
    }
  }
}

SweepConfig parse_config(const std::string& text) {
  const json j = json::parse(text);
  SweepConfig c;
  if (j.is_object() && j.contains("config")) {
    from_json(j.at("config"), c);
  } else {
    from_json(j, c);
  }
  return c;
}

unsigned resolve_jobs(unsigned requested) {
  if (const char* env = std::getenv("BOXSPIN_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr const char* kUnits =
    "Positions q and box lengths l are dimensionless, measured in the natural units of the "
    "two-mode wavefunction (vacuum position variance 1/2).";

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// Evaluates `task(i)` for i in [0, n) on up to `jobs` threads; results land
/// in index order.
template <typename T>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& task) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::vector<CorrelatorSet> sweep_sets(const SweepConfig& cfg, unsigned jobs) {
  const auto ls = cfg.l_values();
  QuadratureSpec spec;
  spec.abs_tol = cfg.tol;
  CorrelatorCache cache;
  const std::size_t n = cfg.r_list.size() * ls.size();
  return parallel_map<CorrelatorSet>(n, jobs, [&](std::size_t i) {
    return correlator_set(ls[i % ls.size()], cfg.r_list[i / ls.size()], spec, &cache);
  });
}

json set_json(const CorrelatorSet& s) {
  return json{{"r", s.r},
              {"l", s.l},
              {"czz", s.czz},
              {"cxx", s.cxx},
              {"cyy", s.cyy},
              {"czx", s.czx},
              {"cxz", s.cxz},
              {"errors",
               {{"czz", s.errs.czz},
                {"cxx", s.errs.cxx},
                {"cyy", s.errs.cyy},
                {"czx", s.errs.czx},
                {"cxz", s.errs.cxz}}}};
}

json settings_json(const ChshSettings& s) {
  return json{{"alpha", s.alpha}, {"beta", s.beta}, {"gamma", s.gamma}, {"delta", s.delta}};
}

/// Writes to cfg.out, or `out` when it is empty or "-".
void emit(const SweepConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw Error(ErrorKind::RangeError, "cannot open output file '" + cfg.out + "'");
  file << text;
}

std::string fig1_report(const SweepConfig& cfg, const std::vector<CorrelatorSet>& sets) {
  if (cfg.format == OutputFormat::Json) {
    json rows = json::array();
    for (const auto& s : sets) rows.push_back(set_json(s));
    return json{{"config", cfg}, {"rows", rows}}.dump(2) + "\n";
  }
  std::string text = "r,l,log2_l,czz,cxx,cyy,czz_err,cxx_err,cyy_err\n";
  for (const auto& s : sets) {
    text += num(s.r) + "," + num(s.l) + "," + num(std::log2(s.l)) + "," + num(s.czz) + "," +
            num(s.cxx) + "," + num(s.cyy) + "," + num(s.errs.czz) + "," + num(s.errs.cxx) + "," +
            num(s.errs.cyy) + "\n";
  }
  return text;
}

std::string fig2_report(const SweepConfig& cfg, const std::vector<CorrelatorSet>& sets) {
  json rows = json::array();
  std::string text = "r,l,chsh_standard,violated\n";
  for (const auto& s : sets) {
    const BellReport b = chsh_value(s, ChshSettings::standard());
    rows.push_back(json{{"r", s.r}, {"l", s.l}, {"chsh_standard", b.value}, {"violated", b.violated}});
    text += num(s.r) + "," + num(s.l) + "," + num(b.value) + "," + (b.violated ? "1" : "0") + "\n";
  }
  if (cfg.format == OutputFormat::Json) return json{{"config", cfg}, {"rows", rows}}.dump(2) + "\n";
  return text;
}

struct SweepOptions {
  SweepConfig cfg;
  std::string config_path;
  std::string format = "csv";
  unsigned jobs = 0;
  CLI::Option* r_list = nullptr;
  CLI::Option* l_min = nullptr;
  CLI::Option* l_max = nullptr;
  CLI::Option* points = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* out = nullptr;
};

void add_sweep_options(CLI::App* cmd, SweepOptions& o) {
  o.r_list = cmd->add_option("--r-list", o.cfg.r_list, "Squeezing values (comma separated)")
                 ->delimiter(',');
  o.l_min = cmd->add_option("--l-min", o.cfg.l_min, "Smallest box length");
  o.l_max = cmd->add_option("--l-max", o.cfg.l_max, "Largest box length");
  o.points = cmd->add_option("--points", o.cfg.points, "Number of log2-spaced box lengths");
  o.tol = cmd->add_option("--tol", o.cfg.tol, "Absolute quadrature tolerance");
  o.seed = cmd->add_option("--seed", o.cfg.seed, "Seed recorded with the run");
  o.format_opt = cmd->add_option("--format", o.format, "Output format")
                     ->check(CLI::IsMember({"csv", "json"}));
  o.out = cmd->add_option("--out", o.cfg.out, "Output path (default standard output)");
  cmd->add_option("--config", o.config_path,
                  "JSON config file; explicit flags override its values");
  cmd->add_option("--jobs", o.jobs, "Worker threads (BOXSPIN_JOBS overrides)");
}

/// Config file values first, then every flag given on the command line.
SweepConfig resolve_sweep(const SweepOptions& o) {
  SweepConfig flags = o.cfg;
  flags.format = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (o.config_path.empty()) {
    flags.validate();
    return flags;
  }
  std::ifstream in(o.config_path);
  if (!in) throw Error(ErrorKind::RangeError, "cannot read config '" + o.config_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  SweepConfig cfg = parse_config(buf.str());
  if (o.r_list->count()) cfg.r_list = flags.r_list;
  if (o.l_min->count()) cfg.l_min = flags.l_min;
  if (o.l_max->count()) cfg.l_max = flags.l_max;
  if (o.points->count()) cfg.points = flags.points;
  if (o.tol->count()) cfg.tol = flags.tol;
  if (o.seed->count()) cfg.seed = flags.seed;
  if (o.format_opt->count()) cfg.format = flags.format;
  if (o.out->count()) cfg.out = flags.out;
  cfg.validate();
  return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{std::string("Box-spin correlators and Bell tests for the two-mode squeezed state.\n") +
                   kUnits,
               "boxspin"};
  app.require_subcommand(1);
  app.footer(kUnits);

  SweepOptions fig1_opts;
  auto* fig1 = app.add_subcommand("fig1", "Sweep of czz, cxx, cyy over (r, l) as CSV or JSON");
  add_sweep_options(fig1, fig1_opts);

  SweepOptions fig2_opts;
  auto* fig2 = app.add_subcommand("fig2", "Sweep of the standard-settings CHSH value over (r, l)");
  add_sweep_options(fig2, fig2_opts);

  double r = 2.0;
  double l = 1.0;
  double tol = 1e-7;
  auto* corr = app.add_subcommand("correlators", "All five correlators at one (r, l) as JSON");
  corr->add_option("--r", r, "Squeezing")->required();
  corr->add_option("--l", l, "Box length")->required();
  corr->add_option("--tol", tol, "Absolute quadrature tolerance");

  TruncationWindow window;
  auto* bits_cmd = app.add_subcommand("bell-bits", "Per-bit Bell values and the weighted total");
  bits_cmd->add_option("--r", r, "Squeezing")->required();
  bits_cmd->add_option("--k-hi", window.k_hi, "Highest bit position");
  bits_cmd->add_option("--k-lo", window.k_lo, "Lowest bit position");
  bits_cmd->add_option("--tol", tol, "Absolute quadrature tolerance");

  bool include_y = false;
  auto* opt = app.add_subcommand("optimize", "Best measurement angles against standard settings");
  opt->add_option("--r", r, "Squeezing")->required();
  opt->add_option("--l", l, "Box length")->required();
  opt->add_option("--tol", tol, "Absolute quadrature tolerance");
  opt->add_flag("--include-y", include_y, "Also optimize over directions out of the x-z plane");

  auto* lhv = app.add_subcommand("lhv", "Local hidden-variable bounds by enumeration");
  lhv->add_option("--k-hi", window.k_hi, "Highest bit position");
  lhv->add_option("--k-lo", window.k_lo, "Lowest bit position");

  double q = 0.0;
  TruncationWindow demo_window{0, -7};
  auto* demo = app.add_subcommand("bits-demo", "Binary expansion of a position result");
  demo->add_option("--q", q, "Position result")->required();
  auto* demo_hi = demo->add_option("--k-hi", demo_window.k_hi,
                                   "Highest bit position (default: leading bit of |q|, at least 0)");
  demo->add_option("--k-lo", demo_window.k_lo, "Lowest bit position");

  int only = 0;
  auto* self = app.add_subcommand("selftest", "Run the acceptance battery");
  self->add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, 12));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return 0;
    err << "\n" << app.help();
    return 2;
  }

  try {
    if (*fig1 || *fig2) {
      const bool is_fig1 = static_cast<bool>(*fig1);
      const SweepOptions& o = is_fig1 ? fig1_opts : fig2_opts;
      const SweepConfig cfg = resolve_sweep(o);
      const auto sets = sweep_sets(cfg, resolve_jobs(o.jobs));
      emit(cfg, out, is_fig1 ? fig1_report(cfg, sets) : fig2_report(cfg, sets));
      return 0;
    }
    QuadratureSpec spec;
    spec.abs_tol = tol;
    if (*corr) {
      out << set_json(correlator_set(l, r, spec)).dump(2) << "\n";
      return 0;
    }
    if (*bits_cmd) {
      window.validate();
      std::map<int, double> per_bit;
      json bits = json::array();
      for (int k = window.k_hi; k >= window.k_lo; --k) {
        const CorrelatorSet set = correlator_set(std::ldexp(1.0, k), r, spec);
        const BellReport b = bit_bell_value(set, ChshSettings::standard());
        per_bit[k] = b.value;
        bits.push_back(json{{"k", k}, {"l", set.l}, {"weight", std::ldexp(1.0, k)},
                            {"value", b.value}, {"violated", b.violated}});
      }
      const MultibitReport m = multibit_value(per_bit, window);
      out << json{{"r", r},          {"k_hi", window.k_hi}, {"k_lo", window.k_lo},
                  {"bits", bits},    {"total", m.value},    {"bound", m.bound},
                  {"violated", m.violated}}
                 .dump(2)
          << "\n";
      return 0;
    }
    if (*opt) {
      const CorrelatorSet set = correlator_set(l, r, spec);
      const OptimizeResult best = optimize_settings(set);
      json report{{"r", r},
                  {"l", l},
                  {"standard_settings", settings_json(ChshSettings::standard())},
                  {"standard_value", best.standard_value},
                  {"best_settings", settings_json(best.settings)},
                  {"best_value", best.value}};
      if (include_y) {
        const ExtendedOptimizeResult ext = optimize_settings_extended(set);
        json dirs = json::array();
        for (const auto& d : ext.settings) dirs.push_back(json{{"theta", d.theta}, {"phi", d.phi}});
        report["extended"] = json{{"directions", dirs}, {"value", ext.value}};
      }
      out << report.dump(2) << "\n";
      return 0;
    }
    if (*lhv) {
      window.validate();
      out << json{{"chsh_bound", lhv_chsh_max()},
                  {"bit_bound", lhv_bit_max()},
                  {"strategies", enumerate_lhv_strategies().size()},
                  {"k_hi", window.k_hi},
                  {"k_lo", window.k_lo},
                  {"multibit_bound", lhv_multibit_bound(window)}}
                 .dump(2)
          << "\n";
      return 0;
    }
    if (*demo) {
      const MeasuredPosition pos(q);
      if (!demo_hi->count()) {
        demo_window.k_hi = q == 0.0 ? 0 : std::max(0, std::ilogb(q));
      }
      demo_window.validate();
      json bits = json::array();
      for (int k = demo_window.k_hi; k >= demo_window.k_lo; --k) {
        const int b = bit_at(pos, k);
        bits.push_back(json{{"k", k}, {"bit", b}, {"spin", spin_from_bit(b)}});
      }
      out << json{{"q", q},
                  {"k_hi", demo_window.k_hi},
                  {"k_lo", demo_window.k_lo},
                  {"binary", format_binary(pos, demo_window)},
                  {"bits", bits},
                  {"truncated_value", truncated_value(pos, demo_window)}}
                 .dump(2)
          << "\n";
      return 0;
    }
    if (*self) {
      const auto ids = only ? std::vector<int>{only} : verify::criterion_ids();
      const auto results = verify::run_acceptance(ids, out);
      const bool ok = std::all_of(results.begin(), results.end(),
                                  [](const verify::CriterionResult& c) { return c.passed; });
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const json::exception& e) {
    err << "error: bad config: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace boxspin::cli
