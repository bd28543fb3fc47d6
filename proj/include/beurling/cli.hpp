#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "beurling/catalog.hpp"
#include "beurling/counting.hpp"
#include "beurling/error.hpp"
#include "beurling/grid.hpp"
#include "beurling/hypotheses.hpp"
#include "beurling/kernel.hpp"
#include "beurling/prime_system.hpp"
#include "beurling/zeta.hpp"

namespace beurling::cli {

inline constexpr std::string_view kVersion = "0.3.0";

/// Every key accepted in a config file and as a --flag.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "system", "prime-file", "x-max",  "seed",     "a",     "a-method", "out",     "ppd",
      "grid-min", "gamma",    "s-grid", "kernel-c", "h-min", "h-max",    "h-count", "max-elements"};
  return keys;
}

inline std::string_view key_help(std::string_view key) {
  static const std::map<std::string_view, std::string_view> help = {
      {"system", "recipe: empty, classical, single:P, explicit:P1,P2,..., random_logintegral, "
                 "perturbed_classical:RATE (default classical)"},
      {"prime-file", "read primes from a prime-list file instead of a recipe"},
      {"x-max", "table range; all counts are taken below this value (default 1e6)"},
      {"seed", "seed for random recipes (default 1)"},
      {"a", "declared density constant"},
      {"a-method", "known-exact, regression or final-ratio"},
      {"out", "output directory (default .)"},
      {"ppd", "grid points per decade"},
      {"grid-min", "lower end of the evaluation grid"},
      {"gamma", "exponent in the log-error supremum (default 1)"},
      {"s-grid", "comma-separated points such as 1.5,2+1i,2-0.5i"},
      {"kernel-c", "Fejer kernel half-width (default 2)"},
      {"h-min", "smallest kernel shift (default log 100)"},
      {"h-max", "largest kernel shift (default log min(1e4, x-max/100))"},
      {"h-count", "number of kernel shifts (default 20)"},
      {"max-elements", "enumeration cap (default 1e8)"},
  };
  const auto it = help.find(key);
  return it == help.end() ? std::string_view{} : it->second;
}

using KeyValues = std::map<std::string, std::string>;

/// Flat key=value text; '#' starts a comment line.
inline KeyValues parse_config_text(std::istream& in) {
  KeyValues out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = beurling::detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw InputError("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key(beurling::detail::trim(text.substr(0, eq)));
    const std::string value(beurling::detail::trim(text.substr(eq + 1)));
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
      throw InputError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    out[key] = value;
  }
  return out;
}

inline KeyValues load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  return parse_config_text(in);
}

/// Parses "1.5", "2+1i", "1.5-0.3i".
inline ComplexPoint parse_complex_point(std::string_view text) {
  text = beurling::detail::trim(text);
  const auto fail = [&] { return InputError("cannot parse complex point '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  if (text.back() != 'i') {
    const auto v = beurling::detail::parse_double(text);
    if (!v) throw fail();
    return {*v, 0.0};
  }
  std::size_t split = std::string_view::npos;
  for (std::size_t k = text.size() - 1; k > 0; --k)
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string_view::npos) throw fail();
  const auto re = beurling::detail::parse_double(text.substr(0, split));
  std::string_view im_text = text.substr(split, text.size() - split - 1);
  std::optional<double> im;
  if (im_text == "+" || im_text == "-")
    im = im_text == "+" ? 1.0 : -1.0;
  else
    im = beurling::detail::parse_double(im_text.front() == '+' ? im_text.substr(1) : im_text);
  if (!re || !im) throw fail();
  return {*re, *im};
}

inline std::vector<ComplexPoint> parse_s_grid(std::string_view text) {
  std::vector<ComplexPoint> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_complex_point(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw InputError("empty s grid");
  return out;
}

/// "empty", "classical", "single:P", "explicit:p1,p2,...",
/// "random_logintegral", "perturbed_classical:RATE". Range and seed come
/// from the run configuration.
inline SystemRecipe parse_recipe(std::string_view text, double x_max, std::uint64_t seed) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const auto number = [&](std::string_view s) {
    const auto v = beurling::detail::parse_double(s);
    if (!v) throw InputError("bad recipe parameter '" + std::string(s) + "'");
    return *v;
  };
  if (kind == "empty") return SystemRecipe::empty_system();
  if (kind == "classical") return SystemRecipe::classical(x_max);
  if (kind == "single") return SystemRecipe::single(number(arg));
  if (kind == "explicit") {
    std::vector<double> primes;
    std::string_view rest = arg;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      primes.push_back(number(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return SystemRecipe::explicit_list(std::move(primes));
  }
  if (kind == "random_logintegral") return SystemRecipe::random_logintegral(seed, x_max);
  if (kind == "perturbed_classical") return SystemRecipe::perturbed_classical(seed, number(arg), x_max);
  throw InputError("unknown system recipe '" + std::string(text) + "'");
}

/// Resolved configuration of one run.
struct RunConfig {
  std::optional<SystemRecipe> recipe;
  std::optional<std::string> prime_file;
  double x_max = 1e6;
  std::uint64_t seed = 1;
  std::optional<double> a;
  std::optional<DensityMethod> a_method;
  std::string out = ".";
  std::optional<int> ppd;
  std::optional<double> grid_min;
  double gamma = 1.0;
  std::vector<ComplexPoint> s_grid;
  double kernel_c = 2.0;
  std::optional<double> h_min;
  std::optional<double> h_max;
  int h_count = 20;
  std::size_t max_elements = 100'000'000;
  KeyValues echo;  // resolved key/value pairs

  /// Precedence: command-line flag > config file > default.
  static RunConfig resolve(const KeyValues& file_values, const KeyValues& flag_values) {
    KeyValues merged = {{"system", "classical"}, {"x-max", "1e6"},     {"seed", "1"},
                        {"out", "."},            {"gamma", "1"},       {"s-grid", "1.5,1.5+1i,2,2-1i"},
                        {"kernel-c", "2"},       {"h-count", "20"},    {"max-elements", "100000000"}};
    for (const auto& [k, v] : file_values) merged[k] = v;
    for (const auto& [k, v] : flag_values) merged[k] = v;
    if (merged.count("prime-file") && !flag_values.count("system") && !file_values.count("system"))
      merged.erase("system");
    if (merged.count("prime-file") && merged.count("system"))
      throw InputError("give either system or prime-file, not both");

    RunConfig c;
    c.echo = merged;
    const auto real = [&](const std::string& key) {
      const auto v = beurling::detail::parse_double(merged.at(key));
      if (!v || !std::isfinite(*v)) throw InputError("bad value for " + key + ": '" + merged.at(key) + "'");
      return *v;
    };
    const auto integer = [&](const std::string& key) -> long long {
      const double v = real(key);
      if (v != std::floor(v) || v < 0 || v > 9.0e15) throw InputError(key + " must be a nonnegative integer");
      return static_cast<long long>(v);
    };
    c.x_max = real("x-max");
    if (!(c.x_max > 2.0)) throw InputError("x-max must exceed 2");
    c.seed = static_cast<std::uint64_t>(integer("seed"));
    if (merged.count("a")) c.a = real("a");
    if (merged.count("a-method")) c.a_method = parse_density_method(merged.at("a-method"));
    c.out = merged.at("out");
    if (merged.count("ppd")) {
      c.ppd = static_cast<int>(integer("ppd"));
      if (*c.ppd < 1) throw InputError("ppd must be >= 1");
    }
    if (merged.count("grid-min")) c.grid_min = real("grid-min");
    c.gamma = real("gamma");
    if (!(c.gamma >= 0.0)) throw InputError("gamma must be >= 0");
    c.s_grid = parse_s_grid(merged.at("s-grid"));
    c.kernel_c = real("kernel-c");
    if (merged.count("h-min")) c.h_min = real("h-min");
    if (merged.count("h-max")) c.h_max = real("h-max");
    c.h_count = static_cast<int>(integer("h-count"));
    if (c.h_count < 1) throw InputError("h-count must be >= 1");
    c.max_elements = static_cast<std::size_t>(integer("max-elements"));
    if (merged.count("prime-file"))
      c.prime_file = merged.at("prime-file");
    else
      c.recipe = parse_recipe(merged.at("system"), c.x_max, c.seed);
    return c;
  }

  PrimeSystem make_prime_system() const { return prime_file ? load_prime_file(*prime_file) : make_system(*recipe); }

  /// Explicit method, else known-exact when a is given or the system is
  /// classical (a = 1), else final-ratio.
  DensityEstimate density(const CountingTable& table) const {
    const bool classical = recipe && recipe->kind == SystemRecipe::Kind::classical;
    DensityMethod method = a_method.value_or(a || classical ? DensityMethod::known_exact : DensityMethod::final_ratio);
    std::optional<double> declared = a;
    if (method == DensityMethod::known_exact && !declared) {
      if (!classical) throw InputError("known-exact density needs --a for this system");
      declared = 1.0;
    }
    return estimate_density(table, method, declared);
  }

  std::vector<double> h_grid() const {
    const double lo = h_min.value_or(std::log(100.0));
    const double hi = h_max.value_or(std::max(lo, std::log(std::min(1e4, x_max / 100.0))));
    if (!(hi >= lo)) throw InputError("h-max must be >= h-min");
    std::vector<double> out;
    for (int k = 0; k < h_count; ++k) out.push_back(h_count == 1 ? lo : lo + (hi - lo) * k / (h_count - 1));
    return out;
  }
};

/// Writes to `path.tmp` and renames over `path`.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

using Clock = std::chrono::steady_clock;

class Timings {
 public:
  template <class F>
  auto time(const std::string& name, F&& f) {
    const auto start = Clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(name, start);
    } else {
      auto result = f();
      record(name, start);
      return result;
    }
  }
  const nlohmann::json& json() const { return json_; }

 private:
  void record(const std::string& name, Clock::time_point start) {
    json_[name] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
  nlohmann::json json_ = nlohmann::json::object();
};

inline nlohmann::json system_json(const PrimeSystem& system) {
  static const char* kinds[] = {"catalog", "file", "random"};
  nlohmann::json j = {{"label", system.label()},
                      {"source", kinds[static_cast<int>(system.source().kind)]},
                      {"recipe", system.source().detail},
                      {"primes_stored", system.size()},
                      {"complete_below", system.is_finite_system() ? nlohmann::json("inf")
                                                                   : nlohmann::json(system.complete_below())}};
  if (system.source().seed) j["seed"] = *system.source().seed;
  return j;
}

inline std::string format_row(std::initializer_list<double> values) {
  std::string row;
  char buf[48];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    if (!row.empty()) row += ',';
    row += buf;
  }
  return row + '\n';
}

}  // namespace detail

/// Runs one subcommand and writes `<out>/<file>` plus `<out>/<command>.meta.json`.
/// Returns the path of the main output.
inline std::filesystem::path run_command(const std::string& command, const RunConfig& config) {
  detail::Timings timings;
  const auto total_start = detail::Clock::now();
  const PrimeSystem system = timings.time("build_system", [&] { return config.make_prime_system(); });
  const std::filesystem::path out_dir(config.out);
  std::string file;
  std::string content;
  nlohmann::json extra = nlohmann::json::object();

  const auto table = [&] {
    return timings.time("build_table", [&] {
      return build_table(system, config.x_max, EnumerationOptions{config.max_elements});
    });
  };

  if (command == "gen") {
    file = "primes.txt";
    std::ostringstream os;
    write_prime_list(os, system);
    content = os.str();
  } else if (command == "count") {
    file = "count.csv";
    const CountingTable t = table();
    const GridSpec spec{config.grid_min.value_or(1.0), config.x_max, config.ppd.value_or(10)};
    std::ostringstream os;
    timings.time("compute", [&] { write_counting_csv(os, t, spec.points()); });
    content = os.str();
    extra["grid_spec"] = spec.describe();
  } else if (command == "check") {
    file = "check.json";
    const CountingTable t = table();
    const double lo = config.grid_min.value_or(std::max(3.0, std::min(100.0, std::sqrt(config.x_max))));
    const GridSpec spec{lo, config.x_max, config.ppd.value_or(200)};
    const HypothesisReport report = timings.time("compute", [&] {
      return make_report(t, config.density(t), decade_checkpoints(config.x_max), config.gamma, spec);
    });
    content = to_json(report).dump(2) + "\n";
  } else if (command == "zeta") {
    file = "zeta.csv";
    const CountingTable t = table();
    const DensityEstimate density = config.density(t);
    content = "sigma,t,re_lhs,im_lhs,re_rhs,im_rhs,residual_abs,trunc_bound\n";
    timings.time("compute", [&] {
      for (const ComplexPoint& s : config.s_grid) {
        const IdentityResidual r = log_derivative_residual(t, density.a, s);
        content += detail::format_row({s.sigma, s.t, r.lhs.real(), r.lhs.imag(), r.rhs.real(), r.rhs.imag(),
                                       std::abs(r.residual), r.bound});
      }
    });
    extra["a_estimate"] = density.a;
    extra["a_method"] = std::string(to_string(density.method));
  } else if (command == "kernel") {
    file = "kernel.csv";
    const CountingTable t = table();
    const FejerKernel kernel(config.kernel_c);
    const std::vector<double> hs = config.h_grid();
    content = "h,average,margin\n";
    timings.time("compute", [&] {
      for (const KernelRow& row : kernel_sweep(t, kernel, hs))
        content += detail::format_row({row.h, row.average, row.margin});
    });
    extra["deduction_constant"] = kernel.deduction_constant();
  } else {
    throw InputError("unknown command '" + command + "'");
  }

  const std::filesystem::path main_path = out_dir / file;
  write_atomically(main_path, content);
  nlohmann::json meta = {
      {"command", command},
      {"output", file},
      {"config", config.echo},
      {"system", detail::system_json(system)},
      {"version", std::string(kVersion)},
      {"compiler", __VERSION__},
      {"details", extra},
      {"timings_ms", timings.json()},
  };
  meta["timings_ms"]["total"] =
      std::chrono::duration<double, std::milli>(detail::Clock::now() - total_start).count();
  write_atomically(out_dir / (command + ".meta.json"), meta.dump(2) + "\n");
  return main_path;
}

/// Entry point shared by the tool and the tests. Exit codes: 0 success,
/// 1 computation error, 2 input or configuration error.
inline int run(const std::vector<std::string>& args, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical laboratory for Beurling generalized prime systems", "beurling"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value configuration file");
  std::map<std::string, std::string> flag_storage;
  std::map<std::string, CLI::Option*> flag_options;
  for (const std::string& key : config_keys())
    flag_options[key] = app.add_option("--" + key, flag_storage[key], std::string(key_help(key)));
  app.add_subcommand("count", "tabulate N, pi, theta, psi on a geometric grid -> count.csv");
  app.add_subcommand("check", "density, L1 profile, log-error and Chebyshev diagnostics -> check.json");
  app.add_subcommand("zeta", "log-derivative decomposition residuals on the s-grid -> zeta.csv");
  app.add_subcommand("kernel", "kernel averages and deduction margins over h -> kernel.csv");
  app.add_subcommand("gen", "write the system's primes as a prime-list file -> primes.txt");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, errs;
    const int code = app.exit(e, out, errs);
    err << errs.str() << out.str();
    return code == 0 ? 0 : 2;
  }
  try {
    KeyValues flags;
    for (const auto& [key, opt] : flag_options)
      if (opt->count() > 0) flags[key] = flag_storage[key];
    const KeyValues file_values = config_path.empty() ? KeyValues{} : load_config_file(config_path);
    const RunConfig config = RunConfig::resolve(file_values, flags);
    run_command(app.get_subcommands().front()->get_name(), config);
    return 0;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace beurling::cli
