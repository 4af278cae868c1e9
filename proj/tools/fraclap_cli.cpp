// fraclap: kernel tables, operator application, admissibility audits and the acceptance suite.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration error,
// 3 numerical nonconvergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fraclap/calibration.hpp"
#include "fraclap/frackernel.hpp"
#include "fraclap/manifolds.hpp"
#include "fraclap/operators.hpp"
#include "fraclap/verification.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace fraclap;

constexpr int kReportVersion = 1;

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kNumerical = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Grids: "log:a:b:n", "lin:a:b:n", or a comma-separated list.

std::vector<double> parse_grid(const std::string& spec) {
  auto fail = [&](const std::string& why) { throw UsageError("grid '" + spec + "': " + why); };
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  const char sep = spec.find(':') != std::string::npos ? ':' : ',';
  while (std::getline(ss, item, sep)) parts.push_back(item);
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) fail("bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad number '" + s + "'");
    }
    return 0.0;
  };
  std::vector<double> g;
  if (sep == ':') {
    if (parts.size() != 4 || (parts[0] != "log" && parts[0] != "lin")) fail("expected log:a:b:n or lin:a:b:n");
    const double a = num(parts[1]), b = num(parts[2]);
    const double nd = num(parts[3]);
    const int n = static_cast<int>(nd);
    if (n < 1 || nd != n) fail("point count must be a positive integer");
    if (!(b >= a)) fail("need a <= b");
    if (parts[0] == "log" && !(a > 0.0)) fail("log grid needs a > 0");
    for (int i = 0; i < n; ++i) {
      const double s = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      g.push_back(parts[0] == "log" ? a * std::pow(b / a, s) : a + (b - a) * s);
    }
  } else {
    for (const auto& p : parts) g.push_back(num(p));
  }
  if (g.empty()) fail("empty grid");
  return g;
}

// ---------------------------------------------------------------------------
// Test functions: gaussian[:a], bump[:radius], constant[:value], eigen[:lambda0[:width]].

RadialFunction parse_function(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw UsageError("empty function name");
  auto arg = [&](std::size_t i, double def) {
    if (parts.size() <= i) return def;
    try {
      return std::stod(parts[i]);
    } catch (const std::logic_error&) {
      throw UsageError("function '" + spec + "': bad parameter '" + parts[i] + "'");
    }
  };
  const std::string& name = parts[0];
  if (name == "gaussian") return RadialFunction::gaussian(arg(1, 1.0));
  if (name == "bump") return RadialFunction::bump(arg(1, 2.5));
  if (name == "constant") return RadialFunction::constant(arg(1, 1.0));
  if (name == "eigen") return RadialFunction::windowed_eigenfunction(arg(1, 2.0), arg(2, 40.0));
  throw UsageError("unknown function '" + name + "' (gaussian, bump, constant, eigen)");
}

// ---------------------------------------------------------------------------
// Grid sweeps over FRACLAP_THREADS workers; row i is always computed into slot i.

int thread_count() {
  if (const char* env = std::getenv("FRACLAP_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class Row, class Fn>
std::vector<Row> sweep(const std::vector<double>& grid, Fn fn) {
  std::vector<Row> rows(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  const int workers = std::min<int>(thread_count(), static_cast<int>(grid.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < grid.size(); i += workers) {
        try {
          rows[i] = fn(grid[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Output

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------------------
// Commands

struct Common {
  std::string format = "csv";
  std::string output;
};

struct KernelArgs {
  int n = 3;
  double gamma = 0.5;
  std::string rho_grid = "log:0.01:10:50";
};

int cmd_kernel(const KernelArgs& a, const Common& c) {
  if (a.n < 2) throw UsageError("--n must be >= 2");
  if (!(a.gamma > -1.0 && a.gamma < 1.0) || a.gamma == 0.0) {
    throw UsageError("--gamma must lie in (-1, 1) and be nonzero, got " + num(a.gamma));
  }
  const auto grid = parse_grid(a.rho_grid);
  if (*std::min_element(grid.begin(), grid.end()) <= 0.0) throw UsageError("rho grid must be positive");
  const auto dim = HyperbolicDim::make(a.n);
  const auto kernel = FracKernel::analytic(dim, a.gamma);
  const auto values = sweep<double>(grid, [&](double rho) { return kernel(rho); });

  Output out(c.output);
  auto& os = out.stream();
  if (c.format == "json") {
    json j;
    j["version"] = kReportVersion;
    j["command"] = "kernel";
    j["n"] = a.n;
    j["gamma"] = a.gamma;
    j["alpha"] = kernel.alpha();
    j["alpha_route"] = kernel.calibration().route;
    j["continuation_only"] = kernel.continuation_only();
    j["rows"] = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) j["rows"].push_back({{"rho", grid[i]}, {"value", values[i]}});
    os << j.dump(2) << "\n";
  } else {
    os << "# fraclap kernel\n# n = " << a.n << "\n# gamma = " << num(a.gamma) << "\n# alpha = " << num(kernel.alpha())
       << "\n# alpha_route = " << kernel.calibration().route << "\n";
    if (kernel.continuation_only()) os << "# continuation_only = true\n";
    os << "rho,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i) os << num(grid[i]) << "," << num(values[i]) << "\n";
  }
  return kOk;
}

struct ApplyArgs {
  int n = 3;
  double gamma = 0.5;
  std::string function = "gaussian";
  std::string rho_grid = "0.5,1,2";
  double gate = 1e-2;
  double pv_inner_radius = QuadratureSpec{}.pv_inner_radius;
  double rel_tol = QuadratureSpec{}.rel_tol;
};

int cmd_frac_apply(const ApplyArgs& a, const Common& c) {
  if (a.n < 2) throw UsageError("--n must be >= 2");
  if (!(a.gamma > 0.0 && a.gamma < 1.0)) throw UsageError("--gamma must lie in (0, 1), got " + num(a.gamma));
  const auto f = parse_function(a.function);
  const auto grid = parse_grid(a.rho_grid);
  QuadratureSpec spec;
  spec.pv_inner_radius = a.pv_inner_radius;
  spec.rel_tol = a.rel_tol;
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const bool with_spectral = a.n == 3;
  const auto dim = HyperbolicDim::make(a.n);
  const auto kernel = FracKernel::analytic(dim, a.gamma);
  const auto u = make_extension(dim, a.gamma, f);
  // Differences below this floor are treated as agreement with zero.
  const double floor = 1e-6 * f.scale();

  struct Row {
    double spectral = std::numeric_limits<double>::quiet_NaN();
    double pv = 0.0, neumann = 0.0, worst = 0.0;
  };
  const auto rows = sweep<Row>(grid, [&](double rho) {
    Row r;
    r.pv = pv_frac(kernel, f, rho, spec);
    r.neumann = neumann_limit(u, rho).value;
    std::vector<double> v = {r.pv, r.neumann};
    if (with_spectral) {
      r.spectral = spectral_frac(a.gamma, f, rho);
      v.push_back(r.spectral);
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        r.worst = std::max(r.worst, std::abs(v[i] - v[j]) / std::max({std::abs(v[i]), std::abs(v[j]), floor}));
      }
    }
    return r;
  });
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.worst <= a.gate;

  Output out(c.output);
  auto& os = out.stream();
  if (c.format == "json") {
    json j;
    j["version"] = kReportVersion;
    j["command"] = "frac-apply";
    j["n"] = a.n;
    j["gamma"] = a.gamma;
    j["function"] = f.name;
    j["gate"] = a.gate;
    j["pass"] = ok;
    j["rows"] = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      json row = {{"rho", grid[i]}};
      if (with_spectral) row["spectral"] = rows[i].spectral;
      row["pv"] = rows[i].pv;
      row["neumann"] = rows[i].neumann;
      row["max_pairwise_reldiff"] = rows[i].worst;
      j["rows"].push_back(row);
    }
    os << j.dump(2) << "\n";
  } else {
    os << "# fraclap frac-apply\n# n = " << a.n << "\n# gamma = " << num(a.gamma) << "\n# function = " << f.name
       << "\n# gate = " << num(a.gate) << "\n";
    os << "rho," << (with_spectral ? "spectral," : "") << "pv,neumann,max_pairwise_reldiff\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      os << num(grid[i]) << ",";
      if (with_spectral) os << num(rows[i].spectral) << ",";
      os << num(rows[i].pv) << "," << num(rows[i].neumann) << "," << num(rows[i].worst) << "\n";
    }
  }
  return ok ? kOk : kFailed;
}

struct AdmissibleArgs {
  std::string descriptor;
  std::string profile;
  int n = 3;
};

json rotsym_verdict(const RotSymProfile& p) {
  const auto chk = validate_profile(p);
  json j;
  j["kind"] = "rotsym";
  j["name"] = p.name;
  j["n"] = p.n;
  if (!chk.ok) {
    j["admissible"] = false;
    j["rule"] = "invalid-profile";
    j["problems"] = chk.problems;
    return j;
  }
  const auto v = is_admissible_rotsym(p);
  j["admissible"] = v.admissible;
  j["rule"] = "f1 = phi''/phi and f2 = (n-2)(phi'^2-1)/phi^2 + phi''/phi bounded above on [0, inf)";
  j["sup_f1"] = number_or_null(v.sup_f1);
  j["sup_f2"] = number_or_null(v.sup_f2);
  j["slope_f1"] = number_or_null(v.slope_f1);
  j["slope_f2"] = number_or_null(v.slope_f2);
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

json geomfinite_verdict(const GroupDescriptor& g) {
  const auto v = is_admissible_geomfinite(g);
  static const std::map<GeomFiniteRule, std::string> text = {
      {GeomFiniteRule::I, "delta < (n-1)/2, every cusp rank < n-1, no maximal rank cusp"},
      {GeomFiniteRule::II, "delta = (n-1)/2 + beta/2 and every cusp rank < (n-1)^2 - beta^2"},
      {GeomFiniteRule::ConvexCocompact, "no cusps"},
      {GeomFiniteRule::None, "no rule applies"},
  };
  json j;
  j["kind"] = "geomfinite";
  j["n"] = g.n;
  j["delta"] = g.delta;
  j["cusp_ranks"] = g.cusp_ranks;
  j["has_maximal_cusp"] = g.has_maximal_cusp;
  j["admissible"] = v.admissible;
  j["rule"] = to_string(v.rule);
  j["rule_statement"] = text.at(v.rule);
  return j;
}

int cmd_admissible(const AdmissibleArgs& a, const Common& c) {
  json verdict;
  if (!a.profile.empty()) {
    verdict = rotsym_verdict(RotSymProfile::from_expression(a.profile, a.n, a.profile));
  } else {
    if (a.descriptor.empty()) throw UsageError("admissible needs a descriptor file or --profile");
    std::ifstream in(a.descriptor);
    if (!in) throw UsageError("cannot open descriptor '" + a.descriptor + "'");
    json d;
    try {
      d = json::parse(in);
      const std::string kind = d.at("kind").get<std::string>();
      if (kind == "rotsym") {
        const int n = d.value("n", 3);
        const std::string phi = d.at("phi").get<std::string>();
        verdict = rotsym_verdict(RotSymProfile::from_expression(d.value("name", phi), n, phi));
      } else if (kind == "geomfinite") {
        GroupDescriptor g;
        g.n = d.at("n").get<int>();
        g.delta = d.at("delta").get<double>();
        g.cusp_ranks = d.value("cusp_ranks", std::vector<int>{});
        g.has_maximal_cusp = d.value("has_maximal_cusp", false);
        verdict = geomfinite_verdict(g);
      } else {
        throw UsageError("descriptor kind must be 'rotsym' or 'geomfinite', got '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw UsageError("descriptor '" + a.descriptor + "': " + e.what());
    }
  }
  json j;
  j["version"] = kReportVersion;
  j["command"] = "admissible";
  j["verdict"] = verdict;
  Output out(c.output);
  out.stream() << j.dump(2) << "\n";
  return kOk;
}

struct VerifyArgs {
  std::vector<std::string> only;
  double tolerance_scale = 1.0;
};

int cmd_verify(const VerifyArgs& a, const Common& c) {
  if (!(a.tolerance_scale > 0.0)) throw UsageError("--tolerance-scale must be positive");
  std::vector<std::string> only;
  for (const auto& item : a.only) {
    std::stringstream ss(item);
    std::string s;
    while (std::getline(ss, s, ',')) {
      if (!s.empty()) only.push_back(s);
    }
  }
  for (const auto& key : only) {
    if (!find_criterion(key)) throw UsageError("unknown criterion '" + key + "'");
  }
  VerifyOptions opt;
  opt.tolerance_scale = a.tolerance_scale;
  const auto results = run_verification(only, opt);
  const bool ok = std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });

  Output out(c.output);
  auto& os = out.stream();
  if (c.format == "csv") {
    os << "# fraclap verify\n# tolerance_scale = " << num(a.tolerance_scale) << "\n";
    os << "criterion,id,check,measured,expected,tolerance,pass\n";
    for (const auto& r : results) {
      for (const auto& k : r.checks) {
        os << r.number << "," << r.id << ",\"" << k.label << "\"," << num(k.measured) << ","
           << (std::isfinite(k.expected) ? num(k.expected) : "") << "," << num(k.tolerance) << ","
           << (k.pass ? "true" : "false") << "\n";
      }
      if (!r.error.empty()) os << r.number << "," << r.id << ",\"error: " << r.error << "\",,,,false\n";
    }
  } else {
    json j;
    j["version"] = kReportVersion;
    j["command"] = "verify";
    j["tolerance_scale"] = a.tolerance_scale;
    j["pass"] = ok;
    j["criteria"] = json::array();
    for (const auto& r : results) {
      json cj;
      cj["number"] = r.number;
      cj["id"] = r.id;
      cj["title"] = r.title;
      cj["pass"] = r.pass;
      cj["seconds"] = r.seconds;
      if (!r.error.empty()) cj["error"] = r.error;
      cj["checks"] = json::array();
      for (const auto& k : r.checks) {
        cj["checks"].push_back({{"label", k.label},
                                {"measured", number_or_null(k.measured)},
                                {"expected", number_or_null(k.expected)},
                                {"tolerance", k.tolerance},
                                {"pass", k.pass}});
      }
      j["criteria"].push_back(cj);
    }
    os << j.dump(2) << "\n";
  }
  for (const auto& r : results) {
    std::fprintf(stderr, "[%s] %2d %-20s %7.2fs\n", r.pass ? "PASS" : "FAIL", r.number, r.id.c_str(), r.seconds);
  }
  return ok ? kOk : kFailed;
}

// ---------------------------------------------------------------------------
// Config files: `key = value` lines, '#' comments. `command` picks the subcommand; every
// other key becomes `--key value` (underscores read as dashes). Flags on the command line
// come later and win.

std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  std::string command;
  std::vector<std::string> rest;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "command") {
      command = value;
    } else {
      rest.push_back("--" + key);
      rest.push_back(value);
    }
  }
  if (command.empty()) throw UsageError(path + ": missing 'command'");
  rest.insert(rest.begin(), command);
  return rest;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  // Expand --config before CLI11 sees the arguments.
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      continue;
    }
    auto cfg = config_arguments(path);
    // keep a subcommand given on the command line; otherwise use the config's
    const bool has_cmd = !args.empty() && args[0].rfind("-", 0) != 0;
    if (has_cmd) cfg.erase(cfg.begin());
    args.insert(args.begin() + (has_cmd ? 1 : 0), cfg.begin(), cfg.end());
    break;
  }

  CLI::App app{"Fractional Laplacian on hyperbolic space and rotationally symmetric manifolds", "fraclap"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", "fraclap report version " + std::to_string(kReportVersion));
  app.add_option("--config", "key = value file; command-line flags override it");

  auto add_common = [](CLI::App* sub, Common& c, const std::string& default_format) {
    c.format = default_format;
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("-o,--output", c.output, "Output file (default stdout)");
  };

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "Tabulate the fractional kernel K_gamma(rho)");
  kernel->add_option("--n", ka.n, "Dimension of H^n")->capture_default_str();
  kernel->add_option("--gamma", ka.gamma, "Order, in (-1, 1) minus 0")->capture_default_str();
  kernel->add_option("--rho-grid", ka.rho_grid, "log:a:b:n, lin:a:b:n, or a list")->capture_default_str();

  ApplyArgs aa;
  auto* apply = app.add_subcommand("frac-apply", "Apply (-Delta)^gamma by each available route");
  apply->add_option("--n", aa.n, "Dimension of H^n")->capture_default_str();
  apply->add_option("--gamma", aa.gamma, "Order in (0, 1)")->capture_default_str();
  apply->add_option("--function", aa.function, "gaussian[:a], bump[:R], constant[:c], eigen[:l0[:w]]")
      ->capture_default_str();
  apply->add_option("--rho-grid", aa.rho_grid, "Evaluation radii")->capture_default_str();
  apply->add_option("--gate", aa.gate, "Largest allowed pairwise relative difference")->capture_default_str();
  apply->add_option("--pv-inner-radius", aa.pv_inner_radius, "Taylor ball radius")->capture_default_str();
  apply->add_option("--rel-tol", aa.rel_tol, "Quadrature relative tolerance")->capture_default_str();

  AdmissibleArgs ad;
  auto* adm = app.add_subcommand("admissible", "Admissibility verdict for a profile or a quotient group");
  adm->add_option("descriptor", ad.descriptor, "JSON descriptor file");
  adm->add_option("--profile", ad.profile, "Warping function phi(r) as an expression");
  adm->add_option("--n", ad.n, "Dimension for --profile")->capture_default_str();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--only", va.only, "Criteria by number or id (repeatable, comma-separated)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  verify->add_option("--tolerance-scale", va.tolerance_scale, "Multiply every tolerance")->capture_default_str();

  Common kc, ac, dc, vc;
  add_common(kernel, kc, "csv");
  add_common(apply, ac, "csv");
  add_common(adm, dc, "json");
  add_common(verify, vc, "json");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*kernel) return cmd_kernel(ka, kc);
    if (*apply) return cmd_frac_apply(aa, ac);
    if (*adm) return cmd_admissible(ad, dc);
    if (*verify) return cmd_verify(va, vc);
  } catch (const UsageError& e) {
    std::cerr << "fraclap: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "fraclap: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "fraclap: " << e.what() << "\n";
    return kUsage;
  } catch (const QuadratureError& e) {
    std::cerr << "fraclap: nonconvergence: " << e.what() << "\n";
    return kNumerical;
  } catch (const InstabilityError& e) {
    std::cerr << "fraclap: nonconvergence: " << e.what() << "\n";
    return kNumerical;
  } catch (const MassLeakError& e) {
    std::cerr << "fraclap: nonconvergence: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "fraclap: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "fraclap: " << e.what() << "\n";
    return kNumerical;
  }
}
