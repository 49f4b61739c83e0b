// harmonic-ball: command-line front end. Exit codes: 0 pass, 1 check failure, 2 usage error.

#include <harmonic_ball/harmonic_ball.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include "battery.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace hb = harmonic_ball;
using json = nlohmann::ordered_json;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_check = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything that can change output bytes. --workers is deliberately absent.
struct RunConfig {
  std::string subcommand;
  int n_min = 2;
  int n_max = 10;
  unsigned k_min = 0;
  unsigned k_max = 0;
  std::vector<double> radii;
  double tolerance = 0.0;
  std::uint64_t seed = 7;
  std::string format = "csv";
  std::string output;
  json params = json::object();

  json to_json() const {
    return json{{"subcommand", subcommand}, {"dimension_range", {n_min, n_max}}, {"degree_range", {k_min, k_max}},
                {"radii", radii},           {"tolerance", tolerance},           {"seed", seed},
                {"format", format},         {"output", output},                 {"params", params}};
  }
};

struct Common {
  std::uint64_t seed = 7;
  unsigned workers = 1;
  std::string format = "csv";
  std::string output;
};

struct MapSpec {
  std::string kind = "identity";
  unsigned k = 1;
  std::string axis;
  std::string poly;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_header(const RunConfig& cfg) {
  std::string out = std::string("# harmonic-ball ") + hb::version + "\n";
  out += "# seed: " + std::to_string(cfg.seed) + "\n";
  out += "# run: " + cfg.to_json().dump() + "\n";
  return out;
}

json json_report(const RunConfig& cfg) {
  return json{{"version", hb::version}, {"seed", cfg.seed}, {"run", cfg.to_json()}};
}

std::filesystem::path resolve_output(const RunConfig& cfg) {
  const char* dir = std::getenv("HARMONIC_BALL_OUT_DIR");
  std::filesystem::path path = cfg.output;
  if (path.empty()) {
    if (!dir || !*dir) return {};
    path = cfg.subcommand + (cfg.format == "json" ? ".json" : cfg.format == "text" ? ".txt" : ".csv");
  }
  if (path.is_relative() && dir && *dir) path = std::filesystem::path(dir) / path;
  return path;
}

void emit(const RunConfig& cfg, const std::string& text) {
  const auto path = resolve_output(cfg);
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << text;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw UsageError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void set_degree(RunConfig& cfg, const hb::HarmonicMap<hb::Rational>& u) {
  cfg.k_min = cfg.k_max = u.degree.value_or(0);
}

hb::HarmonicMap<hb::Rational> build_map(const MapSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw UsageError("dimension must be positive");
  const auto dim = static_cast<std::size_t>(n);
  if (spec.kind == "identity") return hb::identity_map(dim);
  if (spec.kind == "random") return hb::random_harmonic_polynomial(dim, spec.k, seed);
  if (spec.kind == "poly") {
    if (spec.poly.empty()) throw UsageError("--map poly needs --poly");
    return hb::make_harmonic_map(hb::VectorPoly<hb::Rational>::scalar(hb::parse_polynomial(spec.poly, dim)),
                                 spec.poly);
  }
  if (spec.axis.empty()) return hb::zonal_solid_harmonic(dim, spec.k);
  std::vector<hb::Rational> axis;
  std::stringstream ss(spec.axis);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      axis.emplace_back(item);
    } catch (const std::exception&) {
      throw UsageError("axis entries must be rationals p/q: '" + item + "'");
    }
  }
  return hb::zonal_solid_harmonic<hb::Rational>(dim, spec.k, axis);
}

void add_common(CLI::App* sub, Common& c, const char* default_format = "csv") {
  c.format = default_format;
  sub->add_option("--seed", c.seed, "seed for every random choice")->capture_default_str();
  sub->add_option("--workers", c.workers, "worker threads; never changes output bytes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("-o,--out", c.output, "output file (relative paths go under $HARMONIC_BALL_OUT_DIR)");
}

void add_map(CLI::App* sub, MapSpec& m) {
  sub->add_option("--map", m.kind, "map family")
      ->check(CLI::IsMember({"identity", "zonal", "random", "poly"}))
      ->capture_default_str();
  sub->add_option("-k,--degree", m.k, "degree for zonal/random")->capture_default_str();
  sub->add_option("--axis", m.axis, "zonal axis, comma-separated rationals");
  sub->add_option("--poly", m.poly, "scalar polynomial for --map poly, e.g. \"x1^2 - x2^2\"");
}

RunConfig base_config(const std::string& name, const Common& c) {
  RunConfig cfg;
  cfg.subcommand = name;
  cfg.seed = c.seed;
  cfg.format = c.format;
  cfg.output = c.output;
  return cfg;
}

json map_params(const MapSpec& m) {
  return json{{"map", m.kind}, {"axis", m.axis}, {"poly", m.poly}};
}

// --- volumes -----------------------------------------------------------------

struct VolumesArgs {
  Common common;
  int n_min = 1;
  int n_max = 25;
  double shell_r = 0.9;
  double shell_mass = 0.5;
};

int run_volumes(const VolumesArgs& a) {
  if (a.n_min < 1 || a.n_max < a.n_min) throw UsageError("need 1 <= n-min <= n-max");
  auto cfg = base_config("volumes", a.common);
  cfg.n_min = a.n_min;
  cfg.n_max = a.n_max;
  cfg.params = {{"shell_r", a.shell_r}, {"shell_mass", a.shell_mass}};
  int argmax = a.n_min;
  for (int n = a.n_min; n <= a.n_max; ++n)
    if (hb::log_unit_ball_volume(n) > hb::log_unit_ball_volume(argmax)) argmax = n;
  json rows = json::array();
  std::string csv = csv_header(cfg) + "# argmax_n: " + std::to_string(argmax) + "\n" +
                    "n,volume,log_volume,sphere_area,shell_fraction,shell_width\n";
  for (int n = a.n_min; n <= a.n_max; ++n) {
    const auto v = hb::unit_ball_volume(n);
    const double area = hb::sphere_area(n, 1.0);
    const double shell = hb::shell_volume_fraction({n, a.shell_r});
    const double width = hb::shell_width_for_mass(n, a.shell_mass);
    csv += std::to_string(n) + "," + num(v.volume) + "," + num(v.log_volume) + "," + num(area) + "," + num(shell) +
           "," + num(width) + "\n";
    rows.push_back({{"n", n}, {"volume", v.volume}, {"log_volume", v.log_volume}, {"sphere_area", area},
                    {"shell_fraction", shell}, {"shell_width", width}});
  }
  if (cfg.format == "json") {
    auto report = json_report(cfg);
    report["argmax_n"] = argmax;
    report["rows"] = std::move(rows);
    emit(cfg, report.dump(2) + "\n");
  } else {
    emit(cfg, csv);
  }
  return exit_pass;
}

// --- concentration -----------------------------------------------------------

struct ConcentrationArgs {
  Common common;
  MapSpec map;
  int n_min = 2;
  int n_max = 200;
  double r = 0.9;
};

int run_concentration(const ConcentrationArgs& a) {
  if (a.n_min < 1 || a.n_max < a.n_min) throw UsageError("need 1 <= n-min <= n-max");
  auto cfg = base_config("concentration", a.common);
  cfg.n_min = a.n_min;
  cfg.n_max = a.n_max;
  set_degree(cfg, build_map(a.map, a.n_min, a.common.seed));
  cfg.radii = {a.r};
  cfg.params = map_params(a.map);
  std::string csv = csv_header(cfg) + "map,n,k,r,fraction,volume_fraction,theta_half\n";
  json rows = json::array();
  for (int n = a.n_min; n <= a.n_max; ++n) {
    const auto u = build_map(a.map, n, a.common.seed);
    const double f = hb::concentration_fraction(u, a.r);
    const double shell = hb::shell_volume_fraction({n, a.r});
    const double theta = hb::half_radius_theta(u, 1.0);
    const std::string k = u.degree ? std::to_string(*u.degree) : "";
    csv += u.label + "," + std::to_string(n) + "," + k + "," + num(a.r) + "," + num(f) + "," + num(shell) + "," +
           num(theta) + "\n";
    rows.push_back({{"map", u.label}, {"n", n}, {"k", u.degree ? json(*u.degree) : json()}, {"r", a.r},
                    {"fraction", f}, {"volume_fraction", shell}, {"theta_half", theta}});
  }
  if (cfg.format == "json") {
    auto report = json_report(cfg);
    report["rows"] = std::move(rows);
    emit(cfg, report.dump(2) + "\n");
  } else {
    emit(cfg, csv);
  }
  return exit_pass;
}

// --- decay -------------------------------------------------------------------

struct DecayArgs {
  Common common;
  MapSpec map;
  int n = 3;
  unsigned levels = 8;
  std::string radii;
  double beta = -1.0;
  double C = 1.0;
};

int run_decay(const DecayArgs& a) {
  auto cfg = base_config("decay", a.common);
  cfg.n_min = cfg.n_max = a.n;
  cfg.k_min = cfg.k_max = a.map.k;
  cfg.radii = a.radii.empty() ? hb::dyadic_radii(a.levels) : parse_doubles(a.radii);
  const double beta = a.beta > 0.0 ? a.beta : a.n - 0.1;
  cfg.params = map_params(a.map);
  cfg.params["beta"] = beta;
  cfg.params["C"] = a.C;
  const auto u = build_map(a.map, a.n, a.common.seed);
  set_degree(cfg, u);
  const auto profile = hb::energy_profile(u, cfg.radii, hb::QuadratureSpec{.workers = a.common.workers});
  const auto fit = hb::fit_decay_exponent(profile);
  const auto bound = hb::verify_decay_bound(profile, beta, a.C);
  const double theta = hb::half_radius_theta(u, cfg.radii.back());
  const json verdict{{"beta_hat", fit.beta_hat},
                     {"worst_margin", bound.worst_margin},
                     {"theta_half", theta},
                     {"holds", bound.holds},
                     {"fit_residual", fit.max_residual},
                     {"map", u.label}};
  if (cfg.format == "json") {
    auto report = json_report(cfg);
    json rows = json::array();
    for (const auto& s : profile.samples) rows.push_back({{"r", s.r}, {"E", s.energy}, {"log_E", s.log_energy}});
    report["profile"] = std::move(rows);
    report["verdict"] = verdict;
    emit(cfg, report.dump(2) + "\n");
  } else {
    std::string csv = csv_header(cfg) + "r,E,log_E\n";
    for (const auto& s : profile.samples) csv += num(s.r) + "," + num(s.energy) + "," + num(s.log_energy) + "\n";
    csv += "# verdict: " + verdict.dump() + "\n";
    emit(cfg, csv);
  }
  if (!bound.holds) {
    std::cerr << "FAILED decay bound E(r) <= C (r/R)^beta E(R) at r = " << num(bound.worst_r)
              << ", R = " << num(bound.worst_R) << " (beta = " << num(beta) << ", C = " << num(a.C) << ")\n";
    return exit_check;
  }
  return exit_pass;
}

// --- identities --------------------------------------------------------------

struct IdentitiesArgs {
  Common common;
  std::string suite = "default";
  int n_min = 2;
  int n_max = 10;
  unsigned zonal_k_max = 5;
  unsigned random_k_max = 4;
  std::string radii = "0.3,0.7,1";
  double tolerance = 1e-10;
};

json report_json(const hb::ResidualReport& r, std::uint64_t seed) {
  return json{{"identity", hb::to_string(r.identity)},
              {"map", r.map_label},
              {"n", r.n},
              {"r", r.r},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"residual", r.residual},
              {"normalized_residual", r.normalized_residual},
              {"energy", r.energy},
              {"method", "exact"},
              {"seed", seed}};
}

int run_identities(const IdentitiesArgs& a) {
  if (a.n_min < 2 || a.n_max < a.n_min) throw UsageError("need 2 <= n-min <= n-max");
  auto cfg = base_config("identities", a.common);
  cfg.n_min = a.n_min;
  cfg.n_max = a.n_max;
  cfg.k_max = std::max(a.zonal_k_max, a.random_k_max);
  cfg.radii = parse_doubles(a.radii);
  cfg.tolerance = a.tolerance;
  cfg.params = {{"suite", a.suite}, {"zonal_k_max", a.zonal_k_max}, {"random_k_max", a.random_k_max}};

  hb::IdentitySuiteOptions opt;
  opt.n_min = a.n_min;
  opt.n_max = a.n_max;
  opt.zonal_max_degree = a.zonal_k_max;
  opt.random_max_degree = a.random_k_max;
  opt.seed = a.common.seed;
  opt.radii = cfg.radii;
  opt.workers = a.common.workers;
  std::vector<hb::HarmonicMap<hb::Rational>> maps;
  for (int n = a.n_min; n <= a.n_max; ++n) {
    const auto dim = static_cast<std::size_t>(n);
    if (a.suite == "default" || a.suite == "identity") maps.push_back(hb::identity_map(dim));
    if (a.suite == "default" || a.suite == "zonal")
      for (unsigned k = 0; k <= a.zonal_k_max; ++k) maps.push_back(hb::zonal_solid_harmonic(dim, k));
    if (a.suite == "default" || a.suite == "random")
      for (unsigned k = 0; k <= a.random_k_max; ++k) maps.push_back(hb::random_harmonic_polynomial(dim, k, opt.seed));
  }
  auto per_map = hb::run_indexed(maps.size(), opt.workers, [&](std::size_t i) {
    std::vector<hb::ResidualReport> out;
    const auto dens = hb::EnergyDensities<hb::Rational>::of(maps[i].body);
    for (double r : opt.radii) {
      out.push_back(hb::pohozaev_residual(maps[i], dens, r));
      out.push_back(hb::green_residual(maps[i], dens, r));
    }
    return out;
  });
  std::vector<hb::ResidualReport> reports;
  for (auto& v : per_map) reports.insert(reports.end(), v.begin(), v.end());
  std::stable_sort(reports.begin(), reports.end(), hb::report_less);

  std::vector<const hb::ResidualReport*> failed;
  double worst = 0.0;
  for (const auto& r : reports) {
    worst = std::max(worst, r.normalized_residual);
    if (!(r.normalized_residual < a.tolerance)) failed.push_back(&r);
  }
  if (cfg.format == "json") {
    auto report = json_report(cfg);
    json results = json::array();
    for (const auto& r : reports) results.push_back(report_json(r, a.common.seed));
    report["max_normalized_residual"] = worst;
    report["results"] = std::move(results);
    emit(cfg, report.dump(2) + "\n");
  } else {
    std::string csv = csv_header(cfg) + "identity,map,n,r,lhs,rhs,residual,normalized_residual,energy,method,seed\n";
    for (const auto& r : reports)
      csv += hb::to_string(r.identity) + "," + r.map_label + "," + std::to_string(r.n) + "," + num(r.r) + "," +
             num(r.lhs) + "," + num(r.rhs) + "," + num(r.residual) + "," + num(r.normalized_residual) + "," +
             num(r.energy) + ",exact," + std::to_string(a.common.seed) + "\n";
    emit(cfg, csv);
  }
  for (const auto* r : failed)
    std::cerr << "FAILED " << hb::to_string(r->identity) << " " << r->map_label << " r=" << num(r->r)
              << ": normalized residual " << num(r->normalized_residual) << " >= " << num(a.tolerance) << "\n";
  return failed.empty() ? exit_pass : exit_check;
}

// --- mollify -----------------------------------------------------------------

struct MollifyArgs {
  Common common;
  MapSpec map;
  int n = 2;
  double delta = 0.25;
  double h = 1.0 / 256;
  std::string profile = "bump";
  std::string points_file;
  unsigned points = 20;
  std::size_t component = 0;
  double tolerance = 1e-4;
};

std::vector<std::vector<double>> read_points(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read points file " + path);
  std::vector<std::vector<double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto p = parse_doubles(line);
    if (static_cast<int>(p.size()) != n)
      throw UsageError("points file row has " + std::to_string(p.size()) + " coordinates, expected " + std::to_string(n));
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<std::vector<double>> random_points(unsigned count, int n, double radius, std::uint64_t seed) {
  hb::ShardStream stream(seed, 0x706f696e7473ULL);
  std::vector<std::vector<double>> pts;
  while (pts.size() < count) {
    std::vector<double> x(n);
    double r2 = 0.0;
    for (auto& v : x) {
      v = (2 * stream.uniform() - 1) * radius;
      r2 += v * v;
    }
    if (r2 < radius * radius) pts.push_back(std::move(x));
  }
  return pts;
}

int run_mollify(const MollifyArgs& a) {
  auto cfg = base_config("mollify", a.common);
  cfg.n_min = cfg.n_max = a.n;
  cfg.k_min = cfg.k_max = a.map.k;
  cfg.tolerance = a.tolerance;
  cfg.params = map_params(a.map);
  cfg.params["delta"] = a.delta;
  cfg.params["h"] = a.h;
  cfg.params["profile"] = a.profile;
  cfg.params["points_file"] = a.points_file;
  cfg.params["points"] = a.points;
  cfg.params["component"] = a.component;

  const auto u = build_map(a.map, a.n, a.common.seed);
  set_degree(cfg, u);
  if (a.component >= u.body.arity()) throw UsageError("component out of range");
  const auto spec = hb::make_mollifier(a.n, a.delta);
  const auto pts = a.points_file.empty() ? random_points(a.points, a.n, 0.5 * (1 - a.delta), a.common.seed)
                                         : read_points(a.points_file, a.n);
  const auto rep = hb::mean_value_check(u, spec, a.h, pts, a.component);
  auto point_text = [](const std::vector<double>& x) {
    std::string s;
    for (double v : x) s += (s.empty() ? "" : " ") + num(v);
    return s;
  };
  if (cfg.format == "json") {
    auto report = json_report(cfg);
    json rows = json::array();
    for (const auto& p : rep.points)
      rows.push_back({{"point", p.x}, {"u", p.u}, {"mollified", p.mollified}, {"error", p.error}});
    report["map"] = u.label;
    report["harmonic"] = rep.harmonic;
    report["note"] = rep.note;
    report["max_error"] = rep.max_error;
    report["points"] = std::move(rows);
    emit(cfg, report.dump(2) + "\n");
  } else {
    std::string csv = csv_header(cfg) + "# map: " + u.label + "\n";
    if (!rep.note.empty()) csv += "# note: " + rep.note + "\n";
    csv += "# max_error: " + num(rep.max_error) + "\npoint,u,mollified,error\n";
    for (const auto& p : rep.points)
      csv += point_text(p.x) + "," + num(p.u) + "," + num(p.mollified) + "," + num(p.error) + "\n";
    emit(cfg, csv);
  }
  if (rep.harmonic && !(rep.max_error < a.tolerance)) {
    std::cerr << "FAILED mean-value property for " << u.label << ": max error " << num(rep.max_error)
              << " >= " << num(a.tolerance) << "\n";
    return exit_check;
  }
  return exit_pass;
}

// --- integrate ---------------------------------------------------------------

struct IntegrateArgs {
  Common common;
  int n = 0;
  std::string poly;
  std::string domain = "ball";
  double radius = 1.0;
  std::string method = "exact";
  std::uint64_t samples = 1000000;
};

int run_integrate(const IntegrateArgs& a) {
  if (a.n < 1) throw UsageError("--n must be positive");
  auto cfg = base_config("integrate", a.common);
  cfg.n_min = cfg.n_max = a.n;
  cfg.radii = {a.radius};
  cfg.params = {{"poly", a.poly}, {"domain", a.domain}, {"method", a.method}, {"samples", a.samples}};
  const auto p = hb::parse_polynomial(a.poly, static_cast<std::size_t>(a.n));
  auto spec = a.method == "exact" ? hb::QuadratureSpec::exact()
                                  : hb::QuadratureSpec::monte_carlo(a.samples, a.common.seed, a.common.workers);
  const auto res = a.domain == "ball" ? hb::integrate_poly_ball(p, a.radius, spec)
                                      : hb::integrate_poly_sphere(p, a.radius, spec);
  if (cfg.format == "json") {
    auto report = json_report(cfg);
    report["value"] = res.value;
    report["log_abs_value"] = res.log_abs_value;
    report["std_error"] = res.standard_error;
    report["method"] = hb::to_string(res.method);
    emit(cfg, report.dump(2) + "\n");
  } else {
    emit(cfg, csv_header(cfg) + "value,log_abs_value,std_error,method\n" + num(res.value) + "," +
                  num(res.log_abs_value) + "," + num(res.standard_error) + "," + hb::to_string(res.method) + "\n");
  }
  return exit_pass;
}

// --- make-harmonic -----------------------------------------------------------

struct MakeHarmonicArgs {
  Common common;
  MapSpec map;
  int n = 3;
};

int run_make_harmonic(const MakeHarmonicArgs& a) {
  if (a.map.kind == "poly") throw UsageError("make-harmonic takes kind identity, zonal or random");
  auto cfg = base_config("make-harmonic", a.common);
  cfg.n_min = cfg.n_max = a.n;
  cfg.k_min = cfg.k_max = a.map.k;
  cfg.params = map_params(a.map);
  const auto u = build_map(a.map, a.n, a.common.seed);
  set_degree(cfg, u);
  if (cfg.format == "json") {
    auto report = json_report(cfg);
    json components = json::array();
    for (const auto& c : u.body.components()) components.push_back(hb::format_polynomial(c));
    report["label"] = u.label;
    report["degree"] = u.degree ? json(*u.degree) : json();
    report["certified"] = u.certified;
    report["components"] = std::move(components);
    emit(cfg, report.dump(2) + "\n");
  } else {
    std::string text = csv_header(cfg) + "# map: " + u.label + "\n";
    for (const auto& c : u.body.components()) text += hb::format_polynomial(c) + "\n";
    emit(cfg, text);
  }
  return exit_pass;
}

// --- suite -------------------------------------------------------------------

struct SuiteArgs {
  Common common;
  std::uint64_t mc_seed = 20240601;
};

int run_suite(const SuiteArgs& a) {
  auto cfg = base_config("suite", a.common);
  cfg.k_max = 5;
  cfg.params = {{"mc_seed", a.mc_seed}};
  hb::battery::BatteryOptions opt;
  opt.seed = a.common.seed;
  opt.mc_seed = a.mc_seed;
  opt.workers = a.common.workers;
  const auto results = hb::battery::run_battery(opt, [](const hb::battery::CriterionResult& r) {
    std::fprintf(stderr, "%s %2d %s [%.2f s]\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
  });
  // Timings stay on stderr so reports are byte-identical across runs.
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  if (cfg.format == "json") {
    auto report = json_report(cfg);
    json rows = json::array();
    for (const auto& r : results) rows.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    report["passed"] = results.size() - failed;
    report["total"] = results.size();
    report["criteria"] = std::move(rows);
    emit(cfg, report.dump(2) + "\n");
  } else {
    std::string csv = csv_header(cfg) + "id,title,pass,detail\n";
    for (const auto& r : results)
      csv += std::to_string(r.id) + "," + r.title + "," + (r.pass ? "PASS" : "FAIL") + ",\"" + r.detail + "\"\n";
    emit(cfg, csv);
  }
  for (const auto& r : results)
    if (!r.pass) std::cerr << "FAILED " << r.id << " " << r.title << ": " << r.detail << "\n";
  std::cerr << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? exit_pass : exit_check;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic maps on the unit ball: exact energies and verification suites", "harmonic-ball"};
  app.set_version_flag("--version", std::string(hb::version));
  app.set_config("--config", "", "TOML config file; [subcommand] sections mirror the flags");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  VolumesArgs volumes;
  auto* vol = app.add_subcommand("volumes", "unit-ball volumes, sphere areas, shell fractions");
  add_common(vol, volumes.common);
  vol->add_option("--n-min", volumes.n_min)->capture_default_str();
  vol->add_option("--n-max", volumes.n_max)->capture_default_str();
  vol->add_option("--shell-r", volumes.shell_r, "inner radius for shell_fraction")->capture_default_str();
  vol->add_option("--shell-mass", volumes.shell_mass, "volume mass for shell_width")->capture_default_str();

  ConcentrationArgs conc;
  auto* con = app.add_subcommand("concentration", "fraction of energy in the shell r < |x| < 1");
  add_common(con, conc.common);
  add_map(con, conc.map);
  con->add_option("--n-min", conc.n_min)->capture_default_str();
  con->add_option("--n-max", conc.n_max)->capture_default_str();
  con->add_option("-r,--radius", conc.r, "inner shell radius")->capture_default_str();

  DecayArgs decay;
  auto* dec = app.add_subcommand("decay", "energy profile, fitted decay exponent and decay bound");
  add_common(dec, decay.common);
  add_map(dec, decay.map);
  dec->add_option("-n,--dim", decay.n)->capture_default_str();
  dec->add_option("--levels", decay.levels, "dyadic radii 2^-levels .. 1")->capture_default_str();
  dec->add_option("--radii", decay.radii, "explicit increasing radii, comma-separated");
  dec->add_option("--beta", decay.beta, "decay exponent to verify (default n - 0.1)");
  dec->add_option("--C", decay.C, "constant in the decay bound")->capture_default_str();

  IdentitiesArgs ids;
  auto* idc = app.add_subcommand("identities", "Pohozaev and Green residuals over a map suite");
  add_common(idc, ids.common, "json");
  idc->add_option("--suite", ids.suite)
      ->check(CLI::IsMember({"default", "identity", "zonal", "random"}))
      ->capture_default_str();
  idc->add_option("--n-min", ids.n_min)->capture_default_str();
  idc->add_option("--n-max", ids.n_max)->capture_default_str();
  idc->add_option("--zonal-k-max", ids.zonal_k_max)->capture_default_str();
  idc->add_option("--random-k-max", ids.random_k_max)->capture_default_str();
  idc->add_option("--radii", ids.radii)->capture_default_str();
  idc->add_option("--tol", ids.tolerance, "normalized residual tolerance")->capture_default_str();

  MollifyArgs moll;
  auto* mol = app.add_subcommand("mollify", "mean-value check of J_delta * u against u");
  add_common(mol, moll.common);
  add_map(mol, moll.map);
  mol->add_option("-n,--dim", moll.n)->check(CLI::Range(1, hb::mollifier_max_dimension))->capture_default_str();
  mol->add_option("--delta", moll.delta)->capture_default_str();
  mol->add_option("--grid-h", moll.h, "grid spacing h")->capture_default_str();
  mol->add_option("--profile", moll.profile)->check(CLI::IsMember({"bump"}))->capture_default_str();
  mol->add_option("--points-file", moll.points_file, "CSV of coordinates, one point per row")
      ->check(CLI::ExistingFile);
  mol->add_option("--points", moll.points, "random points in B_{(1-delta)/2} when no file is given")
      ->capture_default_str();
  mol->add_option("--component", moll.component)->capture_default_str();
  mol->add_option("--tol", moll.tolerance, "max mean-value error for harmonic input")->capture_default_str();

  IntegrateArgs integ;
  auto* itg = app.add_subcommand("integrate", "integrate a polynomial over a ball or sphere");
  add_common(itg, integ.common, "json");
  itg->add_option("-n,--dim", integ.n)->required();
  itg->add_option("--poly", integ.poly, "e.g. \"x1^2 + 1/3 * x2\"")->required();
  itg->add_option("--domain", integ.domain)->check(CLI::IsMember({"ball", "sphere"}))->capture_default_str();
  itg->add_option("--radius", integ.radius)->capture_default_str();
  itg->add_option("--method", integ.method)->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
  itg->add_option("--samples", integ.samples)->capture_default_str();

  MakeHarmonicArgs make;
  auto* mk = app.add_subcommand("make-harmonic", "print a harmonic polynomial map");
  add_common(mk, make.common);
  mk->add_option("--kind", make.map.kind)
      ->check(CLI::IsMember({"identity", "zonal", "random"}))
      ->capture_default_str();
  mk->add_option("-n,--dim", make.n)->capture_default_str();
  mk->add_option("-k,--degree", make.map.k)->capture_default_str();
  mk->add_option("--axis", make.map.axis, "zonal axis, comma-separated rationals");

  SuiteArgs suite;
  auto* ste = app.add_subcommand("suite", "full acceptance battery; exit 0 iff every check passes");
  add_common(ste, suite.common, "json");
  ste->add_option("--mc-seed", suite.mc_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*vol) return run_volumes(volumes);
    if (*con) return run_concentration(conc);
    if (*dec) return run_decay(decay);
    if (*idc) return run_identities(ids);
    if (*mol) return run_mollify(moll);
    if (*itg) return run_integrate(integ);
    if (*mk) return run_make_harmonic(make);
    if (*ste) return run_suite(suite);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {  // DimensionError, ParseError
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::domain_error& e) {  // DomainError, ZeroEnergyError
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const hb::RefusedError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_check;
  }
  return exit_usage;
}
