#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "ttstar/datamaps.hpp"
#include "ttstar/errors.hpp"
#include "ttstar/json_io.hpp"
#include "ttstar/suites.hpp"
#include "ttstar/tauconst.hpp"
#include "ttstar/todaflow.hpp"

namespace {

using namespace ttstar;
using io::Json;

enum Exit { ok = 0, numeric = 1, input = 2, blow_up = 3, verification = 4 };

struct Options {
  int n = 3;
  std::string gamma;
  std::string rho;
  double x0 = 0.01;
  double x1 = 8.0;
  std::optional<double> x2;
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::uint64_t seed = 7;
  int samples = 50;
  std::string suite;
  double threshold = 1e-2;
  std::string out;
  bool reproducible = false;
  bool even_n = false;
};

std::vector<double> parse_list(const std::string& s, const char* flag) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ShapeError(std::string(flag) + ": cannot parse '" + item + "'");
    v.push_back(d);
  }
  if (v.empty()) throw ShapeError(std::string(flag) + " is empty");
  return v;
}

std::vector<double> gamma_of(const Options& o) {
  if (o.gamma.empty()) throw ShapeError("--gamma is required");
  auto g = parse_list(o.gamma, "--gamma");
  if (static_cast<int>(g.size()) != datamaps::reduced_size(o.n))
    throw ShapeError("--gamma needs " + std::to_string(datamaps::reduced_size(o.n)) + " entries for n = " +
                     std::to_string(o.n));
  return g;
}

std::string timestamp() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void emit(const Options& o, Json j) {
  if (!o.reproducible) j["timestamp"] = timestamp();
  const auto text = io::dump(j) + "\n";
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw ParameterError("cannot open " + o.out);
  f << text;
}

int cmd_maps(const Options& o) {
  datamaps::AsymptoticData a{o.n, gamma_of(o), {}};
  const auto glob = datamaps::global_rho(o.n, a.gamma);
  if (o.rho.empty()) {
    a.rho = glob;
  } else {
    a.rho = parse_list(o.rho, "--rho");
    if (a.rho.size() != a.gamma.size()) throw ShapeError("--rho and --gamma differ in length");
  }
  const auto m = datamaps::asymptotic_to_monodromy(a);
  Json j;
  j["command"] = "maps";
  j["n"] = o.n;
  j["gamma_full"] = datamaps::expand_full(o.n, a.gamma);
  j["asymptotic"] = io::to_json(a);
  j["monodromy"] = io::to_json(m);
  j["global_rho"] = glob;
  j["rho_defaulted"] = o.rho.empty();
  emit(o, j);
  return ok;
}

// Restriction of a trajectory to [x0, x1] with reg re-based at x0.
todaflow::Trajectory window(const todaflow::Trajectory& t, double x0, double x1) {
  todaflow::Trajectory w = t;
  w.points.clear();
  w.reg.clear();
  w.kin.clear();
  const auto base = *t.find(x0);
  for (std::size_t k = base; k < t.points.size() && t.points[k].x <= x1 * (1.0 + 1e-13); ++k) {
    w.points.push_back(t.points[k]);
    w.reg.push_back(t.reg[k] - t.reg[base]);
    w.kin.push_back(t.kin[k] - t.kin[base]);
  }
  w.reg_integral = w.reg.back();
  return w;
}

int cmd_solve(const Options& o) {
  if (!(o.x0 > 0.0 && o.x1 > o.x0)) throw ParameterError("solve: need 0 < x0 < x1");
  const auto g = gamma_of(o);
  todaflow::Trajectory traj;
  if (o.rho.empty()) {
    todaflow::GlobalConfig cfg;
    cfg.even_extension = o.even_n;
    cfg.x_small = std::min(cfg.x_small, o.x0);
    cfg.x_far = std::max(cfg.x_far, o.x1 + 1.0);
    if (o.rel_tol) cfg.rel_tol = *o.rel_tol;
    if (o.abs_tol) cfg.quad_abs_tol = *o.abs_tol;
    cfg.samples = {o.x0, o.x1};
    auto sol = todaflow::solve_global(o.n, g, cfg);
    spdlog::info("global solution: rho = [{}], newton iterations {}, gamma residual {:.3g}",
                 fmt::join(sol.data.rho, ", "), sol.newton_iterations, sol.gamma_residual);
    traj = window(sol.trajectory, o.x0, o.x1);
  } else {
    datamaps::AsymptoticData a{o.n, g, parse_list(o.rho, "--rho")};
    if (a.rho.size() != g.size()) throw ShapeError("--rho and --gamma differ in length");
    todaflow::IntegratorConfig cfg;
    cfg.even_extension = o.even_n;
    if (o.rel_tol) cfg.rel_tol = *o.rel_tol;
    if (o.abs_tol) cfg.abs_tol = *o.abs_tol;
    const auto start = todaflow::init_from_asymptotics(a, o.x0, todaflow::InitOrder::first_correction, o.even_n);
    traj = todaflow::integrate(start, o.x1, cfg, o.n);
  }
  spdlog::info("{} points, {} accepted / {} rejected steps", traj.points.size(), traj.stats.accepted,
               traj.stats.rejected);
  if (o.out.empty()) {
    todaflow::write_csv(std::cout, traj);
  } else {
    std::ofstream f(o.out);
    if (!f) throw ParameterError("cannot open " + o.out);
    todaflow::write_csv(f, traj);
  }
  if (traj.stop == todaflow::StopReason::blow_up) {
    spdlog::error("blow-up: {}", traj.stop_detail);
    return blow_up;
  }
  if (traj.stop != todaflow::StopReason::completed) {
    spdlog::error("integration stopped: {}", traj.stop_detail);
    return numeric;
  }
  return ok;
}

todaflow::GlobalConfig global_config(const Options& o) {
  todaflow::GlobalConfig cfg;
  if (o.rel_tol) cfg.rel_tol = *o.rel_tol;
  if (o.abs_tol) cfg.quad_abs_tol = *o.abs_tol;
  return cfg;
}

int cmd_tau(const Options& o) {
  if (o.n != 3) throw UnsupportedError("tau is defined for n = 3");
  const auto g = gamma_of(o);
  const double x2 = o.x2.value_or(7.0);
  const double x1 = o.x0;
  const double lt = tauconst::log_tau(g, x1, x2, global_config(o));
  Json j;
  j["command"] = "tau";
  j["gamma"] = g;
  j["x1"] = x1;
  j["x2"] = x2;
  j["log_tau"] = lt;
  emit(o, j);
  return ok;
}

int cmd_constant(const Options& o) {
  if (o.n != 3) throw UnsupportedError("the constant problem is stated for n = 3");
  const auto g = gamma_of(o);
  tauconst::ConstantConfig cfg;
  cfg.global = global_config(o);
  if (o.x2) cfg.x2 = *o.x2;
  const double x1 = o.x0;
  cfg.x1_grid = {x1, x1 / 2.0, x1 / 4.0};
  const auto rep = tauconst::constant_numeric(g, cfg);
  spdlog::info("c_numeric {:.17g}, c_closed {:.17g}", rep.c_numeric, rep.c_closed);
  Json j;
  j["command"] = "constant";
  j["threshold"] = o.threshold;
  j["report"] = io::to_json(rep);
  j["pass"] = rep.abs_diff <= o.threshold;
  emit(o, j);
  return rep.abs_diff <= o.threshold ? ok : verification;
}

int cmd_verify(const Options& o) {
  std::vector<suites::Check> checks;
  if (o.samples < 1) throw ParameterError("--samples must be positive");
  if (o.suite == "specfun") {
    checks = suites::specfun_suite(o.samples, o.seed);
  } else if (o.suite == "genfun") {
    checks = suites::genfun_suite(o.n, o.samples, o.seed);
  } else if (o.suite == "symplectic") {
    checks = suites::symplectic_suite(o.n, o.samples, o.seed);
  } else if (o.suite == "roundtrip") {
    checks = suites::roundtrip_suite(o.n, o.samples, o.seed);
  } else {
    checks = suites::dynamics_suite(o.n, o.samples, o.seed);
  }
  bool all = true;
  Json list = Json::array();
  for (const auto& c : checks) {
    all = all && c.pass();
    Json e;
    e["name"] = c.name;
    e["max_residual"] = c.value;
    e["threshold"] = c.threshold;
    e["samples"] = c.samples;
    e["pass"] = c.pass();
    list.push_back(e);
    if (!c.pass()) spdlog::warn("{}: {:.3g} > {:.3g}", c.name, c.value, c.threshold);
  }
  Json j;
  j["command"] = "verify";
  j["suite"] = o.suite;
  j["n"] = o.n;
  j["seed"] = o.seed;
  j["samples"] = o.samples;
  j["checks"] = list;
  j["pass"] = all;
  emit(o, j);
  return all ? ok : verification;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("ttstar");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* lvl = std::getenv("TTSTAR_LOG");
  spdlog::set_level(lvl ? spdlog::level::from_str(lvl) : spdlog::level::warn);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  Options o;
  CLI::App app{"tt*-Toda numerics: data maps, global solutions, tau function and its constant"};
  app.require_subcommand(1);
  app.add_option("--out", o.out, "Write output to this file instead of stdout");
  app.add_flag("--reproducible", o.reproducible, "Omit the timestamp field");

  auto common = [&](CLI::App* s) {
    s->add_option("--n", o.n, "Number of the tt*-Toda system")->check(CLI::Range(1, 64));
    s->add_option("--gamma", o.gamma, "Reduced gamma, comma separated (use --gamma=-0.2,0.4 for a leading minus)");
    s->add_option("--out", o.out, "Write output to this file instead of stdout");
    s->add_flag("--reproducible", o.reproducible, "Omit the timestamp field");
  };
  auto tolerances = [&](CLI::App* s) {
    s->add_option("--rel-tol", o.rel_tol, "Integrator relative tolerance");
    s->add_option("--abs-tol", o.abs_tol, "Integrator absolute tolerance (quadratures for global solutions)");
  };

  auto* maps = app.add_subcommand("maps", "Asymptotic data, monodromy data and global rho");
  common(maps);
  maps->add_option("--rho", o.rho, "Reduced rho (defaults to the global rho)");

  auto* solve = app.add_subcommand("solve", "Trajectory CSV; global solution unless --rho is given");
  common(solve);
  tolerances(solve);
  solve->add_option("--rho", o.rho, "Reduced rho: integrate forward from x0 with this data");
  solve->add_option("--x0", o.x0, "Left end");
  solve->add_option("--x1", o.x1, "Right end");
  solve->add_flag("--even-n", o.even_n, "Enable the even-n extension");

  auto* tau = app.add_subcommand("tau", "log tau(x1, x2) on the global solution, n = 3");
  common(tau);
  tolerances(tau);
  tau->add_option("--x1", o.x0, "Lower limit")->default_val(0.01);
  tau->add_option("--x2", o.x2, "Upper limit");

  auto* constant = app.add_subcommand("constant", "Numerical vs closed-form constant of the tau function, n = 3");
  common(constant);
  tolerances(constant);
  constant->add_option("--x1", o.x0, "Largest x1 of the grid x1, x1/2, x1/4")->default_val(0.01);
  constant->add_option("--x2", o.x2, "Upper limit");
  constant->add_option("--threshold", o.threshold, "Exit 0 iff |c_numeric - c_closed| <= threshold");

  auto* verify = app.add_subcommand("verify", "Randomised property suites");
  common(verify);
  verify->add_option("--suite", o.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"specfun", "genfun", "symplectic", "roundtrip", "dynamics"}));
  verify->add_option("--seed", o.seed, "Seed");
  verify->add_option("--samples", o.samples, "Random samples per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : input;
  }

  try {
    if (*maps) return cmd_maps(o);
    if (*solve) return cmd_solve(o);
    if (*tau) return cmd_tau(o);
    if (*constant) return cmd_constant(o);
    return cmd_verify(o);
  } catch (const DomainError& e) {
    spdlog::error("{}", e.what());
    return input;
  } catch (const ShapeError& e) {
    spdlog::error("{}", e.what());
    return input;
  } catch (const UnsupportedError& e) {
    spdlog::error("{}", e.what());
    return input;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return numeric;
  }
}
