// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ttstar/errors.hpp"
#include "ttstar/suites.hpp"
#include "ttstar/tauconst.hpp"
#include "ttstar/todaflow.hpp"

namespace {

using namespace ttstar;
using Clock = std::chrono::steady_clock;

// tolerances
constexpr double kTrivialNumeric = 1e-6;
constexpr double kTrivialClosed = 1e-12;
constexpr double kConstant = 1e-3;
constexpr double kTailRelative = 0.05;
constexpr std::uint64_t kSeed = 7;
constexpr int kSamples = 50;

// runtime budgets, seconds
constexpr double kBudgetTrivial = 5.0;
constexpr double kBudgetPerPoint = 60.0;
constexpr double kBudgetGenfun = 10.0;
constexpr double kBudgetSymplectic = 10.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome from_checks(const std::vector<suites::Check>& checks, Outcome o = {}) {
  for (const auto& c : checks) {
    if (!c.pass()) {
      o.pass = false;
      o.detail += " [" + c.name + fmt(": %.3g > %.3g]", c.value, c.threshold);
    }
  }
  return o;
}

double worst(const std::vector<suites::Check>& checks) {
  double r = 0.0;
  for (const auto& c : checks) r = std::max(r, c.value / (c.threshold > 0 ? c.threshold : 1.0));
  return r;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const auto r = tauconst::constant_numeric(std::vector{0.0, 0.0});
  const double dt = seconds_since(t0);
  Outcome o;
  o.pass = std::abs(r.c_numeric) <= kTrivialNumeric && std::abs(r.c_closed) <= kTrivialClosed && dt <= kBudgetTrivial;
  o.detail = fmt("c_numeric=%.3g c_closed=%.3g time=%.2fs", r.c_numeric, r.c_closed, dt);
  return o;
}

Outcome criterion2() {
  const std::vector<std::vector<double>> points{{0.3, 0.1}, {0.1, -0.1}, {0.5, 0.2}, {-0.2, 0.4}, {0.25, -0.35}};
  Outcome o;
  double worst_diff = 0.0, slowest = 0.0;
  for (const auto& g : points) {
    const auto t0 = Clock::now();
    const auto r = tauconst::constant_numeric(g);
    const double dt = seconds_since(t0);
    worst_diff = std::max(worst_diff, r.abs_diff);
    slowest = std::max(slowest, dt);
    if (!(r.abs_diff <= kConstant) || dt > kBudgetPerPoint) {
      o.pass = false;
      o.detail += fmt(" (%g, %g)", g[0], g[1]) + fmt(": diff=%.3g", r.abs_diff);
    }
  }
  o.detail = fmt("max|c_numeric-c_closed|=%.3g slowest=%.2fs", worst_diff, slowest) + o.detail;
  return o;
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  std::vector<suites::Check> all;
  for (int n : {1, 3, 4, 5})
    for (auto& c : suites::genfun_suite(n, kSamples, kSeed, 1e-4)) all.push_back(c);
  const double dt = seconds_since(t0);
  double m = 0.0;
  for (const auto& c : all) m = std::max(m, c.value);
  auto o = from_checks(all);
  o.pass = o.pass && dt <= kBudgetGenfun;
  o.detail = fmt("max residual=%.3g time=%.2fs", m, dt) + o.detail;
  return o;
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  std::vector<suites::Check> all;
  for (int n : {3, 5})
    for (auto& c : suites::symplectic_suite(n, kSamples, kSeed, 1e-4)) all.push_back(c);
  const double dt = seconds_since(t0);
  double m = 0.0;
  for (const auto& c : all) m = std::max(m, c.value);
  auto o = from_checks(all);
  o.pass = o.pass && dt <= kBudgetSymplectic;
  o.detail = fmt("max asymmetry=%.3g time=%.2fs", m, dt) + o.detail;
  return o;
}

Outcome criterion5() {
  std::vector<suites::Check> all;
  for (int n = 1; n <= 6; ++n)
    for (auto& c : suites::roundtrip_suite(n, kSamples, kSeed)) all.push_back(c);
  double m = 0.0;
  for (const auto& c : all) m = std::max(m, c.value);
  auto o = from_checks(all);
  o.detail = fmt("max componentwise error=%.3g", m) + o.detail;
  return o;
}

Outcome criterion6() {
  const auto checks = suites::specfun_suite(kSamples, kSeed);
  auto o = from_checks(checks);
  o.detail = fmt("oracle=%.3g recursion=%.3g", checks[0].value, checks[1].value) + o.detail;
  return o;
}

Outcome criterion7() {
  std::vector<suites::Check> all;
  for (int n : {1, 3, 5})
    for (auto& c : suites::dynamics_suite(n, 100, kSeed)) all.push_back(c);
  auto o = from_checks(all);
  o.detail = fmt("worst residual/threshold=%.3g over %g checks", worst(all), double(all.size())) + o.detail;
  return o;
}

Outcome criterion8() {
  const std::vector g{0.3, 0.1};
  todaflow::GlobalConfig cfg;
  for (int k = 0; k <= 40; ++k) cfg.samples.push_back(5.0 + 0.05 * k);
  const auto sol = todaflow::solve_global(3, g, cfg);
  const double s1 = todaflow::tail_amplitude_s1(g);
  const double predicted = -s1 * std::pow(2.0, -1.75) / std::sqrt(std::numbers::pi);
  const auto fit = todaflow::fit_tail(sol.trajectory, 0, 2.0 * std::numbers::sqrt2, 5.0, 7.0);
  const double rel = std::abs(fit.amplitude / predicted - 1.0);
  Outcome o;
  o.pass = rel <= kTailRelative;
  o.detail = fmt("fitted=%.6f predicted=%.6f rel=%.3g", fit.amplitude, predicted, rel);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 constant, trivial point", criterion1},
      {"2 constant, generic points", criterion2},
      {"3 generating function", criterion3},
      {"4 symplectic preservation", criterion4},
      {"5 data-map round trip", criterion5},
      {"6 special-function kernel", criterion6},
      {"7 dynamics identities", criterion7},
      {"8 large-x tail", criterion8},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
