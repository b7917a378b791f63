#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ttstar/datamaps.hpp"
#include "ttstar/errors.hpp"
#include "ttstar/specialfn.hpp"
#include "ttstar/suites.hpp"

using namespace ttstar;
using namespace ttstar::datamaps;

namespace {
const double ln2 = std::numbers::ln2;

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<double> neg(std::vector<double> v) {
  for (double& x : v) x = -x;
  return v;
}
}  // namespace

TEST_CASE("expand_full") {
  CHECK(expand_full(3, std::vector{0.3, 0.1}) == std::vector{0.3, 0.1, -0.1, -0.3});
  CHECK(expand_full(2, std::vector{0.4}) == std::vector{0.4, 0.0, -0.4});
  CHECK(expand_full(1, std::vector{0.0}) == std::vector{0.0, 0.0});
  CHECK(reduced_size(5) == 3);
  CHECK(reduced_size(6) == 3);
  CHECK_THROWS_AS(expand_full(3, std::vector{0.1}), ShapeError);
  suites::Rng rng(3);
  for (int n = 1; n <= 8; ++n) {
    std::vector<double> v(reduced_size(n));
    for (double& x : v) x = rng.uniform(-1, 1);
    const auto f = expand_full(n, v);
    REQUIRE(static_cast<int>(f.size()) == n + 1);
    for (int i = 0; i <= n; ++i) CHECK(f[i] + f[n - i] == 0.0);
  }
}

TEST_CASE("x_k products") {
  CHECK(std::abs(x_k(0, std::vector{0.0, 0.0}, 1) - std::sqrt(std::numbers::pi)) <= 1e-14);
  CHECK(std::abs(x_k(0, std::vector{0.5, -0.5}, 1) - 1.2254167024651776) <= 1e-14);
  const double prod = std::exp(specialfn::log_gamma(0.25) + specialfn::log_gamma(0.5) + specialfn::log_gamma(0.75));
  CHECK(std::abs(prod - 7.874804972861204) <= 1e-12);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(x_k(k, std::vector{0.0, 0.0, 0.0, 0.0}, 3) - prod) <= 1e-12);
}

TEST_CASE("x_k names the offending index") {
  try {
    log_x_k(0, std::vector{-1.5, 1.5}, 1);
    FAIL("expected GenericityError");
  } catch (const GenericityError& e) {
    CHECK(std::string(e.what()).find("k=0, j=1") != std::string::npos);
  }
}

TEST_CASE("genericity") {
  CHECK_NOTHROW(check_generic(3, std::vector{0.3, 0.1}));
  CHECK_THROWS_AS(check_generic(3, std::vector{1.9, 0.0}), GenericityError);
  // gap gamma_1 - gamma_0 = -2 exactly
  CHECK_THROWS_AS(check_generic(3, std::vector{1.0, -1.0}), GenericityError);
  CHECK(std::abs(genericity_slack(3, std::vector{0.3, 0.1}) - 1.4) <= 1e-15);
}

TEST_CASE("asymptotic_to_monodromy") {
  SUBCASE("trivial") {
    const auto m = asymptotic_to_monodromy({3, {0, 0}, {0, 0}});
    CHECK(m.m == std::vector{-0.0, -0.0});
    CHECK(max_abs_diff(m.log_e, {0, 0}) <= 1e-15);
  }
  SUBCASE("global rho gives e = 1") {
    const std::vector g{0.3, 0.1};
    const auto m = asymptotic_to_monodromy({3, g, global_rho(3, g)});
    CHECK(max_abs_diff(m.log_e, {0, 0}) <= 1e-12);
  }
  SUBCASE("rho = 0 at gamma = (0.3, 0.1)") {
    const std::vector g{0.3, 0.1};
    const auto m = asymptotic_to_monodromy({3, g, {0, 0}});
    CHECK(max_abs_diff(m.m, {-0.15, -0.05}) <= 1e-16);
    // X_k on the full list of -gamma
    const auto f = neg(expand_full(3, g));
    CHECK(std::abs(m.log_e[0] - (log_x_k(3, f, 3) - log_x_k(0, f, 3) + 0.6 * ln2)) <= 1e-14);
    CHECK(std::abs(m.log_e[1] - (log_x_k(2, f, 3) - log_x_k(1, f, 3) + 0.2 * ln2)) <= 1e-14);
    CHECK(std::abs(m.log_e[0] + 0.28409349752572985) <= 1e-14);
  }
  SUBCASE("anti-symmetry of the full extension") {
    const auto m = asymptotic_to_monodromy({5, {0.3, -0.2, 0.4}, {0.1, 0.2, 0.3}});
    const auto fm = expand_full(5, m.m), fe = expand_full(5, m.log_e);
    for (int i = 0; i <= 5; ++i) {
      CHECK(fm[i] + fm[5 - i] == 0.0);
      CHECK(fe[i] + fe[5 - i] == 0.0);
    }
  }
}

TEST_CASE("monodromy_to_asymptotic") {
  const auto a = monodromy_to_asymptotic({3, {0, 0}, {0, 0}});
  CHECK(max_abs_diff(a.gamma, {0, 0}) == 0.0);
  CHECK(max_abs_diff(a.rho, {0, 0}) <= 1e-15);

  const auto b = monodromy_to_asymptotic({1, {-0.25}, {0}});
  CHECK(std::abs(b.gamma[0] - 0.5) == 0.0);
  const double rho = -ln2 + specialfn::log_gamma(0.25) - specialfn::log_gamma(0.75);
  CHECK(std::abs(b.rho[0] - rho) <= 1e-14);
  CHECK(std::abs(b.rho[0] - 0.39159439270683678) <= 1e-14);

  const AsymptoticData c{3, {0.3, 0.1}, {0, 0}};
  const auto back = monodromy_to_asymptotic(asymptotic_to_monodromy(c));
  CHECK(max_abs_diff(back.gamma, c.gamma) <= 1e-12);
  CHECK(max_abs_diff(back.rho, c.rho) <= 1e-12);
}

TEST_CASE("global_rho") {
  for (int n = 1; n <= 6; ++n) CHECK(max_abs_diff(global_rho(n, std::vector<double>(reduced_size(n), 0.0)),
                                                  std::vector<double>(reduced_size(n), 0.0)) <= 1e-15);
  const auto r = global_rho(1, std::vector{0.5});
  CHECK(std::abs(r[0] - 0.3916) <= 1e-4);
  suites::Rng rng(21);
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k < 20; ++k) {
      const auto g = suites::random_generic_gamma(n, rng);
      const auto m = asymptotic_to_monodromy({n, g, global_rho(n, g)});
      for (double e : m.log_e) CHECK(std::abs(e) <= 1e-12);
    }
  }
}

TEST_CASE("gen_fun_F") {
  const double psi = specialfn::psi_m2(0.25) + specialfn::psi_m2(0.5) + specialfn::psi_m2(0.75);
  CHECK(std::abs(gen_fun_F(3, std::vector{0.0, 0.0}, std::vector{0.0, 0.0}) - 8.0 * psi) <= 1e-12);
  const double f1 = -0.1 + 0.02 * ln2 + specialfn::psi_m2(0.4) + specialfn::psi_m2(0.6);
  CHECK(std::abs(gen_fun_F(1, std::vector{1.0}, std::vector{0.1}) - f1) <= 1e-14);
  // dF/drho_i = -m_i
  const std::vector m{0.1, -0.07};
  const double a = gen_fun_F(3, std::vector{0.3, 0.2}, m), b = gen_fun_F(3, std::vector{0.5, 0.2}, m);
  CHECK(std::abs((b - a) / 0.2 + m[0]) <= 1e-13);
}

TEST_CASE("verify_generating_function") {
  CHECK(verify_generating_function(3, std::vector{0.3, 0.1}, std::vector{0.2, -0.4}).max_residual <= 1e-6);
  CHECK(verify_generating_function(1, std::vector{0.5}, std::vector{1.7}).max_residual <= 1e-6);
  CHECK(verify_generating_function(1, std::vector{0.5}, std::vector{-3.0}).max_residual <= 1e-6);
  // both sides vanish at the origin, but F is not even in m: the h^2 truncation (~5e-9) remains
  CHECK(verify_generating_function(3, std::vector{0.0, 0.0}, std::vector{0.0, 0.0}).max_residual <= 1e-8);
  CHECK_THROWS_AS(verify_generating_function(3, std::vector{0.3, 0.1}, std::vector{0.0, 0.0}, 0.5), ParameterError);
  CHECK_THROWS_AS(verify_generating_function(3, std::vector{0.3, 0.1}, std::vector{0.0, 0.0}, -1e-4), ParameterError);
}

TEST_CASE("verify_symplectic") {
  CHECK(verify_symplectic(1, std::vector{0.5}).max_residual <= 1e-12);
  CHECK(verify_symplectic(3, std::vector{0.3, 0.1}).max_residual <= 1e-7);
  suites::Rng rng(2);
  CHECK(verify_symplectic(5, suites::random_generic_gamma(5, rng)).max_residual <= 1e-7);
}

TEST_CASE("suites") {
  for (int n : {1, 3, 4, 5})
    for (const auto& c : suites::genfun_suite(n, 50, 7)) {
      INFO(c.name << " = " << c.value);
      CHECK(c.pass());
    }
  for (int n : {3, 5})
    for (const auto& c : suites::symplectic_suite(n, 50, 7)) {
      INFO(c.name << " = " << c.value);
      CHECK(c.pass());
    }
  for (int n = 1; n <= 6; ++n)
    for (const auto& c : suites::roundtrip_suite(n, 50, 7)) {
      INFO(c.name << " = " << c.value);
      CHECK(c.pass());
    }
}
