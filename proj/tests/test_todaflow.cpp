#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "ttstar/datamaps.hpp"
#include "ttstar/errors.hpp"
#include "ttstar/suites.hpp"
#include "ttstar/todaflow.hpp"

using namespace ttstar;
using namespace ttstar::todaflow;

TEST_CASE("hamiltonian") {
  CHECK(hamiltonian({1.0, {0, 0}, {0, 0}}, 3) == -2.0);
  CHECK(hamiltonian({2.0, {0}, {1}}, 1) == -1.75);
  const double h = 0.125 - std::exp(-0.6) - 0.5 * (std::exp(0.8) + std::exp(0.4));
  CHECK(std::abs(hamiltonian({1.0, {0.1, -0.2}, {0.3, 0.4}}, 3) - h) <= 1e-15);
  CHECK(std::abs(hamiltonian({1.0, {0.1, -0.2}, {0.3, 0.4}}, 3) - -2.2824944491608954) <= 1e-14);
  CHECK(hamiltonian_trivial(3.0, 3) == -6.0);
  CHECK(hamiltonian_trivial(3.0, 4, true) == -7.5);
  const PhasePoint p{0.7, {0.01, -0.02, 0.3}, {0.1, 0.2, 0.05}};
  CHECK(std::abs(hamiltonian_regularized(p, 5) - (hamiltonian(p, 5) - hamiltonian_trivial(0.7, 5))) <= 1e-14);
}

TEST_CASE("even n needs the extension") {
  CHECK_THROWS_AS(hamiltonian({1.0, {0, 0}, {0, 0}}, 4), UnsupportedError);
  CHECK_THROWS_AS(phase_dim(2), UnsupportedError);
  CHECK(phase_dim(4, true) == 2);
  CHECK(hamiltonian({1.0, {0, 0}, {0, 0}}, 4, true) == -2.5);
  CHECK_THROWS_AS(hamiltonian({1.0, {0}, {0, 0}}, 3), ShapeError);
  CHECK_THROWS_AS(hamiltonian({0.0, {0, 0}, {0, 0}}, 3), ParameterError);
}

TEST_CASE("vector field") {
  const auto d = vector_field({1.0, {0, 0}, {0, 0}}, 3);
  CHECK(d.dw == std::vector{0.0, 0.0});
  CHECK(d.dwt == std::vector{0.0, 0.0});
  const auto e = vector_field({1.0, {0.1}, {0.0}}, 1);
  CHECK(std::abs(e.dwt[0] - 4.0 * std::sinh(0.4)) <= 1e-14);
  CHECK(std::abs(e.dwt[0] - 1.643009303211262) <= 1e-14);
}

TEST_CASE("even-n extension matches the reduced equations") {
  // n = 2: w = (w0, 0, -w0), so (x w0_x)_x / x = 2 e^{2(w0 - w_{-1})}... checked against H by central differences
  const PhasePoint p{0.8, {0.13}, {0.2}};
  const auto d = vector_field(p, 2, true);
  auto H = [&](double w) { return hamiltonian({p.x, {w}, p.wt}, 2, true); };
  const double h = 1e-4;
  CHECK(std::abs(d.dwt[0] + (H(0.13 + h) - H(0.13 - h)) / (2 * h)) <= 1e-7);
  // direct form: dwt0/dx = 2x (e^{4 w0} - e^{-2 w0})
  CHECK(std::abs(d.dwt[0] - 2.0 * 0.8 * (std::exp(4 * 0.13) - std::exp(-2 * 0.13))) <= 1e-14);
}

TEST_CASE("log-x form") {
  const PhasePoint p{0.37, {0.2, -0.1}, {0.3, -0.6}};
  const auto d = vector_field(p, 3), l = vector_field_logx(p, 3);
  CHECK(l.dw == p.wt);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(l.dwt[i] - p.x * d.dwt[i]) <= 1e-12 * (1 + std::abs(l.dwt[i])));
  const auto z = vector_field_logx({1.0, {0, 0}, {0, 0}}, 3);
  CHECK(z.dw == std::vector{0.0, 0.0});
  CHECK(z.dwt == std::vector{0.0, 0.0});
}

TEST_CASE("quasihomogeneity") {
  const PhasePoint p{0.9, {0.2, -0.3}, {0.5, -0.25}};
  CHECK(check_quasihomogeneity(p, 1.0, 3) == 0.0);
  CHECK(check_quasihomogeneity(p, 2.5, 3) <= 1e-12 * std::abs(2.5 * hamiltonian(p, 3)));
  CHECK(check_quasihomogeneity(p, 1e3, 3) <= 1e-12 * std::abs(1e3 * hamiltonian(p, 3)));
}

TEST_CASE("init_from_asymptotics") {
  const auto z = init_from_asymptotics({3, {0, 0}, {0, 0}}, 0.05);
  CHECK(z.w == std::vector{0.0, 0.0});
  CHECK(z.wt == std::vector{0.0, 0.0});
  const auto p = init_from_asymptotics({3, {0.3, 0.1}, {1, -1}}, 0.01);
  CHECK(std::abs(p.w[0] - (0.15 * std::log(0.01) + 0.5)) <= 1e-15);
  CHECK(std::abs(p.w[1] - (0.05 * std::log(0.01) - 0.5)) <= 1e-15);
  CHECK(p.wt == std::vector{0.15, 0.05});
  CHECK_THROWS_AS(init_from_asymptotics({3, {0, 0}, {0, 0}}, 0.5), ParameterError);
  CHECK_THROWS_AS(init_from_asymptotics({3, {0, 0}, {0, 0}}, -0.01), ParameterError);

  // corrected initialisation inverts back to the data
  const datamaps::AsymptoticData a{3, {0.3, 0.1}, datamaps::global_rho(3, std::vector{0.3, 0.1})};
  const auto q = init_from_asymptotics(a, 1e-4, InitOrder::first_correction);
  const auto back = asymptotics_from_point(q, 3);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(back.gamma[i] - a.gamma[i]) <= 1e-12);
    CHECK(std::abs(back.rho[i] - a.rho[i]) <= 1e-12);
  }
}

TEST_CASE("forward integration from x0 and x0/2 agree at x = 1") {
  const std::vector g{0.3, 0.1};
  const datamaps::AsymptoticData a{3, g, datamaps::global_rho(3, g)};
  auto w_at_1 = [&](double x0) {
    const auto tr = integrate(init_from_asymptotics(a, x0, InitOrder::first_correction), 1.0, {}, 3);
    REQUIRE(tr.stop == StopReason::completed);
    return tr.points.back().w;
  };
  const auto u = w_at_1(0.01), v = w_at_1(0.005);
  CHECK(std::abs(u[0] - v[0]) <= 1e-3);
  CHECK(std::abs(u[1] - v[1]) <= 1e-3);
}

TEST_CASE("trivial solution") {
  const auto tr = integrate(init_from_asymptotics({3, {0, 0}, {0, 0}}, 0.01), 8.0, {}, 3);
  CHECK(tr.stop == StopReason::completed);
  CHECK(tr.points.front().x == 0.01);
  CHECK(tr.points.back().x == 8.0);
  double sup = 0.0;
  for (const auto& p : tr.points)
    for (double w : p.w) sup = std::max(sup, std::abs(w));
  CHECK(sup <= 1e-9);
  CHECK(std::abs(tr.reg_integral) <= 1e-9);
  for (std::size_t k = 1; k < tr.points.size(); ++k) CHECK(tr.points[k].x > tr.points[k - 1].x);
}

TEST_CASE("non-global data blows up") {
  const std::vector g{0.3, 0.1};
  auto rho = datamaps::global_rho(3, g);
  rho[0] += 0.5;
  const auto tr = integrate(init_from_asymptotics({3, g, rho}, 0.01), 8.0, {}, 3);
  CHECK(tr.stop == StopReason::blow_up);
  CHECK(tr.points.back().x < 8.0);
  CHECK(std::isfinite(tr.reg_integral));
  std::ostringstream os;
  write_csv(os, tr);
  CHECK(os.str().find("# stopped: blow_up") != std::string::npos);
}

TEST_CASE("forward integration with global rho is unstable") {
  // the exponentially growing modes amplify the O(x0^eps) initialisation error
  const std::vector g{0.3, 0.1};
  const auto tr = integrate(init_from_asymptotics({3, g, datamaps::global_rho(3, g)}, 0.01), 8.0, {}, 3);
  CHECK(tr.stop == StopReason::blow_up);
}

TEST_CASE("global solution decays") {
  const std::vector g{0.3, 0.1};
  GlobalConfig cfg;
  cfg.samples = {0.01, 2.0, 3.0, 4.0, 5.0, 6.0};
  const auto sol = solve_global(3, g, cfg);
  CHECK(sol.gamma_residual <= cfg.newton_tol);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(sol.data.rho[i] - datamaps::global_rho(3, g)[i]) <= 1e-7);
  const auto& tr = sol.trajectory;
  CHECK(tr.stop == StopReason::completed);
  double prev = INFINITY;
  for (double x : {2.0, 3.0, 4.0, 5.0, 6.0}) {
    const auto& p = tr.points[*tr.find(x)];
    const double a = std::max(std::abs(p.w[0]), std::abs(p.w[1]));
    CHECK(a < prev);
    prev = a;
  }
  CHECK(prev < 1e-8);
}

TEST_CASE("global solutions for other odd n") {
  // Away from n = 3 the smooth solutions of this Hamiltonian sit at
  // rho = global_rho + gamma ln(4 / (n + 1)): the 2 gamma ln 2 term acts as gamma ln(n + 1).
  const std::vector<std::vector<double>> cases{{0.4}, {0.3, -0.1, 0.2}, {0.3, 0.17, 0.04, -0.09}};
  for (const auto& g : cases) {
    const int n = 2 * static_cast<int>(g.size()) - 1;
    const auto sol = solve_global(n, g);
    const auto r = datamaps::global_rho(n, g);
    CHECK(sol.gamma_residual <= 1e-10);
    for (std::size_t i = 0; i < g.size(); ++i) {
      INFO("n = " << n << ", i = " << i);
      CHECK(std::abs(sol.data.rho[i] - r[i] - g[i] * std::log(4.0 / (n + 1))) <= 1e-8);
    }
  }
}

TEST_CASE("step-size robustness") {
  const std::vector g{0.3, 0.1};
  GlobalConfig a, b;
  a.rel_tol = 1e-10;
  b.rel_tol = 5e-11;
  a.samples = b.samples = {4.0};
  const auto sa = solve_global(3, g, a), sb = solve_global(3, g, b);
  const auto& pa = sa.trajectory.points[*sa.trajectory.find(4.0)];
  const auto& pb = sb.trajectory.points[*sb.trajectory.find(4.0)];
  for (int i = 0; i < 2; ++i) CHECK(std::abs(pa.w[i] - pb.w[i]) <= 10 * a.rel_tol);
}

TEST_CASE("s1 and the large-x tail") {
  CHECK(std::abs(tail_amplitude_s1(std::vector{0.0, 0.0})) <= 1e-15);
  const double s1 = tail_amplitude_s1(std::vector{0.3, 0.1});
  CHECK(std::abs(s1 - (-2 * std::cos(0.325 * std::numbers::pi) - 2 * std::cos(0.775 * std::numbers::pi))) <= 1e-15);
  CHECK(std::abs(s1 - 0.47582) <= 1e-5);
  CHECK_THROWS_AS(tail_amplitude_s1(std::vector{0.1, 0.2, 0.3}, 5), UnsupportedError);

  GlobalConfig cfg;
  for (int k = 0; k <= 40; ++k) cfg.samples.push_back(5.0 + 0.05 * k);
  const auto sol = solve_global(3, std::vector{0.3, 0.1}, cfg);
  const double predicted = -s1 * std::pow(2.0, -1.75) / std::sqrt(std::numbers::pi);
  const auto fit = fit_tail(sol.trajectory, 0, 2.0 * std::numbers::sqrt2, 5.0, 7.0);
  CHECK(fit.samples >= 41);
  CHECK(std::abs(fit.amplitude / predicted - 1.0) <= 0.05);
}

TEST_CASE("suite") {
  for (int n : {1, 3, 5})
    for (const auto& c : suites::dynamics_suite(n, 100, 7)) {
      INFO(n << ": " << c.name << " = " << c.value);
      CHECK(c.pass());
    }
}
