#include "ttstar/tauconst.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ttstar/datamaps.hpp"
#include "ttstar/errors.hpp"
#include "ttstar/specialfn.hpp"

namespace ttstar::tauconst {
namespace {

void require_n3(std::span<const double> gamma) {
  if (gamma.size() != 2) throw ShapeError("the constant problem is stated for n = 3: gamma = (gamma0, gamma1)");
}

std::size_t index_at(const todaflow::Trajectory& traj, double x) {
  auto i = traj.find(x);
  if (!i) throw ParameterError("trajectory has no sample at x = " + std::to_string(x));
  return *i;
}

// H_trivial = -k x
double trivial_slope(const todaflow::Trajectory& traj) {
  return -todaflow::hamiltonian_trivial(1.0, traj.n, traj.even_extension);
}

}  // namespace

double log_tau(const todaflow::Trajectory& traj, double x1, double x2) {
  if (!(x1 > 0.0 && x2 > x1)) throw ParameterError("log_tau: need 0 < x1 < x2");
  const auto i1 = index_at(traj, x1), i2 = index_at(traj, x2);
  const double a = traj.points[i1].x, b = traj.points[i2].x;
  return (traj.reg[i2] - traj.reg[i1]) - 0.5 * trivial_slope(traj) * (b * b - a * a);
}

double log_tau(std::span<const double> gamma, double x1, double x2, const todaflow::GlobalConfig& cfg) {
  require_n3(gamma);
  if (!(x1 > 0.0 && x2 > x1)) throw ParameterError("log_tau: need 0 < x1 < x2");
  auto g = cfg;
  g.x_small = std::min(g.x_small, x1);
  g.x_far = std::max(g.x_far, x2 + 1.0);
  g.samples.push_back(x1);
  g.samples.push_back(x2);
  const auto sol = todaflow::solve_global(3, gamma, g);
  return log_tau(sol.trajectory, x1, x2);
}

double classical_action(const todaflow::Trajectory& traj, double x1, double x2) {
  if (!(x1 > 0.0 && x2 > x1)) throw ParameterError("classical_action: need 0 < x1 < x2");
  const auto i1 = index_at(traj, x1), i2 = index_at(traj, x2);
  const double a = traj.points[i1].x, b = traj.points[i2].x;
  return (traj.kin[i2] - traj.kin[i1]) - (traj.reg[i2] - traj.reg[i1]) + 0.5 * trivial_slope(traj) * (b * b - a * a);
}

double classical_action(const todaflow::Trajectory& traj) {
  if (traj.points.size() < 2) throw ParameterError("classical_action: trajectory has fewer than two points");
  return classical_action(traj, traj.points.front().x, traj.points.back().x);
}

double action_identity_residual(const todaflow::Trajectory& traj) {
  if (traj.points.size() < 2) throw ParameterError("action identity: trajectory has fewer than two points");
  const auto& p1 = traj.points.front();
  const auto& p2 = traj.points.back();
  const double lt = log_tau(traj, p1.x, p2.x);
  const double s = classical_action(traj, p1.x, p2.x);
  const double boundary = p2.x * todaflow::hamiltonian(p2, traj.n, traj.even_extension) -
                          p1.x * todaflow::hamiltonian(p1, traj.n, traj.even_extension);
  return std::abs(lt - s - boundary);
}

double constant_closed(std::span<const double> gamma) {
  require_n3(gamma);
  const auto rho = datamaps::global_rho(3, gamma);
  const std::vector<double> m{-0.5 * gamma[0], -0.5 * gamma[1]};
  const double F = datamaps::gen_fun_F(3, rho, m);
  const double psi =
      specialfn::psi_m2(0.25) + specialfn::psi_m2(0.5) + specialfn::psi_m2(0.75);
  return -(gamma[0] * gamma[0] + gamma[1] * gamma[1]) / 8.0 - 0.5 * F + 4.0 * psi;
}

Extrapolation extrapolate_geometric(std::span<const double> x1, std::span<const double> values) {
  if (x1.size() < 3 || values.size() != x1.size())
    throw ParameterError("extrapolation needs at least three grid points with one value each");
  const std::size_t k = x1.size() - 3;
  const double q = x1[k] / x1[k + 1];
  if (!(q > 1.0) || std::abs(x1[k + 1] / x1[k + 2] - q) > 1e-9 * q)
    throw ParameterError("x1 grid must be geometric and decreasing");
  const double c1 = values[k], c2 = values[k + 1], c3 = values[k + 2];
  const double d1 = c2 - c1, d2 = c3 - c2;
  const std::vector<double> xs(x1.begin(), x1.end()), vs(values.begin(), values.end());
  if (d1 == 0.0 && d2 == 0.0) return {c3, 0.0};
  if (!(d1 * d2 > 0.0) || !(std::abs(d2) < std::abs(d1)))
    throw ExtrapolationError("C(x1) is not monotonically converging on the x1 grid", xs, vs);
  const double p = std::log(d1 / d2) / std::log(q);
  return {c3 + d2 / (std::pow(q, p) - 1.0), p};
}

ConstantReport constant_numeric(std::span<const double> gamma, const ConstantConfig& cfg) {
  require_n3(gamma);
  datamaps::check_generic(3, gamma);
  if (cfg.x1_grid.size() < 3) throw ParameterError("constant_numeric: x1 grid needs three points");
  if (!(cfg.x1_grid.front() < cfg.x2)) throw ParameterError("constant_numeric: x2 must exceed the x1 grid");
  for (double v : cfg.x1_grid)
    if (!(v > 0.0)) throw ParameterError("constant_numeric: x1 grid must be positive");

  auto g = cfg.global;
  g.x_small = std::min(g.x_small, *std::min_element(cfg.x1_grid.begin(), cfg.x1_grid.end()));
  g.x_far = std::max(g.x_far, cfg.x2 + 1.0);
  g.samples.insert(g.samples.end(), cfg.x1_grid.begin(), cfg.x1_grid.end());
  g.samples.push_back(cfg.x2);
  const auto sol = todaflow::solve_global(3, gamma, g);

  ConstantReport rep;
  rep.gamma.assign(gamma.begin(), gamma.end());
  rep.x1_grid = cfg.x1_grid;
  rep.x2_used = cfg.x2;
  const double g2 = gamma[0] * gamma[0] + gamma[1] * gamma[1];
  for (double x1 : cfg.x1_grid) {
    const double lt = log_tau(sol.trajectory, x1, cfg.x2);
    rep.c_values.push_back(lt + cfg.x2 * cfg.x2 + g2 / 8.0 * std::log(x1));
  }
  const auto ex = extrapolate_geometric(rep.x1_grid, rep.c_values);
  rep.c_numeric = ex.limit;
  rep.extrapolation_exponent = ex.exponent;
  rep.c_closed = constant_closed(gamma);
  rep.abs_diff = std::abs(rep.c_numeric - rep.c_closed);
  rep.tail_bound = std::abs(todaflow::tail_amplitude_s1(gamma)) * std::sqrt(cfg.x2) *
                   std::exp(-2.0 * std::numbers::sqrt2 * cfg.x2);
  rep.rho = sol.data.rho;
  rep.gamma_residual = sol.gamma_residual;
  rep.newton_iterations = sol.newton_iterations;
  rep.integrator_stats = sol.trajectory.stats;
  return rep;
}

}  // namespace ttstar::tauconst
