#pragma once

#include <span>
#include <vector>

#include "ttstar/todaflow.hpp"

// Tau function log tau(x1, x2) = int_{x1}^{x2} H dx along global solutions and the
// constant C = lim (log tau + x2^2 + (g0^2 + g1^2)/8 ln x1), n = 3.

namespace ttstar::tauconst {

struct ConstantConfig {
  std::vector<double> x1_grid{1e-2, 5e-3, 2.5e-3};  // geometric, decreasing
  double x2 = 7.0;
  todaflow::GlobalConfig global;
};

struct ConstantReport {
  std::vector<double> gamma;
  double c_numeric = 0.0;
  double c_closed = 0.0;
  double abs_diff = 0.0;
  std::vector<double> x1_grid;
  std::vector<double> c_values;  // C(x1, x2) on the grid
  double x2_used = 0.0;
  double extrapolation_exponent = 0.0;
  double tail_bound = 0.0;
  std::vector<double> rho;  // read out from the global trajectory
  double gamma_residual = 0.0;
  int newton_iterations = 0;
  todaflow::IntegratorStats integrator_stats;
};

// log tau from a trajectory that contains points at x1 and x2.
double log_tau(const todaflow::Trajectory& traj, double x1, double x2);
// Solves for the global solution with this gamma first.
double log_tau(std::span<const double> gamma, double x1, double x2, const todaflow::GlobalConfig& cfg = {});

// S = int_{x1}^{x2} (sum wt_i^2 / x - H) dx; whole trajectory if no range is given.
double classical_action(const todaflow::Trajectory& traj);
double classical_action(const todaflow::Trajectory& traj, double x1, double x2);

// |log tau - S - (x2 H(x2) - x1 H(x1))| over the whole trajectory.
double action_identity_residual(const todaflow::Trajectory& traj);

ConstantReport constant_numeric(std::span<const double> gamma, const ConstantConfig& cfg = {});

// -(g0^2 + g1^2)/8 - F(rho, m)/2 + 4 (psi(1/4) + psi(1/2) + psi(3/4)) with rho = global_rho, m = -gamma/2.
double constant_closed(std::span<const double> gamma);

// C + a x1^p through three points on a geometric grid.
struct Extrapolation {
  double limit = 0.0;
  double exponent = 0.0;
};
Extrapolation extrapolate_geometric(std::span<const double> x1, std::span<const double> values);

}  // namespace ttstar::tauconst
