#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttstar/datamaps.hpp"

// Radial tt*-Toda flow as a non-autonomous Hamiltonian system in x = |t|.
//
//   H = (1/2x) sum wt_i^2 - x sum_{i=1}^{L-1} e^{2(w_i - w_{i-1})} - (x/2)(e^{-4 w_{L-1}} + e^{4 w_0})
//
// with L = floor((n-1)/2) + 1 and wt_i = x dw_i/dx. Odd n only, unless the even-n
// extension is requested: there w_{n/2} = 0 and the last boundary term becomes
// -x e^{-2 w_{L-1}}.

namespace ttstar::todaflow {

using datamaps::AsymptoticData;

struct PhasePoint {
  double x = 0.0;
  std::vector<double> w;
  std::vector<double> wt;
};

struct Derivatives {
  std::vector<double> dw;
  std::vector<double> dwt;
};

struct IntegratorConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-12;
  double max_step = 0.5;
  double blowup_threshold = 5.0;
  bool even_extension = false;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  double max_error_ratio = 0.0;
};

enum class StopReason { completed, blow_up, step_underflow };
const char* to_string(StopReason r);

struct Trajectory {
  int n = 0;
  bool even_extension = false;
  std::vector<PhasePoint> points;  // strictly increasing x
  std::vector<double> reg;         // int (H - H_trivial) dx from points.front().x, per point
  std::vector<double> kin;         // int sum wt^2 / x dx from points.front().x, per point
  double reg_integral = 0.0;       // reg.back()
  IntegratorStats stats;
  StopReason stop = StopReason::completed;
  std::string stop_detail;

  // Index of the point at x (relative match 1e-13), if present.
  std::optional<std::size_t> find(double x) const;
};

// L; throws UnsupportedError for even n without the extension.
int phase_dim(int n, bool even_extension = false);

double hamiltonian(const PhasePoint& p, int n, bool even_extension = false);
// H along w = wt = 0: -L x (odd n), -(L + 1/2) x (even-n extension).
double hamiltonian_trivial(double x, int n, bool even_extension = false);
// H - hamiltonian_trivial, evaluated without cancellation.
double hamiltonian_regularized(const PhasePoint& p, int n, bool even_extension = false);
// Explicit partial derivative dH/dx at fixed (w, wt).
double hamiltonian_dx(const PhasePoint& p, int n, bool even_extension = false);

Derivatives vector_field(const PhasePoint& p, int n, bool even_extension = false);
// Derivatives with respect to X = ln x.
Derivatives vector_field_logx(const PhasePoint& p, int n, bool even_extension = false);

enum class InitOrder { leading, first_correction };

// w_i = (gamma_i/2) ln x0 + rho_i/2, wt_i = gamma_i/2, optionally with the first
// power-law correction from the neighbouring exponentials.
PhasePoint init_from_asymptotics(const AsymptoticData& a, double x0, InitOrder order = InitOrder::leading,
                                 bool even_extension = false);

// Inverse of init_from_asymptotics(first_correction) at a point near x = 0.
AsymptoticData asymptotics_from_point(const PhasePoint& p, int n, bool even_extension = false);

Trajectory integrate(const PhasePoint& start, double x_end, const IntegratorConfig& cfg, int n);

double tail_amplitude_s1(std::span<const double> gamma, int n = 3);

// |H(w, lambda wt; lambda x) - lambda H(w, wt; x)|
double check_quasihomogeneity(const PhasePoint& p, double lambda, int n, bool even_extension = false);

// Header x,w0..,wt0..,H,reg_integral; one row per point; footer comment on early stop.
void write_csv(std::ostream& os, const Trajectory& traj);

// Solutions smooth on (0, inf), found by shooting backward from large x.

struct GlobalConfig {
  double x_far = 12.0;      // start of the backward integration
  double x_small = 1e-6;    // where (gamma, rho) are read out
  double rel_tol = 1e-12;
  double quad_abs_tol = 1e-15;
  double newton_tol = 1e-10;  // on max |gamma_read - gamma|
  int max_newton = 40;
  double fd_step = 1e-6;
  double divergence_threshold = 50.0;
  std::vector<double> samples;  // extra x values recorded by dense output
  bool even_extension = false;
};

struct GlobalSolution {
  AsymptoticData data;             // gamma requested, rho read out at x_small
  std::vector<double> amplitudes;  // coefficients of the decaying Bessel modes
  std::vector<double> rates;       // decay rates sqrt(eigenvalue) of those modes
  std::vector<std::vector<double>> modes;  // orthonormal mode vectors
  double gamma_residual = 0.0;
  int newton_iterations = 0;
  int continuation_stages = 0;
  Trajectory trajectory;  // increasing x, x_small .. x_far
};

GlobalSolution solve_global(int n, std::span<const double> gamma, const GlobalConfig& cfg = {});

struct TailFit {
  double amplitude = 0.0;  // mean of w_i(x) sqrt(x) e^{rate x} over the window
  double spread = 0.0;     // (max - min) / |mean| over the window
  int samples = 0;
};

TailFit fit_tail(const Trajectory& traj, int component, double rate, double xa, double xb);

}  // namespace ttstar::todaflow
