#include "ttstar/todaflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "ttstar/dopri5.hpp"
#include "ttstar/errors.hpp"

namespace ttstar::todaflow {
namespace {

struct Closure {
  int L;
  bool even;
  // w_i with the boundary conditions w_{-1} = -w_0 and w_L = -w_{L-1} (odd) or 0 (even).
  double at(const double* w, int i) const {
    if (i < 0) return -w[0];
    if (i >= L) return even ? 0.0 : -w[L - 1];
    return w[i];
  }
};

Closure closure(int n, bool even_extension) { return {phase_dim(n, even_extension), n % 2 == 0}; }

void require_point(const PhasePoint& p, int L) {
  if (!(p.x > 0.0) || !std::isfinite(p.x)) throw ParameterError("phase point needs x > 0");
  if (static_cast<int>(p.w.size()) != L || static_cast<int>(p.wt.size()) != L)
    throw ShapeError("phase point has w/wt of length " + std::to_string(p.w.size()) + "/" +
                     std::to_string(p.wt.size()) + ", expected " + std::to_string(L));
}

double potential_sum(const Closure& c, const double* w) {
  double s = 0.0;
  for (int i = 1; i < c.L; ++i) s += std::exp(2.0 * (w[i] - w[i - 1]));
  if (c.even) return s + std::exp(-2.0 * w[c.L - 1]) + 0.5 * std::exp(4.0 * w[0]);
  return s + 0.5 * (std::exp(-4.0 * w[c.L - 1]) + std::exp(4.0 * w[0]));
}

double potential_sum_m1(const Closure& c, const double* w) {
  double s = 0.0;
  for (int i = 1; i < c.L; ++i) s += std::expm1(2.0 * (w[i] - w[i - 1]));
  if (c.even) return s + std::expm1(-2.0 * w[c.L - 1]) + 0.5 * std::expm1(4.0 * w[0]);
  return s + 0.5 * (std::expm1(-4.0 * w[c.L - 1]) + std::expm1(4.0 * w[0]));
}

double kinetic2(const double* wt, int L) {
  double s = 0.0;
  for (int i = 0; i < L; ++i) s += wt[i] * wt[i];
  return s;
}

// dwt_i/dx = -2x (e^{2(w_{i+1}-w_i)} - e^{2(w_i-w_{i-1})})
void force(const Closure& c, double x, const double* w, double* out) {
  for (int i = 0; i < c.L; ++i) {
    const double wm = c.at(w, i - 1), wi = w[i], wp = c.at(w, i + 1);
    out[i] = -2.0 * x * std::exp(2.0 * (wi - wm)) * std::expm1(2.0 * (wp - 2.0 * wi + wm));
  }
}

PhasePoint to_point(double x, std::span<const double> y, int L) {
  PhasePoint p;
  p.x = x;
  p.w.assign(y.begin(), y.begin() + L);
  p.wt.assign(y.begin() + L, y.begin() + 2 * L);
  return p;
}

// Leading power-law corrections to w and x dw/dx at small x on the full periodic lattice.
void small_x_corrections(int n, std::span<const double> gamma_full, std::span<const double> rho_full, double x,
                         int L, std::vector<double>& delta, std::vector<double>& xdelta) {
  const int N = n + 1;
  auto term = [&](int i, double& d, double& xd) {
    const int im = (i - 1 + N) % N;
    const int ii = i % N;
    const double g = gamma_full[ii] - gamma_full[im];
    const double a = std::exp(rho_full[ii] - rho_full[im]);
    const double pw = 2.0 * a * std::pow(x, 2.0 + g);
    d = pw / ((2.0 + g) * (2.0 + g));
    xd = pw / (2.0 + g);
  };
  delta.assign(L, 0.0);
  xdelta.assign(L, 0.0);
  for (int i = 0; i < L; ++i) {
    double d0, x0, d1, x1;
    term(i, d0, x0);
    term(i + 1, d1, x1);
    delta[i] = d0 - d1;
    xdelta[i] = x0 - x1;
  }
}

}  // namespace

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::completed:
      return "completed";
    case StopReason::blow_up:
      return "blow_up";
    case StopReason::step_underflow:
      return "step_underflow";
  }
  return "unknown";
}

std::optional<std::size_t> Trajectory::find(double x) const {
  auto it = std::lower_bound(points.begin(), points.end(), x * (1.0 - 1e-13),
                             [](const PhasePoint& p, double v) { return p.x < v; });
  if (it != points.end() && std::abs(it->x - x) <= 1e-13 * std::abs(x)) return std::size_t(it - points.begin());
  return std::nullopt;
}

int phase_dim(int n, bool even_extension) {
  if (n < 1) throw ShapeError("n must be a positive integer");
  if (n % 2 == 0 && !even_extension)
    throw UnsupportedError("even n needs the even-n extension (the Hamiltonian is stated for odd n)");
  return (n - 1) / 2 + 1;
}

double hamiltonian(const PhasePoint& p, int n, bool even_extension) {
  const auto c = closure(n, even_extension);
  require_point(p, c.L);
  return kinetic2(p.wt.data(), c.L) / (2.0 * p.x) - p.x * potential_sum(c, p.w.data());
}

double hamiltonian_trivial(double x, int n, bool even_extension) {
  const auto c = closure(n, even_extension);
  return -(c.L + (c.even ? 0.5 : 0.0)) * x;
}

double hamiltonian_regularized(const PhasePoint& p, int n, bool even_extension) {
  const auto c = closure(n, even_extension);
  require_point(p, c.L);
  return kinetic2(p.wt.data(), c.L) / (2.0 * p.x) - p.x * potential_sum_m1(c, p.w.data());
}

double hamiltonian_dx(const PhasePoint& p, int n, bool even_extension) {
  const auto c = closure(n, even_extension);
  require_point(p, c.L);
  return -kinetic2(p.wt.data(), c.L) / (2.0 * p.x * p.x) - potential_sum(c, p.w.data());
}

Derivatives vector_field(const PhasePoint& p, int n, bool even_extension) {
  const auto c = closure(n, even_extension);
  require_point(p, c.L);
  Derivatives d{std::vector<double>(c.L), std::vector<double>(c.L)};
  for (int i = 0; i < c.L; ++i) d.dw[i] = p.wt[i] / p.x;
  force(c, p.x, p.w.data(), d.dwt.data());
  return d;
}

Derivatives vector_field_logx(const PhasePoint& p, int n, bool even_extension) {
  auto d = vector_field(p, n, even_extension);
  d.dw = p.wt;
  for (double& v : d.dwt) v *= p.x;
  return d;
}

PhasePoint init_from_asymptotics(const AsymptoticData& a, double x0, InitOrder order, bool even_extension) {
  const int L = phase_dim(a.n, even_extension);
  if (static_cast<int>(a.gamma.size()) != L || static_cast<int>(a.rho.size()) != L)
    throw ShapeError("asymptotic data has the wrong length for n");
  datamaps::check_generic(a.n, a.gamma);
  if (!(x0 > 0.0 && x0 <= 0.1)) throw ParameterError("x0 must lie in (0, 0.1]");

  PhasePoint p{x0, std::vector<double>(L), std::vector<double>(L)};
  const double lx = std::log(x0);
  for (int i = 0; i < L; ++i) {
    p.w[i] = 0.5 * a.gamma[i] * lx + 0.5 * a.rho[i];
    p.wt[i] = 0.5 * a.gamma[i];
  }
  if (order == InitOrder::first_correction) {
    const auto gf = datamaps::expand_full(a.n, a.gamma);
    const auto rf = datamaps::expand_full(a.n, a.rho);
    std::vector<double> d, xd;
    small_x_corrections(a.n, gf, rf, x0, L, d, xd);
    for (int i = 0; i < L; ++i) {
      p.w[i] += d[i];
      p.wt[i] += xd[i];
    }
  }
  return p;
}

AsymptoticData asymptotics_from_point(const PhasePoint& p, int n, bool even_extension) {
  const int L = phase_dim(n, even_extension);
  require_point(p, L);
  const double lx = std::log(p.x);
  AsymptoticData a{n, std::vector<double>(L), std::vector<double>(L)};
  for (int i = 0; i < L; ++i) {
    a.gamma[i] = 2.0 * p.wt[i];
    a.rho[i] = 2.0 * p.w[i] - a.gamma[i] * lx;
  }
  std::vector<double> d, xd;
  for (int it = 0; it < 200; ++it) {
    const auto gf = datamaps::expand_full(n, a.gamma);
    const auto rf = datamaps::expand_full(n, a.rho);
    small_x_corrections(n, gf, rf, p.x, L, d, xd);
    double change = 0.0;
    for (int i = 0; i < L; ++i) {
      const double g = 2.0 * (p.wt[i] - xd[i]);
      const double r = 2.0 * (p.w[i] - d[i]) - g * lx;
      change = std::max({change, std::abs(g - a.gamma[i]), std::abs(r - a.rho[i])});
      a.gamma[i] = g;
      a.rho[i] = r;
    }
    if (change == 0.0) break;
  }
  return a;
}

Trajectory integrate(const PhasePoint& start, double x_end, const IntegratorConfig& cfg, int n) {
  const auto c = closure(n, cfg.even_extension);
  require_point(start, c.L);
  if (!(x_end > start.x)) throw ParameterError("integrate: x_end must exceed the start point");
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) throw ParameterError("tolerances must be positive");
  const int L = c.L;

  auto rhs = [c, L](double x, std::span<const double> y, std::span<double> dy) {
    const double* w = y.data();
    const double* wt = y.data() + L;
    for (int i = 0; i < L; ++i) dy[i] = wt[i] / x;
    force(c, x, w, dy.data() + L);
    const double k2 = kinetic2(wt, L);
    dy[2 * L] = k2 / (2.0 * x) - x * potential_sum_m1(c, w);
    dy[2 * L + 1] = k2 / x;
  };

  Dopri5::Settings s;
  s.rel_tol = cfg.rel_tol;
  s.abs_tol.assign(2 * L + 2, cfg.abs_tol);
  s.max_step = cfg.max_step;
  Dopri5 solver(rhs, 2 * L + 2, s);

  Trajectory tr;
  tr.n = n;
  tr.even_extension = cfg.even_extension;
  tr.points.push_back(start);
  tr.reg.push_back(0.0);
  tr.kin.push_back(0.0);

  std::vector<double> y(2 * L + 2, 0.0);
  std::copy(start.w.begin(), start.w.end(), y.begin());
  std::copy(start.wt.begin(), start.wt.end(), y.begin() + L);

  bool blew_up = false;
  auto obs = [&](const Dopri5::StepView& v) {
    const auto yv = v.y1();
    tr.points.push_back(to_point(v.x1(), yv, L));
    tr.reg.push_back(yv[2 * L]);
    tr.kin.push_back(yv[2 * L + 1]);
    double wmax = 0.0;
    for (int i = 0; i < L; ++i) wmax = std::max(wmax, std::abs(yv[i]));
    if (!(wmax <= cfg.blowup_threshold)) {
      blew_up = true;
      return false;
    }
    return true;
  };
  const auto status = solver.integrate(start.x, x_end, y, obs);

  const auto& st = solver.stats();
  tr.stats = {st.accepted, st.rejected, st.rhs_evaluations, st.max_error_ratio};
  tr.reg_integral = tr.reg.back();
  char buf[160];
  if (blew_up) {
    tr.stop = StopReason::blow_up;
    std::snprintf(buf, sizeof buf, "|w| exceeded %g at x=%.17g", cfg.blowup_threshold, tr.points.back().x);
    tr.stop_detail = buf;
  } else if (status != Dopri5::Status::completed) {
    tr.stop = StopReason::step_underflow;
    std::snprintf(buf, sizeof buf, "step size underflow at x=%.17g", solver.last_x());
    tr.stop_detail = buf;
  }
  return tr;
}

double tail_amplitude_s1(std::span<const double> gamma, int n) {
  if (n != 3) throw UnsupportedError("s1 is only available for n = 3");
  if (gamma.size() != 2) throw ShapeError("s1 needs gamma = (gamma0, gamma1)");
  const double q = std::numbers::pi / 4.0;
  return -2.0 * std::cos(q * (gamma[0] + 1.0)) - 2.0 * std::cos(q * (gamma[1] + 3.0));
}

double check_quasihomogeneity(const PhasePoint& p, double lambda, int n, bool even_extension) {
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  PhasePoint q = p;
  q.x *= lambda;
  for (double& v : q.wt) v *= lambda;
  return std::abs(hamiltonian(q, n, even_extension) - lambda * hamiltonian(p, n, even_extension));
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  const int L = traj.points.empty() ? phase_dim(traj.n, traj.even_extension)
                                    : static_cast<int>(traj.points.front().w.size());
  os << "x";
  for (int i = 0; i < L; ++i) os << ",w" << i;
  for (int i = 0; i < L; ++i) os << ",wt" << i;
  os << ",H,reg_integral\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    const auto& p = traj.points[k];
    put(p.x);
    for (double v : p.w) os << ',', put(v);
    for (double v : p.wt) os << ',', put(v);
    os << ',';
    put(hamiltonian(p, traj.n, traj.even_extension));
    os << ',';
    put(traj.reg[k]);
    os << '\n';
  }
  if (traj.stop != StopReason::completed) os << "# stopped: " << to_string(traj.stop) << ": " << traj.stop_detail << '\n';
}

TailFit fit_tail(const Trajectory& traj, int component, double rate, double xa, double xb) {
  TailFit f;
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  for (const auto& p : traj.points) {
    if (p.x < xa || p.x > xb) continue;
    const double v = p.w.at(component) * std::sqrt(p.x) * std::exp(rate * p.x);
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++f.samples;
  }
  if (f.samples == 0) throw ParameterError("fit_tail: no trajectory samples in the window");
  f.amplitude = sum / f.samples;
  f.spread = (hi - lo) / std::abs(f.amplitude);
  return f;
}

}  // namespace ttstar::todaflow
