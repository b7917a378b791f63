#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>

#include "ttstar/dopri5.hpp"
#include "ttstar/errors.hpp"
#include "ttstar/todaflow.hpp"

// Global solutions decay like Bessel K_0 modes of the linearised flow at large x.
// Forward integration from x ~ 0 is exponentially unstable against the I_0 modes,
// so the solution is shot backward from x_far, with the K_0 amplitudes tuned by
// Newton's method until the small-x readout reproduces gamma.

namespace ttstar::todaflow {
namespace {

// Per-mode error scale: the mode's own size, floored by the rounding level of the
// force projection (modes that vanish by symmetry only carry rounding noise).
constexpr double kRoundingFloor = 16.0 * std::numeric_limits<double>::epsilon();

// e^z - 1 - z without cancellation.
double expm1_minus_linear(double z) {
  if (std::abs(z) > 0.5) return std::expm1(z) - z;
  double term = z * z / 2.0, sum = term;
  for (int k = 3; k < 30 && std::abs(term) > 1e-17 * std::abs(sum); ++k) {
    term *= z / k;
    sum += term;
  }
  return sum;
}

struct ModeBasis {
  Eigen::MatrixXd V;     // columns are orthonormal modes
  Eigen::VectorXd rate;  // sqrt of eigenvalues
};

// Linearisation w'' + w'/x = M w at w = 0.
ModeBasis mode_basis(int n, int L, bool even) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(L, L);
  for (int i = 0; i < L; ++i) {
    M(i, i) = 8.0;
    if (i + 1 < L) M(i, i + 1) = M(i + 1, i) = -4.0;
  }
  M(0, 0) += 4.0;
  if (!even) M(L - 1, L - 1) += 4.0;
  (void)n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  return {es.eigenvectors(), es.eigenvalues().cwiseSqrt()};
}

struct Shot {
  bool ok = false;
  std::string why;
  AsymptoticData read;
  Trajectory traj;
};

class Shooter {
 public:
  Shooter(int n, bool even_ext, const GlobalConfig& cfg)
      : n_(n), even_ext_(even_ext), L_(phase_dim(n, even_ext)), cfg_(cfg), basis_(mode_basis(n, L_, n % 2 == 0)) {}

  int L() const { return L_; }
  const ModeBasis& basis() const { return basis_; }

  Shot shoot(const Eigen::VectorXd& c, bool record) const {
    const int L = L_;
    const int dim = 2 * L + 2;
    const Eigen::MatrixXd V = basis_.V;
    const bool even = n_ % 2 == 0;

    const Eigen::VectorXd lambda = basis_.rate.cwiseAbs2();
    // The linear part x M w is applied exactly in mode space; only the O(w^2)
    // remainder is projected, so rounding does not swamp the fast, small modes.
    auto rhs = [L, V, even, lambda](double x, std::span<const double> y, std::span<double> dy) {
      Eigen::Map<const Eigen::VectorXd> u(y.data(), L), ut(y.data() + L, L);
      const Eigen::VectorXd w = V * u;
      const Eigen::VectorXd wt = V * ut;
      Eigen::VectorXd r(L);
      double pot = 0.0;
      for (int i = 0; i < L; ++i) {
        const double wm = i == 0 ? -w[0] : w[i - 1];
        const double wp = i + 1 < L ? w[i + 1] : (even ? 0.0 : -w[L - 1]);
        const double a = 2.0 * (w[i] - wm), d = 2.0 * (wp - 2.0 * w[i] + wm);
        r[i] = -2.0 * x * (std::expm1(a) * std::expm1(d) + expm1_minus_linear(d));
        if (i > 0) pot += std::expm1(2.0 * (w[i] - w[i - 1]));
      }
      pot += even ? std::expm1(-2.0 * w[L - 1]) : 0.5 * std::expm1(-4.0 * w[L - 1]);
      pot += 0.5 * std::expm1(4.0 * w[0]);
      const Eigen::VectorXd ru = V.transpose() * r;
      const double k2 = wt.squaredNorm();
      for (int i = 0; i < L; ++i) {
        dy[i] = ut[i] / x;
        dy[L + i] = x * lambda[i] * u[i] + ru[i];
      }
      dy[2 * L] = k2 / (2.0 * x) - x * pot;
      dy[2 * L + 1] = k2 / x;
    };

    Dopri5::Settings s;
    s.rel_tol = cfg_.rel_tol;
    s.abs_tol.assign(dim, 1e-300);
    s.abs_tol[2 * L] = s.abs_tol[2 * L + 1] = cfg_.quad_abs_tol;
    s.max_step = 0.5;
    s.scale = [L, rel_tol = cfg_.rel_tol](std::span<const double> y0, std::span<const double> y1, std::span<double> sc) {
      double big = 0.0;
      for (int i = 0; i < 2 * L; ++i) big = std::max({big, std::abs(y0[i]), std::abs(y1[i])});
      for (int k = 0; k < L; ++k) {
        const double m = std::max({std::abs(y0[k]), std::abs(y1[k]), std::abs(y0[L + k]), std::abs(y1[L + k])});
        sc[k] = sc[L + k] = m + kRoundingFloor * big / rel_tol;
      }
      for (int i = 2 * L; i < 2 * L + 2; ++i) sc[i] = std::max(std::abs(y0[i]), std::abs(y1[i]));
    };
    Dopri5 solver(rhs, dim, s);

    const double xf = cfg_.x_far;
    std::vector<double> y(dim, 0.0);
    for (int k = 0; k < L; ++k) {
      const double r = basis_.rate[k];
      y[k] = c[k] * std::cyl_bessel_k(0.0, r * xf);
      y[L + k] = -c[k] * r * xf * std::cyl_bessel_k(1.0, r * xf);
    }

    // samples in decreasing x
    std::vector<double> samples;
    if (record) {
      for (double v : cfg_.samples)
        if (v > cfg_.x_small && v < xf) samples.push_back(v);
      std::sort(samples.begin(), samples.end(), std::greater<>());
      samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    }
    std::size_t next = 0;
    std::vector<std::pair<double, std::vector<double>>> rec;
    if (record) rec.emplace_back(xf, y);

    bool diverged = false;
    std::vector<double> tmp(dim);
    auto obs = [&](const Dopri5::StepView& v) {
      const auto yv = v.y1();
      if (record) {
        while (next < samples.size() && samples[next] > v.x1()) {
          if (samples[next] < v.x0()) {
            v.dense(samples[next], tmp);
            rec.emplace_back(samples[next], tmp);
          }
          ++next;
        }
        rec.emplace_back(v.x1(), std::vector<double>(yv.begin(), yv.end()));
      }
      for (int i = 0; i < 2 * L; ++i) {
        if (!std::isfinite(yv[i])) {
          diverged = true;
          return false;
        }
      }
      Eigen::Map<const Eigen::VectorXd> u(yv.data(), L);
      if ((V * u).cwiseAbs().maxCoeff() > cfg_.divergence_threshold) {
        diverged = true;
        return false;
      }
      return true;
    };
    const auto status = solver.integrate(xf, cfg_.x_small, y, obs);

    Shot shot;
    if (diverged || status != Dopri5::Status::completed) {
      shot.why = diverged ? "trajectory diverged" : "step size underflow";
      return shot;
    }
    shot.ok = true;
    shot.read = asymptotics_from_point(to_phase(cfg_.x_small, y), n_, even_ext_);
    if (record) {
      auto& tr = shot.traj;
      tr.n = n_;
      tr.even_extension = even_ext_;
      const double q0 = y[2 * L], k0 = y[2 * L + 1];
      for (auto it = rec.rbegin(); it != rec.rend(); ++it) {
        if (!tr.points.empty() && it->first <= tr.points.back().x) continue;
        tr.points.push_back(to_phase(it->first, it->second));
        tr.reg.push_back(it->second[2 * L] - q0);
        tr.kin.push_back(it->second[2 * L + 1] - k0);
      }
      tr.reg_integral = tr.reg.back();
      const auto& st = solver.stats();
      tr.stats = {st.accepted, st.rejected, st.rhs_evaluations, st.max_error_ratio};
    }
    return shot;
  }

 private:
  PhasePoint to_phase(double x, const std::vector<double>& y) const {
    const int L = L_;
    Eigen::Map<const Eigen::VectorXd> u(y.data(), L), ut(y.data() + L, L);
    const Eigen::VectorXd w = basis_.V * u, wt = basis_.V * ut;
    return {x, std::vector<double>(w.data(), w.data() + L), std::vector<double>(wt.data(), wt.data() + L)};
  }

  int n_;
  bool even_ext_;
  int L_;
  GlobalConfig cfg_;
  ModeBasis basis_;
};

struct NewtonState {
  int iterations = 0;
  double residual = INFINITY;
};

std::optional<Eigen::VectorXd> readout(const Shooter& sh, const Eigen::VectorXd& c) {
  const auto s = sh.shoot(c, false);
  if (!s.ok) return std::nullopt;
  return Eigen::Map<const Eigen::VectorXd>(s.read.gamma.data(), sh.L());
}

bool newton(const Shooter& sh, const GlobalConfig& cfg, const Eigen::VectorXd& target, Eigen::VectorXd& c,
            NewtonState& st) {
  const int L = sh.L();
  auto g = readout(sh, c);
  if (!g) return false;
  Eigen::VectorXd f = *g - target;
  st.residual = f.cwiseAbs().maxCoeff();

  for (int it = 0; it < cfg.max_newton; ++it) {
    if (st.residual <= cfg.newton_tol) return true;
    ++st.iterations;

    Eigen::MatrixXd J(L, L);
    std::vector<std::future<std::optional<Eigen::VectorXd>>> cols;
    std::vector<double> steps(L);
    for (int k = 0; k < L; ++k) {
      steps[k] = cfg.fd_step * std::max(std::abs(c[k]), 0.1);
      Eigen::VectorXd cp = c;
      cp[k] += steps[k];
      cols.push_back(std::async(std::launch::async, [&sh, cp] { return readout(sh, cp); }));
    }
    for (int k = 0; k < L; ++k) {
      auto gk = cols[k].get();
      if (!gk) return false;
      J.col(k) = (*gk - *g) / steps[k];
    }
    const Eigen::VectorXd dc = J.fullPivLu().solve(-f);
    if (!dc.allFinite()) return false;

    bool improved = false;
    for (double lam = 1.0; lam > 1e-4; lam *= 0.5) {
      const Eigen::VectorXd cn = c + lam * dc;
      auto gn = readout(sh, cn);
      if (!gn) continue;
      const Eigen::VectorXd fn = *gn - target;
      const double rn = fn.cwiseAbs().maxCoeff();
      if (rn < st.residual) {
        c = cn;
        g = gn;
        f = fn;
        st.residual = rn;
        improved = true;
        break;
      }
    }
    // A stall just above the tolerance is the rounding floor of the shot.
    if (!improved) return st.residual <= 100.0 * cfg.newton_tol;
  }
  return st.residual <= cfg.newton_tol;
}

}  // namespace

GlobalSolution solve_global(int n, std::span<const double> gamma, const GlobalConfig& cfg) {
  const int L = phase_dim(n, cfg.even_extension);
  if (static_cast<int>(gamma.size()) != L) throw ShapeError("gamma has the wrong length for n");
  datamaps::check_generic(n, gamma);
  if (!(cfg.x_small > 0.0) || !(cfg.x_far > cfg.x_small) || !(cfg.rel_tol > 0.0) || !(cfg.fd_step > 0.0))
    throw ParameterError("solve_global: need 0 < x_small < x_far and positive tolerances");
  for (double v : cfg.samples)
    if (v < cfg.x_small || v > cfg.x_far) throw ParameterError("solve_global: sample outside [x_small, x_far]");

  const Shooter sh(n, cfg.even_extension, cfg);
  const auto& B = sh.basis();
  const Eigen::Map<const Eigen::VectorXd> target(gamma.data(), L);
  // K_0(z) ~ -ln z near 0, so w ~ -sum c_k v_k ln x and c = -V^T gamma / 2 to linear order.
  auto linear_guess = [&](const Eigen::VectorXd& g) -> Eigen::VectorXd { return -0.5 * B.V.transpose() * g; };

  GlobalSolution sol;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(L);
  NewtonState st;
  st.residual = target.cwiseAbs().maxCoeff();
  if (st.residual > 0.0) {
    double t_done = 0.0, dt = 1.0;
    while (t_done < 1.0) {
      const double t = std::min(1.0, t_done + dt);
      Eigen::VectorXd guess = c + linear_guess(target) * (t - t_done);
      NewtonState stage;
      if (newton(sh, cfg, t * target, guess, stage)) {
        c = guess;
        t_done = t;
        dt = std::min(1.0, 2.0 * dt);
        ++sol.continuation_stages;
        st.residual = stage.residual;
      } else {
        dt *= 0.5;
        if (dt < 1.0 / 1024) throw NumericError("solve_global: Newton iteration failed to match gamma", stage.residual);
      }
      st.iterations += stage.iterations;
    }
  }

  Shot fin = sh.shoot(c, true);
  if (!fin.ok) throw NumericError("solve_global: final shot failed (" + fin.why + ")", st.residual);
  sol.data = {n, std::vector<double>(gamma.begin(), gamma.end()), fin.read.rho};
  sol.amplitudes.assign(c.data(), c.data() + L);
  sol.rates.assign(B.rate.data(), B.rate.data() + L);
  for (int k = 0; k < L; ++k) sol.modes.emplace_back(B.V.col(k).data(), B.V.col(k).data() + L);
  double r = 0.0;
  for (int i = 0; i < L; ++i) r = std::max(r, std::abs(fin.read.gamma[i] - gamma[i]));
  sol.gamma_residual = r;
  sol.newton_iterations = st.iterations;
  sol.trajectory = std::move(fin.traj);
  return sol;
}

}  // namespace ttstar::todaflow
