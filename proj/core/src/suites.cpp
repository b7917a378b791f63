#include "ttstar/suites.hpp"

#include <algorithm>
#include <cmath>

#include "ttstar/datamaps.hpp"
#include "ttstar/errors.hpp"
#include "ttstar/specialfn.hpp"
#include "ttstar/tauconst.hpp"
#include "ttstar/todaflow.hpp"

namespace ttstar::suites {
namespace {

todaflow::PhasePoint random_point(int L, Rng& rng) {
  todaflow::PhasePoint p;
  p.x = rng.uniform(0.1, 2.0);
  for (int i = 0; i < L; ++i) {
    p.w.push_back(rng.uniform(-0.5, 0.5));
    p.wt.push_back(rng.uniform(-1.0, 1.0));
  }
  return p;
}

// Five-point central difference of H in one coordinate of w (which = 0) or wt (which = 1).
double dH(const todaflow::PhasePoint& p, int n, int which, int i, double h) {
  auto at = [&](double d) {
    auto q = p;
    (which == 0 ? q.w : q.wt)[i] += d;
    return todaflow::hamiltonian(q, n);
  };
  return (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
}

// the truncation error of the h = 1e-4 central difference grows like h^2 / slack^2
constexpr double kGenfunSlack = 0.25;

}  // namespace

std::uint64_t Rng::next() {
  std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng::uniform(double a, double b) { return a + (b - a) * double(next() >> 11) * 0x1.0p-53; }

std::vector<double> random_generic_gamma(int n, Rng& rng, double bound, double slack) {
  const int L = datamaps::reduced_size(n);
  for (;;) {
    std::vector<double> g(L);
    for (double& v : g) v = rng.uniform(-bound, bound);
    if (datamaps::genericity_slack(n, g) > slack) return g;
  }
}

std::vector<Check> specfun_suite(int samples, std::uint64_t seed) {
  Rng rng(seed);
  Check oracle{"psi_m2 vs quadrature oracle on (0.01, 2]", 0.0, 1e-10, samples};
  for (int k = 0; k < samples; ++k) {
    const double z = rng.uniform(0.01, 2.0);
    oracle.value = std::max(oracle.value, std::abs(specialfn::psi_m2(z) - specialfn::psi_m2_oracle(z)));
  }
  Check rec{"Barnes G recursion on (0.05, 2.5)", 0.0, 1e-12, 100};
  for (int k = 0; k < 100; ++k) {
    const double z = rng.uniform(0.05, 2.5);
    const double r = specialfn::log_barnes_g(1.0 + z) - specialfn::log_gamma(z) - specialfn::log_barnes_g(z);
    rec.value = std::max(rec.value, std::abs(r));
  }
  Check lg{"log_gamma relative error vs std::lgamma on (0, 50]", 0.0, 1e-13, 400};
  for (int k = 0; k < 400; ++k) {
    const double z = k % 2 ? rng.uniform(1e-6, 50.0) : std::exp(rng.uniform(std::log(1e-6), std::log(50.0)));
    const double ref = std::lgamma(z);
    // near the zeros at 1 and 2 the error is measured against the local slope
    const double scale = std::max(std::abs(ref), std::abs(z - 1.0) * std::abs(z - 2.0) * 0.1 + 1e-300);
    lg.value = std::max(lg.value, std::abs(specialfn::log_gamma(z) - ref) / scale);
  }
  // psi_m2' = ln Gamma: decreasing on [1, 2], increasing on [2, 3]
  Check mono{"psi_m2 monotone pieces on [1, 2] and [2, 3] (violations)", 0.0, 0.0, 401};
  double prev = specialfn::psi_m2(1.0);
  for (int k = 1; k <= 400; ++k) {
    const double z = 1.0 + 2.0 * k / 400.0;
    const double cur = specialfn::psi_m2(z);
    if (z <= 2.0 ? !(cur < prev) : !(cur > prev)) mono.value += 1.0;
    prev = cur;
  }
  return {oracle, rec, lg, mono};
}

std::vector<Check> genfun_suite(int n, int samples, std::uint64_t seed, double h) {
  Rng rng(seed);
  Check c{"generating function dF/dm + log e (n=" + std::to_string(n) + ")", 0.0, 1e-6, samples};
  for (int k = 0; k < samples; ++k) {
    const auto g = random_generic_gamma(n, rng, 0.95, kGenfunSlack);
    std::vector<double> rho(g.size());
    for (double& r : rho) r = rng.uniform(-1.0, 1.0);
    c.value = std::max(c.value, datamaps::verify_generating_function(n, g, rho, h).max_residual);
  }
  return {c};
}

std::vector<Check> symplectic_suite(int n, int samples, std::uint64_t seed, double h) {
  Rng rng(seed);
  Check c{"symplectic Hessian asymmetry (n=" + std::to_string(n) + ")", 0.0, 1e-7, samples};
  for (int k = 0; k < samples; ++k) {
    const auto g = random_generic_gamma(n, rng);
    c.value = std::max(c.value, datamaps::verify_symplectic(n, g, h).max_residual);
  }
  return {c};
}

std::vector<Check> roundtrip_suite(int n, int samples, std::uint64_t seed) {
  Rng rng(seed);
  Check rt{"asymptotic -> monodromy -> asymptotic (n=" + std::to_string(n) + ")", 0.0, 1e-12, samples};
  Check gl{"log e at global rho (n=" + std::to_string(n) + ")", 0.0, 1e-12, samples};
  for (int k = 0; k < samples; ++k) {
    datamaps::AsymptoticData a{n, random_generic_gamma(n, rng), {}};
    for (std::size_t i = 0; i < a.gamma.size(); ++i) a.rho.push_back(rng.uniform(-2.0, 2.0));
    const auto back = datamaps::monodromy_to_asymptotic(datamaps::asymptotic_to_monodromy(a));
    for (std::size_t i = 0; i < a.gamma.size(); ++i)
      rt.value = std::max({rt.value, std::abs(back.gamma[i] - a.gamma[i]), std::abs(back.rho[i] - a.rho[i])});
    a.rho = datamaps::global_rho(n, a.gamma);
    for (double e : datamaps::asymptotic_to_monodromy(a).log_e) gl.value = std::max(gl.value, std::abs(e));
  }
  return {rt, gl};
}

std::vector<Check> dynamics_suite(int n, int samples, std::uint64_t seed) {
  const int L = todaflow::phase_dim(n);
  Rng rng(seed);

  Check grad{"vector field vs finite-difference gradient of H", 0.0, 1e-9, samples};
  Check quasi{"quasihomogeneity H(w, l wt; l x) = l H (relative)", 0.0, 1e-12, samples};
  Check logx{"log-x form: (wt)_X = x (wt)_x (relative)", 0.0, 1e-12, samples};
  for (int k = 0; k < samples; ++k) {
    const auto p = random_point(L, rng);
    const auto d = todaflow::vector_field(p, n);
    for (int i = 0; i < L; ++i) {
      grad.value = std::max(grad.value, std::abs(d.dwt[i] + dH(p, n, 0, i, 1e-3)) / (1.0 + std::abs(d.dwt[i])));
      grad.value = std::max(grad.value, std::abs(d.dw[i] - dH(p, n, 1, i, 1e-3)) / (1.0 + std::abs(d.dw[i])));
    }
    for (double lam : {rng.uniform(0.1, 10.0), 2.5, 1e3}) {
      const double lh = lam * todaflow::hamiltonian(p, n);
      quasi.value = std::max(quasi.value, todaflow::check_quasihomogeneity(p, lam, n) / (1.0 + std::abs(lh)));
    }
    const auto dl = todaflow::vector_field_logx(p, n);
    for (int i = 0; i < L; ++i)
      logx.value = std::max(logx.value, std::abs(dl.dwt[i] - p.x * d.dwt[i]) / (1.0 + std::abs(dl.dwt[i])));
  }

  // trivial solution
  Check triv_w{"trivial solution sup|w| on [0.01, 8]", 0.0, 1e-9, 1};
  Check triv_tau{"trivial solution log tau + L (x2^2 - x1^2) / 2", 0.0, 1e-9, 1};
  {
    datamaps::AsymptoticData zero{n, std::vector<double>(L, 0.0), std::vector<double>(L, 0.0)};
    const auto tr = todaflow::integrate(todaflow::init_from_asymptotics(zero, 0.01), 8.0, {}, n);
    for (const auto& p : tr.points)
      for (double w : p.w) triv_w.value = std::max(triv_w.value, std::abs(w));
    if (tr.stop != todaflow::StopReason::completed) triv_w.value = INFINITY;
    triv_tau.value = std::abs(tauconst::log_tau(tr, 0.01, 8.0) - (0.5 * L * (0.01 * 0.01 - 64.0)));
  }

  // identities along global solutions
  Check action{"action identity log tau - S - [x H] on global solutions", 0.0, 1e-7, 0};
  Check euler{"Euler identity sum wt w_x - 2H + d(xH)/dx", 0.0, 1e-6, 0};
  Check dhdx{"dH/dx along solutions vs partial H/partial x", 0.0, 1e-6, 0};
  const int trajectories = std::clamp(samples / 10, 1, 3);
  const double hd = 2e-3;  // relative stencil step
  for (int t = 0; t < trajectories; ++t) {
    const auto g = random_generic_gamma(n, rng, 0.5, 0.2);
    todaflow::GlobalConfig cfg;
    std::vector<double> centres;
    for (int k = 0; k < 25; ++k) centres.push_back(0.05 * std::pow(120.0, k / 24.0));  // 0.05 .. 6
    for (double c : centres)
      for (int j = -2; j <= 2; ++j) cfg.samples.push_back(c * (1.0 + j * hd));
    cfg.samples.push_back(0.01);
    cfg.samples.push_back(6.5);
    const auto sol = todaflow::solve_global(n, g, cfg);
    const auto& tr = sol.trajectory;
    ++action.samples;
    // identity on [0.01, 6.5]
    {
      const auto i1 = *tr.find(0.01), i2 = *tr.find(6.5);
      const auto& p1 = tr.points[i1];
      const auto& p2 = tr.points[i2];
      const double lt = tauconst::log_tau(tr, p1.x, p2.x);
      const double s = tauconst::classical_action(tr, p1.x, p2.x);
      const double b = p2.x * todaflow::hamiltonian(p2, n) - p1.x * todaflow::hamiltonian(p1, n);
      action.value = std::max(action.value, std::abs(lt - s - b));
      action.value = std::max(action.value, tauconst::action_identity_residual(tr));
    }
    for (double c : centres) {
      double H[5], xH[5];
      for (int j = -2; j <= 2; ++j) {
        const auto& p = tr.points[*tr.find(c * (1.0 + j * hd))];
        H[j + 2] = todaflow::hamiltonian(p, n);
        xH[j + 2] = p.x * H[j + 2];
      }
      const double h = c * hd;
      auto diff = [h](const double* f) { return (8.0 * (f[3] - f[1]) - (f[4] - f[0])) / (12.0 * h); };
      const auto& p0 = tr.points[*tr.find(c)];
      double wtw = 0.0;
      for (int i = 0; i < L; ++i) wtw += p0.wt[i] * p0.wt[i] / p0.x;
      euler.value = std::max(euler.value, std::abs(wtw - 2.0 * H[2] + diff(xH)));
      dhdx.value = std::max(dhdx.value, std::abs(diff(H) - todaflow::hamiltonian_dx(p0, n)));
      ++euler.samples;
      ++dhdx.samples;
    }
  }
  return {grad, quasi, logx, triv_w, triv_tau, action, euler, dhdx};
}

}  // namespace ttstar::suites
