#include "ttstar/datamaps.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "ttstar/errors.hpp"
#include "ttstar/specialfn.hpp"

namespace ttstar::datamaps {
namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_n(int n) {
  if (n < 1) throw ShapeError("n must be a positive integer, got " + std::to_string(n));
}

void require_reduced(int n, std::span<const double> v, const char* what) {
  require_n(n);
  if (static_cast<int>(v.size()) != reduced_size(n)) {
    std::ostringstream os;
    os << what << " has length " << v.size() << ", expected " << reduced_size(n) << " for n=" << n;
    throw ShapeError(os.str());
  }
}

int wrap(int i, int period) { return ((i % period) + period) % period; }

}  // namespace

int reduced_size(int n) {
  require_n(n);
  return (n - 1) / 2 + 1;
}

std::vector<double> expand_full(int n, std::span<const double> reduced) {
  require_reduced(n, reduced, "reduced list");
  std::vector<double> full(reduced.begin(), reduced.end());
  if (n % 2 == 0) full.push_back(0.0);
  for (auto it = reduced.rbegin(); it != reduced.rend(); ++it) full.push_back(-*it);
  return full;
}

double log_x_k(int k, std::span<const double> gamma_full, int n) {
  require_n(n);
  if (static_cast<int>(gamma_full.size()) != n + 1) throw ShapeError("full gamma list must have n+1 entries");
  if (k < 0 || k > n) throw ShapeError("x_k: index out of range");
  double s = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double arg = (gamma_full[k] - gamma_full[wrap(k + j, n + 1)] + 2.0 * j) / (2.0 * (n + 1));
    if (!(arg > 0.0)) {
      std::ostringstream os;
      os << "genericity violated: Gamma argument " << arg << " <= 0 at (k=" << k << ", j=" << j << ")";
      throw GenericityError(os.str(), k);
    }
    s += specialfn::log_gamma(arg);
  }
  return s;
}

double x_k(int k, std::span<const double> gamma_full, int n) { return std::exp(log_x_k(k, gamma_full, n)); }

double genericity_slack(int n, std::span<const double> gamma) {
  const auto full = expand_full(n, gamma);
  double slack = 2.0;
  for (int i = 0; i <= n; ++i) {
    const double gap = full[wrap(i + 1, n + 1)] - full[i];
    slack = std::min(slack, 2.0 - std::abs(gap));
  }
  return slack;
}

void check_generic(int n, std::span<const double> gamma, double margin) {
  const auto full = expand_full(n, gamma);
  for (int i = 0; i <= n; ++i) {
    const double gap = full[wrap(i + 1, n + 1)] - full[i];
    if (!(std::abs(gap) < 2.0 - margin)) {
      std::ostringstream os;
      os << "genericity violated: gap gamma_" << (i + 1) % (n + 1) << " - gamma_" << i << " = " << gap
         << " is outside (-2, 2) with margin " << margin;
      throw GenericityError(os.str(), i);
    }
  }
}

std::vector<double> connection_terms(int n, std::span<const double> gamma) {
  require_reduced(n, gamma, "gamma");
  std::vector<double> neg(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) neg[i] = -gamma[i];
  const auto full = expand_full(n, neg);
  std::vector<double> c(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const int k = static_cast<int>(i);
    c[i] = log_x_k(n - k, full, n) - log_x_k(k, full, n);
  }
  return c;
}

MonodromyData asymptotic_to_monodromy(const AsymptoticData& a, double margin) {
  require_reduced(a.n, a.gamma, "gamma");
  require_reduced(a.n, a.rho, "rho");
  check_generic(a.n, a.gamma, margin);
  const auto c = connection_terms(a.n, a.gamma);
  MonodromyData md{a.n, {}, {}};
  for (std::size_t i = 0; i < a.gamma.size(); ++i) {
    md.m.push_back(-0.5 * a.gamma[i]);
    md.log_e.push_back(a.rho[i] + 2.0 * kLn2 * a.gamma[i] + c[i]);
  }
  return md;
}

AsymptoticData monodromy_to_asymptotic(const MonodromyData& md, double margin) {
  require_reduced(md.n, md.m, "m");
  require_reduced(md.n, md.log_e, "log_e");
  AsymptoticData a{md.n, {}, {}};
  for (double mi : md.m) a.gamma.push_back(-2.0 * mi);
  check_generic(md.n, a.gamma, margin);
  const auto c = connection_terms(md.n, a.gamma);
  for (std::size_t i = 0; i < md.m.size(); ++i) a.rho.push_back(md.log_e[i] - 2.0 * kLn2 * a.gamma[i] - c[i]);
  return a;
}

std::vector<double> global_rho(int n, std::span<const double> gamma, double margin) {
  require_reduced(n, gamma, "gamma");
  check_generic(n, gamma, margin);
  auto rho = connection_terms(n, gamma);
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = -2.0 * kLn2 * gamma[i] - rho[i];
  return rho;
}

double gen_fun_F(int n, std::span<const double> rho, std::span<const double> m) {
  require_reduced(n, rho, "rho");
  require_reduced(n, m, "m");
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    lin += rho[i] * m[i];
    quad += m[i] * m[i];
  }
  const auto full = expand_full(n, m);
  double psi = 0.0;
  for (int k = 0; k <= n; ++k) {
    for (int j = 1; j <= n; ++j) {
      const double arg = (full[wrap(k - j, n + 1)] - full[k] + j) / double(n + 1);
      if (!(arg > 0.0)) {
        std::ostringstream os;
        os << "genericity violated: psi^(-2) argument " << arg << " <= 0 at (k=" << k << ", j=" << j << ")";
        throw GenericityError(os.str(), k);
      }
      psi += specialfn::psi_m2(arg);
    }
  }
  return -lin + 2.0 * kLn2 * quad + 0.5 * (n + 1) * psi;
}

ResidualReport verify_generating_function(int n, std::span<const double> gamma, std::span<const double> rho,
                                          double h) {
  require_reduced(n, gamma, "gamma");
  require_reduced(n, rho, "rho");
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("finite-difference step must be positive");
  check_generic(n, gamma);
  if (genericity_slack(n, gamma) <= 4.0 * h)
    throw ParameterError("finite-difference step too large for the genericity margin of gamma");

  const auto md = asymptotic_to_monodromy({n, {gamma.begin(), gamma.end()}, {rho.begin(), rho.end()}});
  std::vector<double> m = md.m;
  ResidualReport rep;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double m0 = m[i];
    m[i] = m0 + h;
    const double fp = gen_fun_F(n, rho, m);
    m[i] = m0 - h;
    const double fm = gen_fun_F(n, rho, m);
    m[i] = m0;
    const double r = std::abs((fp - fm) / (2.0 * h) + md.log_e[i]);
    if (r > rep.max_residual || rep.worst_index < 0) {
      rep.max_residual = r;
      rep.worst_index = static_cast<int>(i);
    }
  }
  return rep;
}

ResidualReport verify_symplectic(int n, std::span<const double> gamma, double h) {
  require_reduced(n, gamma, "gamma");
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("finite-difference step must be positive");
  check_generic(n, gamma);
  if (genericity_slack(n, gamma) <= 4.0 * h)
    throw ParameterError("finite-difference step too large for the genericity margin of gamma");

  const std::size_t L = gamma.size();
  std::vector<double> g(gamma.begin(), gamma.end());
  std::vector<std::vector<double>> A(L, std::vector<double>(L));
  for (std::size_t j = 0; j < L; ++j) {
    const double g0 = g[j];
    g[j] = g0 + h;
    const auto cp = connection_terms(n, g);
    g[j] = g0 - h;
    const auto cm = connection_terms(n, g);
    g[j] = g0;
    for (std::size_t i = 0; i < L; ++i) A[i][j] = (cp[i] - cm[i]) / (2.0 * h);
  }
  ResidualReport rep{0.0, 0};
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = i + 1; j < L; ++j) {
      const double r = std::abs(A[i][j] - A[j][i]);
      if (r > rep.max_residual) {
        rep.max_residual = r;
        rep.worst_index = static_cast<int>(i * L + j);
      }
    }
  }
  return rep;
}

}  // namespace ttstar::datamaps
