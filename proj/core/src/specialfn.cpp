#include "ttstar/specialfn.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "ttstar/errors.hpp"

namespace ttstar::specialfn {
namespace {

constexpr int kMaxZeta = 64;

void require_positive(double z, const char* fn) {
  if (!(z > 0.0) || !std::isfinite(z))
    throw DomainError(std::string(fn) + ": argument must be positive and finite, got " + std::to_string(z));
}

// Euler-Maclaurin with N = 20 and ten Bernoulli corrections. Exact to a few ulp for k >= 2.
double zeta_em(int s) {
  static constexpr std::array<double, 10> b2j = {
      1.0 / 6,  -1.0 / 30,      1.0 / 42,   -1.0 / 30,         5.0 / 66,
      -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};
  constexpr int N = 20;
  double sum = 0.0;
  for (int n = N - 1; n >= 1; --n) sum += std::pow(double(n), -s);
  const double ns = std::pow(double(N), -s);
  double tail = double(N) * ns / (s - 1) + 0.5 * ns;
  double rising = s;  // s(s+1)...(s+2j-2)
  double fact = 2.0;  // (2j)!
  double npow = ns / N;
  for (int j = 1; j <= 10; ++j) {
    tail += b2j[j - 1] / fact * rising * npow;
    rising *= double(s + 2 * j - 1) * double(s + 2 * j);
    fact *= double(2 * j + 1) * double(2 * j + 2);
    npow /= double(N) * N;
  }
  return sum + tail;
}

const std::array<double, kMaxZeta + 1>& zeta_table() {
  static const std::array<double, kMaxZeta + 1> table = [] {
    std::array<double, kMaxZeta + 1> t{};
    for (int k = 2; k <= kMaxZeta; ++k) t[k] = zeta_em(k);
    return t;
  }();
  return table;
}

// zeta(k) - 1 without cancellation for large k.
double zeta_minus_one_direct(int k) {
  if (k < 8) return zeta_table()[k] - 1.0;
  double s = 0.0;
  for (int n = 40; n >= 2; --n) s += std::pow(double(n), -k);
  return s;
}

double zeta_minus_one(int k) {
  static const std::array<double, kMaxZeta + 1> table = [] {
    std::array<double, kMaxZeta + 1> t{};
    for (int j = 2; j <= kMaxZeta; ++j) t[j] = zeta_minus_one_direct(j);
    return t;
  }();
  return k <= kMaxZeta ? table[k] : zeta_minus_one_direct(k);
}

// ln Gamma(1+x) for |x| <= 1/2.
double lgamma1p_series(double x) {
  double s = 0.0;
  double p = x * x;
  for (int k = 2; k <= 40; ++k) {
    double term = zeta_minus_one(k) * p / k;
    s += (k % 2 == 0) ? term : -term;
    p *= x;
  }
  return -std::log1p(x) + x * (1.0 - kEulerGamma) + s;
}

// ln G(1+x) for |x| <= 1/2.
double lbarnes1p_series(double x) {
  double s = 0.0;
  double p = x * x * x;
  for (int k = 2; k <= 40; ++k) {
    double term = zeta_minus_one(k) * p / (k + 1);
    s += (k % 2 == 0) ? term : -term;
    p *= x;
  }
  return 0.5 * x * kLn2Pi - 0.5 * (x + (1.0 + kEulerGamma) * x * x) +
         (std::log1p(x) - x + 0.5 * x * x) + s;
}

double stirling(double z) {
  static constexpr std::array<double, 8> b2k = {1.0 / 6,       -1.0 / 30,  1.0 / 42,       -1.0 / 30,
                                                5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
  const double iz = 1.0 / z;
  const double iz2 = iz * iz;
  double corr = 0.0;
  double p = iz;
  for (int k = 1; k <= 8; ++k) {
    corr += b2k[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p;
    p *= iz2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * kLn2Pi + corr;
}

double log_gamma_unchecked(double z) {
  if (z < 0.5) return lgamma1p_series(z) - std::log(z);
  if (z <= 1.5) return lgamma1p_series(z - 1.0);
  if (z <= 2.5) return std::log1p(z - 2.0) + lgamma1p_series(z - 2.0);
  if (z >= 15.0) return stirling(z);
  double acc = 0.0;
  while (z > 2.5) {
    z -= 1.0;
    acc += std::log(z);
  }
  return acc + log_gamma_unchecked(z);
}

double log_barnes_unchecked(double z) {
  if (z < 0.5) return lbarnes1p_series(z) - log_gamma_unchecked(z);
  if (z <= 1.5) return lbarnes1p_series(z - 1.0);
  return log_gamma_unchecked(z - 1.0) + log_barnes_unchecked(z - 1.0);
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton on P_n.
struct GaussLegendre {
  static constexpr int n = 12;
  std::array<double, n> x{};
  std::array<double, n> w{};
  GaussLegendre() {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      x[i] = t;
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
  double apply(const std::function<double(double)>& f, double a, double b) const {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f(c + h * x[i]);
    return h * s;
  }
};

const GaussLegendre& gauss() {
  static const GaussLegendre g;
  return g;
}

struct Adaptive {
  const std::function<double(double)>& f;
  double worst = 0.0;
  bool failed = false;

  double run(double a, double b, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gauss().apply(f, a, m);
    const double right = gauss().apply(f, m, b);
    const double err = std::abs(left + right - whole);
    if (err <= tol) return left + right;
    if (depth >= 40) {
      failed = true;
      worst = std::max(worst, err);
      return left + right;
    }
    return run(a, m, left, 0.5 * tol, depth + 1) + run(m, b, right, 0.5 * tol, depth + 1);
  }

  double integrate(double a, double b, double tol) {
    if (b <= a) return 0.0;
    return run(a, b, gauss().apply(f, a, b), tol, 0);
  }
};

}  // namespace

double zeta(int k) {
  if (k < 2) throw DomainError("zeta: order must be >= 2");
  if (k <= kMaxZeta) return zeta_table()[k];
  return 1.0 + zeta_minus_one(k);
}

double log_gamma(double z) {
  require_positive(z, "log_gamma");
  return log_gamma_unchecked(z);
}

double log_barnes_g(double z) {
  require_positive(z, "log_barnes_g");
  if (z > 4.0) throw DomainError("log_barnes_g: argument must be <= 4, got " + std::to_string(z));
  return log_barnes_unchecked(z);
}

double psi_m2(double z) {
  if (z == 0.0) return 0.0;
  require_positive(z, "psi_m2");
  if (z > 3.0) throw DomainError("psi_m2: argument must be <= 3, got " + std::to_string(z));
  return 0.5 * z * (1.0 - z) + 0.5 * z * kLn2Pi + z * log_gamma_unchecked(z) - log_barnes_unchecked(1.0 + z);
}

double psi_m2_oracle(double z, double abs_tol) {
  if (z == 0.0) return 0.0;
  require_positive(z, "psi_m2_oracle");
  if (z > 3.0) throw DomainError("psi_m2_oracle: argument must be <= 3, got " + std::to_string(z));

  // ln Gamma(x) = ln Gamma(1+x) - ln x; the log part is integrated exactly near 0.
  const double a = std::min(z, 0.1);
  const std::function<double(double)> smooth = [](double x) { return std::lgamma(1.0 + x); };
  const std::function<double(double)> direct = [](double x) { return std::lgamma(x); };

  Adaptive near{smooth};
  Adaptive far{direct};
  const double head = near.integrate(0.0, a, 0.5 * abs_tol) + (a - a * std::log(a));
  const double body = far.integrate(a, z, 0.5 * abs_tol);
  if (near.failed || far.failed) {
    throw NumericError("psi_m2_oracle: quadrature did not reach tolerance", std::max(near.worst, far.worst));
  }
  return head + body;
}

}  // namespace ttstar::specialfn
