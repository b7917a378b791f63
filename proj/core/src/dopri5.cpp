#include "ttstar/dopri5.hpp"

#include <algorithm>
#include <cmath>

#include "ttstar/errors.hpp"

namespace ttstar {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;   // h_new >= 0.2 h
constexpr double kFacMax = 10.0;  // h_new <= 10 h

}  // namespace

void Dopri5::StepView::dense(double x, std::span<double> out) const {
  const double h = x1_ - x0_;
  const double th = h == 0.0 ? 1.0 : (x - x0_) / h;
  const double th1 = 1.0 - th;
  const auto& rc = *rc_;
  const std::size_t n = dim_;
  for (std::size_t i = 0; i < n; ++i)
    out[i] = rc[i] + th * (rc[n + i] + th1 * (rc[2 * n + i] + th * (rc[3 * n + i] + th1 * rc[4 * n + i])));
}

double Dopri5::StepView::dense(double x, std::size_t i) const {
  const double h = x1_ - x0_;
  const double th = h == 0.0 ? 1.0 : (x - x0_) / h;
  const double th1 = 1.0 - th;
  const auto& rc = *rc_;
  const std::size_t n = dim_;
  return rc[i] + th * (rc[n + i] + th1 * (rc[2 * n + i] + th * (rc[3 * n + i] + th1 * rc[4 * n + i])));
}

Dopri5::Dopri5(Rhs rhs, std::size_t dim, Settings settings)
    : rhs_(std::move(rhs)), dim_(dim), s_(std::move(settings)), scale_(dim) {
  if (!(s_.rel_tol > 0.0)) throw ParameterError("Dopri5: rel_tol must be positive");
  if (s_.abs_tol.empty()) s_.abs_tol.assign(dim_, 0.0);
  if (s_.abs_tol.size() != dim_) throw ParameterError("Dopri5: abs_tol must have one entry per component");
  for (double a : s_.abs_tol)
    if (a < 0.0) throw ParameterError("Dopri5: abs_tol must be non-negative");
}

double Dopri5::error_norm(std::span<const double> y0, std::span<const double> y1, std::span<const double> err) {
  if (s_.scale) {
    s_.scale(y0, y1, scale_);
  } else {
    for (std::size_t i = 0; i < dim_; ++i) scale_[i] = std::max(std::abs(y0[i]), std::abs(y1[i]));
  }
  double e = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = s_.abs_tol[i] + s_.rel_tol * scale_[i];
    const double r = sc > 0.0 ? std::abs(err[i]) / sc : (err[i] == 0.0 ? 0.0 : INFINITY);
    if (!(r <= e)) e = r;  // also propagates NaN
  }
  return e;
}

double Dopri5::initial_step(double x0, double dir, std::span<const double> y0, std::span<const double> f0) {
  double dn0 = 0.0, dn1 = 0.0;
  error_norm(y0, y0, f0);  // fills scale_
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = s_.abs_tol[i] + s_.rel_tol * scale_[i];
    if (sc <= 0.0) continue;
    dn0 = std::max(dn0, std::abs(y0[i]) / sc);
    dn1 = std::max(dn1, std::abs(f0[i]) / sc);
  }
  double h = (dn0 <= 1e-10 || dn1 <= 1e-10) ? 1e-6 : 0.01 * dn0 / dn1;
  h = std::min({h, s_.max_step, std::max(1.0, std::abs(x0)) * 0.1});
  (void)dir;
  return h;
}

Dopri5::Status Dopri5::integrate(double x0, double x1, std::vector<double>& y, const Observer& observer) {
  if (y.size() != dim_) throw ParameterError("Dopri5: state dimension mismatch");
  const std::size_t n = dim_;
  const double dir = x1 >= x0 ? 1.0 : -1.0;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), yn(n), err(n), rc(5 * n);

  x_ = x0;
  rhs_(x_, y, k1);
  ++stats_.rhs_evaluations;
  if (x0 == x1) return Status::completed;

  double h = s_.initial_step > 0.0 ? s_.initial_step : initial_step(x0, dir, y, k1);
  h = std::min({h, std::abs(x1 - x0), s_.max_step});
  double facold = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;

  StepView view;
  view.rc_ = &rc;
  view.dim_ = n;

  while (dir * (x1 - x_) > 0.0) {
    if (++steps > s_.max_steps) return Status::too_many_steps;
    if (h < s_.min_step_rel * std::max(1.0, std::abs(x_))) return Status::step_underflow;
    bool hit_end = false;
    if (h >= std::abs(x1 - x_)) {
      h = std::abs(x1 - x_);
      hit_end = true;
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * a21 * k1[i];
    rhs_(x_ + c2 * hs, yt, k2);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs_(x_ + c3 * hs, yt, k3);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(x_ + c4 * hs, yt, k4);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_(x_ + c5 * hs, yt, k5);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double xn = hit_end ? x1 : x_ + hs;
    rhs_(xn, yt, k6);
    for (std::size_t i = 0; i < n; ++i)
      yn[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs_(xn, yn, k7);
    stats_.rhs_evaluations += 6;
    for (std::size_t i = 0; i < n; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    const double e = error_norm(y, yn, err);
    if (!std::isfinite(e)) {
      ++stats_.rejected;
      h *= kFacMin;
      last_rejected = true;
      continue;
    }
    const double fac11 = std::pow(std::max(e, 1e-300), kExpo1);
    if (e <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
      double hnew = h / fac;
      facold = std::max(e, 1e-4);
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;

      for (std::size_t i = 0; i < n; ++i) {
        const double dy = yn[i] - y[i];
        const double bspl = hs * k1[i] - dy;
        rc[i] = y[i];
        rc[n + i] = dy;
        rc[2 * n + i] = bspl;
        rc[3 * n + i] = dy - hs * k7[i] - bspl;
        rc[4 * n + i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      ++stats_.accepted;
      stats_.max_error_ratio = std::max(stats_.max_error_ratio, e);
      const double xold = x_;
      x_ = xn;
      y.swap(yn);
      k1.swap(k7);

      view.x0_ = xold;
      view.x1_ = x_;
      view.y1_ = y;
      if (observer && !observer(view)) return Status::stopped;
      h = std::min(hnew, s_.max_step);
    } else {
      ++stats_.rejected;
      h /= std::min(1.0 / kFacMin, fac11 / kSafe);
      last_rejected = true;
    }
  }
  return Status::completed;
}

}  // namespace ttstar
