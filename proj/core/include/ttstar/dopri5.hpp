#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace ttstar {

// Dormand-Prince 5(4) with PI step control (Hairer-Wanner constants), max-norm
// error test and 5th-order continuous extension. Integrates in either direction.
class Dopri5 {
 public:
  using Rhs = std::function<void(double x, std::span<const double> y, std::span<double> dy)>;
  // Fills scale[i] >= 0 so that the local error of component i is tested against
  // abs_tol[i] + rel_tol * scale[i]. Default: max(|y0_i|, |y1_i|).
  using ErrorScale =
      std::function<void(std::span<const double> y0, std::span<const double> y1, std::span<double> scale)>;

  struct Settings {
    double rel_tol = 1e-11;
    std::vector<double> abs_tol;  // one per component; empty means 0
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;    // 0 picks one automatically
    double min_step_rel = 1e-14;  // underflow once |h| < min_step_rel * max(1, |x|)
    std::size_t max_steps = 5'000'000;
    ErrorScale scale;
  };

  struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
    double max_error_ratio = 0.0;  // largest accepted normalised local error
  };

  enum class Status { completed, stopped, step_underflow, too_many_steps };

  // Last accepted step, with dense output on [x0, x1].
  class StepView {
   public:
    double x0() const { return x0_; }
    double x1() const { return x1_; }
    std::span<const double> y1() const { return y1_; }
    void dense(double x, std::span<double> out) const;
    double dense(double x, std::size_t component) const;

   private:
    friend class Dopri5;
    double x0_ = 0.0, x1_ = 0.0;
    std::span<const double> y1_;
    const std::vector<double>* rc_ = nullptr;
    std::size_t dim_ = 0;
  };

  // Returning false from the observer stops the integration after that step.
  using Observer = std::function<bool(const StepView&)>;

  Dopri5(Rhs rhs, std::size_t dim, Settings settings);

  Status integrate(double x0, double x1, std::vector<double>& y, const Observer& observer = {});

  const Stats& stats() const { return stats_; }
  double last_x() const { return x_; }

 private:
  double error_norm(std::span<const double> y0, std::span<const double> y1, std::span<const double> err);
  double initial_step(double x0, double dir, std::span<const double> y0, std::span<const double> f0);

  Rhs rhs_;
  std::size_t dim_;
  Settings s_;
  Stats stats_;
  double x_ = 0.0;
  std::vector<double> scale_;
};

}  // namespace ttstar
