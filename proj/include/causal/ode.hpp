// Adaptive Dormand-Prince 5(4) integrator with 4th-order dense output.
// RHS exceptions (domain / regularity) truncate the integration and are
// reported through the exit flag rather than propagated.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "causal/linalg.hpp"

namespace causal {

enum class OdeExit { Completed, DomainExit, RegularityExit, StepFailure };

struct OdeStep {
  double t0 = 0.0, h = 0.0;
  Vec y0;
  // Dense-output coefficients r1..r5 (contiguous, each of state size).
  Vec r;

  void eval(double t, Vec& y) const {
    const size_t m = y0.size();
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    y.resize(m);
    for (size_t i = 0; i < m; ++i) {
      const double r1 = r[i], r2 = r[m + i], r3 = r[2 * m + i], r4 = r[3 * m + i],
                   r5 = r[4 * m + i];
      y[i] = r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
    }
  }
};

struct OdeSolution {
  std::vector<OdeStep> steps;
  Vec y_end;
  double t_begin = 0.0, t_end = 0.0;
  OdeExit exit = OdeExit::Completed;
  std::string exit_message;
  long accepted = 0, rejected = 0, evals = 0;

  bool covers(double t) const {
    const double a = std::min(t_begin, t_end), b = std::max(t_begin, t_end);
    return t >= a - 1e-12 && t <= b + 1e-12;
  }

  // Dense-output sample; t must lie inside the integrated span.
  Vec at(double t) const;
};

// Integrates y' = f(t, y) from (t0, y0) to t1 (t1 may be < t0).
// rtol/atol follow the usual mixed error norm.
OdeSolution integrate_ode(const std::function<void(double, const Vec&, Vec&)>& f, double t0,
                          Vec y0, double t1, double rtol, double atol,
                          long max_steps = 2000000);

}  // namespace causal
