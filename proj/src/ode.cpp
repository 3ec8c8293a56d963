#include "causal/ode.hpp"

#include <algorithm>
#include <cmath>

#include "causal/jet.hpp"

namespace causal {

namespace {

// Dormand-Prince RK5(4)7M coefficients (1980 JCoAM 6 19) and the 4th-order
// continuous extension from Hairer-Norsett-Wanner.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

Vec OdeSolution::at(double t) const {
  if (steps.empty()) throw ValidationError("ode solution has no steps");
  if (!covers(t)) throw ValidationError("dense output query outside the integrated span");
  // Steps are time-ordered in the direction of integration.
  size_t lo = 0, hi = steps.size() - 1;
  const bool fwd = t_end >= t_begin;
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    const double tend_mid = steps[mid].t0 + steps[mid].h;
    const bool before = fwd ? (t <= tend_mid + 1e-15) : (t >= tend_mid - 1e-15);
    if (before) hi = mid;
    else lo = mid + 1;
  }
  Vec y;
  steps[lo].eval(t, y);
  return y;
}

OdeSolution integrate_ode(const std::function<void(double, const Vec&, Vec&)>& f, double t0,
                          Vec y0, double t1, double rtol, double atol, long max_steps) {
  OdeSolution sol;
  sol.t_begin = t0;
  const size_t m = y0.size();
  const double dir = t1 >= t0 ? 1.0 : -1.0;

  Vec k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), ytmp(m), y1(m);

  auto rhs = [&](double t, const Vec& y, Vec& out) {
    f(t, y, out);
    ++sol.evals;
  };

  try {
    rhs(t0, y0, k1);
  } catch (const std::exception& ex) {
    sol.exit = OdeExit::DomainExit;
    sol.exit_message = ex.what();
    sol.y_end = y0;
    sol.t_end = t0;
    return sol;
  }

  // Initial step: conservative power-law guess from the first derivative.
  double sc = 0.0;
  for (size_t i = 0; i < m; ++i)
    sc = std::max(sc, std::abs(k1[i]) / (atol + rtol * std::abs(y0[i])));
  double h = dir * std::min(std::abs(t1 - t0), 0.1 / (1e-4 + sc));
  if (h == 0.0) h = dir * 1e-6;

  double t = t0;
  bool last = false;

  for (long it = 0; it < max_steps; ++it) {
    if (dir * (t + h - t1) >= 0.0) {
      h = t1 - t;
      last = true;
    }

    bool threw = false;
    std::string msg;
    try {
      for (size_t i = 0; i < m; ++i) ytmp[i] = y0[i] + h * a21 * k1[i];
      rhs(t + c2 * h, ytmp, k2);
      for (size_t i = 0; i < m; ++i) ytmp[i] = y0[i] + h * (a31 * k1[i] + a32 * k2[i]);
      rhs(t + c3 * h, ytmp, k3);
      for (size_t i = 0; i < m; ++i)
        ytmp[i] = y0[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(t + c4 * h, ytmp, k4);
      for (size_t i = 0; i < m; ++i)
        ytmp[i] = y0[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs(t + c5 * h, ytmp, k5);
      for (size_t i = 0; i < m; ++i)
        ytmp[i] = y0[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                               a65 * k5[i]);
      rhs(t + h, ytmp, k6);
      for (size_t i = 0; i < m; ++i)
        y1[i] = y0[i] +
                h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      rhs(t + h, y1, k7);
    } catch (const RegularityError& ex) {
      threw = true;
      msg = ex.what();
      sol.exit = OdeExit::RegularityExit;
    } catch (const std::exception& ex) {
      threw = true;
      msg = ex.what();
      sol.exit = OdeExit::DomainExit;
    }

    if (threw) {
      // Shrink toward the boundary; give up when the step underflows.
      h *= 0.25;
      last = false;
      ++sol.rejected;
      if (std::abs(h) < 1e-14 * (1.0 + std::abs(t))) {
        sol.exit_message = msg;
        sol.y_end = y0;
        sol.t_end = t;
        return sol;
      }
      continue;
    }

    double err = 0.0;
    for (size_t i = 0; i < m; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double s = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      err += (e / s) * (e / s);
    }
    err = std::sqrt(err / static_cast<double>(m));

    if (err <= 1.0) {
      OdeStep step;
      step.t0 = t;
      step.h = h;
      step.y0 = y0;
      step.r.resize(5 * m);
      for (size_t i = 0; i < m; ++i) {
        const double ydiff = y1[i] - y0[i];
        const double bspl = h * k1[i] - ydiff;
        step.r[i] = y0[i];
        step.r[m + i] = ydiff;
        step.r[2 * m + i] = bspl;
        step.r[3 * m + i] = ydiff - h * k7[i] - bspl;
        step.r[4 * m + i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                 d6 * k6[i] + d7 * k7[i]);
      }
      sol.steps.push_back(std::move(step));
      ++sol.accepted;

      t += h;
      y0 = y1;
      k1 = k7;  // FSAL
      if (last) {
        sol.exit = OdeExit::Completed;
        sol.y_end = y0;
        sol.t_end = t;
        return sol;
      }
      const double fac = std::clamp(0.9 * std::pow(err + 1e-300, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      ++sol.rejected;
      last = false;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      if (std::abs(h) < 1e-14 * (1.0 + std::abs(t))) {
        sol.exit = OdeExit::StepFailure;
        sol.exit_message = "step size underflow";
        sol.y_end = y0;
        sol.t_end = t;
        return sol;
      }
    }
  }
  sol.exit = OdeExit::StepFailure;
  sol.exit_message = "max step count exceeded";
  sol.y_end = y0;
  sol.t_end = t;
  return sol;
}

}  // namespace causal
