// Affinely parametrized null geodesics: integral curves of (x', v') = (v, u).

#pragma once

#include "causal/ode.hpp"
#include "causal/spray.hpp"

namespace causal {

struct GeodesicTrajectory {
  std::string geometry;
  std::vector<std::pair<double, PhasePoint>> samples;
  OdeSolution sol;
  long steps = 0, rejected = 0;
  double max_G_drift = 0.0;
  OdeExit exit = OdeExit::Completed;
  std::string exit_message;

  PhasePoint at(double t) const;
};

// Integrates from an on-cone start (|G(p0)| <= 1e-10 required) to t_end with
// mixed tolerance tol; emits n_samples dense-output samples.  With
// polish_cone the velocity is root-polished back onto G = 0 after each
// sample (off by default: V(G) = 0 makes the cone a first integral and
// projection would mask integrator defects).
GeodesicTrajectory integrate_geodesic(const DefiningFunction& G, const PhasePoint& p0,
                                      double t_end, double tol, int n_samples = 101,
                                      bool polish_cone = false);

struct ConservationReport {
  double max_G = 0.0;        // max |G| over samples
  double max_contact = 0.0;  // max |v^a g_a - k G|
};

ConservationReport conservation_report(const GeodesicTrajectory& traj,
                                       const DefiningFunction& G);

std::string trajectory_csv(const GeodesicTrajectory& traj, const DefiningFunction& G);

}  // namespace causal
