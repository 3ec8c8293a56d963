// Vertex-cone null congruences: joint integration of the geodesic and its
// linearized (Jacobi) flow, shadow-space deformation decomposition
// (expansion, shear, rotation), the Raychaudhuri residual and focusing.

#pragma once

#include "causal/ode.hpp"
#include "causal/shadow.hpp"

namespace causal {

struct CongruenceState {
  double t = 0.0;
  PhasePoint phase;
  std::vector<Vec> J, Jdot;  // n-2 Jacobi pairs
  ShadowFrame shadow;
  bool jacobian_singular = false;  // shadow components of J not invertible
  double theta = 0.0;
  double tr_sigma2 = 0.0, tr_rho2 = 0.0;
  Mat sigma_low, rho_low;  // lowered (n-2)x(n-2) parts
  double lambda_K = 0.0;   // sqrt|det g_E| * |det J_E|
  double det_JE = 0.0;
  double trS = 0.0;        // tr S# on E
  double quotient_residual = 0.0;  // transversal component of J (should be ~0)
};

class VertexCongruence {
 public:
  std::string geometry;
  int n = 0;
  PhasePoint vertex;
  std::vector<Vec> seed;  // shadow basis at the vertex (Jdot initial data)
  OdeSolution sol;
  double t_reached = 0.0;
  OdeExit exit = OdeExit::Completed;

  const DefiningFunction* def = nullptr;

  CongruenceState state_at(double t) const;
  std::vector<CongruenceState> states(double t_min, double t_max, int count) const;
};

// Linearization of the spray flow at one phase point:
// (J, Jdot) -> (Jdot, du/dx J + du/dv Jdot).
std::pair<Vec, Vec> jacobi_rhs(const DefiningFunction& G, const PhasePoint& phase, const Vec& J,
                               const Vec& Jdot);

// Integrates the congruence from an on-cone vertex: J_i(0) = 0,
// Jdot_i(0) = e_i (vertex shadow basis).
VertexCongruence vertex_congruence(const DefiningFunction& G, const Vec& x0, const Vec& v0,
                                   double t_end, double tol);

// Deformation decomposition for given Jacobi data at a phase point; used by
// the state builder and directly by tests.
CongruenceState expansion_decomposition(const DefiningFunction& G, double t,
                                        const PhasePoint& phase, const std::vector<Vec>& J,
                                        const std::vector<Vec>& Jdot);

struct ResidualSample {
  double t = 0.0;
  double theta = 0.0, theta_dot = 0.0;
  double tr_sigma2 = 0.0, tr_rho2 = 0.0, trS = 0.0;
  double residual = 0.0;     // |theta_dot + tr rho^2 + tr sigma^2 + theta^2/(n-2) - trS|
  double theta_cross = 0.0;  // |theta - d/dt log lambda_K| consistency
};

// Raychaudhuri residual along the congruence.  theta_dot is taken by
// 4th-order central differences on a local 5-point stencil whose width
// scales like t^{3/2} (the uniform-grid error diverges near the vertex).
std::vector<ResidualSample> raychaudhuri_samples(const VertexCongruence& cong, double t_min,
                                                 int count);

double raychaudhuri_residual(const std::vector<ResidualSample>& samples);

// Uniform-grid variant per the export format: 4th-order differences on the
// given states (assumed equally spaced); interior points only.
std::vector<ResidualSample> raychaudhuri_grid_residual(const std::vector<CongruenceState>& st);

struct FocusingReport {
  bool triggered = false;      // a grid state with theta < 0 exists
  double t0 = 0.0, theta0 = 0.0;
  double bound = 0.0;          // t0 - (n-2)/theta(t0)
  bool energy_ok = false;      // trS <= 0 from t0 on
  bool conjugate_found = false;
  double t_conjugate = 0.0;
  std::string locator;         // "det-sign-bisection" or "volume-min-search"
  bool bound_satisfied = false;
  bool concavity_ok = false;   // lambda_K^{1/(n-2)} concave where trS <= 0
  double max_second_difference = 0.0;
};

FocusingReport focusing_check(const VertexCongruence& cong, double t_min, int grid = 400);

}  // namespace causal
