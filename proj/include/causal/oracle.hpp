// Classical Levi-Civita oracle for quadratic metrics, with its own
// derivative path (Dual2 over x).  Test-side ground truth for spray,
// connection, tidal force and geodesic deviation.
//
// Conventions follow the defining-function picture this engine verifies
// against: R(X,Y)Z = (nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]) Z and
// Ric(X,Y) = tr(Z -> R(X,Z)Y); with these signs the null energy condition
// reads Ric(k,k) <= 0.

#pragma once

#include "causal/geodesic.hpp"
#include "causal/geometry.hpp"

namespace causal {

struct ChristoffelData {
  int n = 0;
  Mat g;        // g_ab(x)
  Mat g_inv;
  Ten3 gamma;   // gamma(b, c, a) = Gamma_bc^a
  Ten4 dgamma;  // dgamma(d, b, c, a) = d_d Gamma_bc^a
  Ten4 riemann; // riemann(a, b, c, d): R(e_a, e_b) e_c = riemann(a,b,c,d) e_d
  Mat ricci;    // Ric(e_a, e_b) = tr(Z -> R(e_a, Z) e_b)

  // (R(k, X) k)^d.
  Vec tidal_apply(const Vec& k, const Vec& X) const;
  double ric_kk(const Vec& k) const;
};

ChristoffelData christoffel_oracle(const MetricField& metric, const Vec& x);

// Classical affinely parametrized geodesic x'' = -Gamma(v, v).
OdeSolution oracle_geodesic(const MetricField& metric, const PhasePoint& p0, double t_end,
                            double tol);

// Classical Jacobi transport along the oracle geodesic:
//   J' = W - Gamma(v, J),  W' = -Gamma(v, W) + R(k, J)k
// where W = nabla_k J; returns the joint solution (x, v, J, W).
OdeSolution oracle_jacobi(const MetricField& metric, const PhasePoint& p0, const Vec& J0,
                          const Vec& W0, double t_end, double tol);

}  // namespace causal
