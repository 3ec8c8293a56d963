// Ehresmann connection, curvature and tidal-force tensors plus the
// coordinate identity suite that cross-checks them.

#pragma once

#include <map>

#include "causal/spray.hpp"

namespace causal {

struct ConnectionData {
  PhasePoint base;
  Mat U;  // (b, a) = U_b^a
  double contraction_residual = 0.0;  // |U_b^a g_a - G_b| / (1 + |G_b|)
  double euler_residual = 0.0;        // |v^b U_b^a + u^a| / (1 + |u|)
};

struct CurvatureData {
  PhasePoint base;
  Ten3 R;    // R_ab^c
  Mat S;     // S_ab
  Mat T;     // T_a^b
  double t_asym = 0.0;
  std::map<std::string, double> residuals;  // cross-identities evaluated at the point
};

ConnectionData connection(const DefiningFunction& G, const PhasePoint& p);
CurvatureData curvature(const DefiningFunction& G, const PhasePoint& p);

// Relative residuals of every coordinate identity at one point (identity
// depth: exact first derivatives of U, R, S enter).
std::map<std::string, double> identity_residuals(const DefiningFunction& G, const PhasePoint& p);

// Max residual per identity over a sampled set of on-cone points.
struct IdentityReport {
  int points = 0;
  std::map<std::string, double> max_residual;
};

IdentityReport identity_suite(const DefiningFunction& G, const std::vector<PhasePoint>& points);

}  // namespace causal
