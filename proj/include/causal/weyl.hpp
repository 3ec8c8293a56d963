// Generalized Weyl tensor on the shadow space and its behavior under
// generalized conformal rescalings G -> J*G.

#pragma once

#include "causal/shadow.hpp"

namespace causal {

struct WeylData {
  PhasePoint base;
  int n = 0;
  Mat Sproj;    // S restricted to E: S_ab e_alpha^a e_beta^b
  double X = 0.0;  // trace scalar, X = 4/(n-2) tr(g_E^{-1} Sproj)
  Mat W_endo;   // trace-free endomorphism g_E^{-1} Sproj - (X/4) Id
  Mat W_low;    // lowered form Sproj - (X/4) g_E
  double tracefree_residual = 0.0;  // |tr(g_E^{-1} W_low)|
  ShadowFrame frame;
};

// frame_override lets callers evaluate two defining functions through one
// shared realization of E (used by the conformal comparison).
WeylData weyl_tensor(const DefiningFunction& G, const PhasePoint& p,
                     const ShadowFrame* frame_override = nullptr);

struct ConformalContext {
  const DefiningFunction* base = nullptr;
  ConformalFactor factor;
  DefiningFunction rescaled;
  double p_degree = 0.0;  // p = k + q
};

ConformalContext make_conformal_context(const DefiningFunction& base,
                                        const ConformalFactor& factor);

struct ConformalPointReport {
  PhasePoint point;
  double X = 0.0;            // base trace scalar
  double X_predicted = 0.0;  // trace law along the original spray
  double X_measured = 0.0;   // from the rescaled pipeline
  double trace_law_residual = 0.0;
  double weyl_deviation = 0.0;      // ||W' - W|| / max(||W||, 1e-12)
  double weyl_abs_deviation = 0.0;  // ||W' - W||
  // Invariance verdict: relative deviation within tol, or absolute deviation
  // below the 1e-12 floor (conformally flat points, where W = W' = 0 and the
  // relative quotient is roundoff over the floor).
  bool weyl_invariant(double tol = 1e-6) const {
    return weyl_deviation <= tol || weyl_abs_deviation <= 1e-12;
  }
  std::pair<int, int> gE_signature{0, 0};
  double J = 0.0, VJ = 0.0, V2J = 0.0;
};

// Runs both pipelines at one common-cone point through the shared shadow
// realization {X : g_a X^a = 0} / span(v).
ConformalPointReport conformal_compare(const ConformalContext& ctx, const PhasePoint& p);

}  // namespace causal
