// The derived-tensor pipeline.  One jet-ring evaluation of G per phase point
// feeds everything: spray u^a, connection U_b^a, curvature R_ab^c, tidal
// force S_ab, the contraction T_a^b, and (at identity depth) exact first
// derivatives of R, S and U for the coordinate identity suite.
//
// Coordinate formulas:
//   u^a g_ab = G_b - v^c d_c g_b                 (spray)
//   U_b^a    = -1/2 D_b u^a                      (Ehresmann connection)
//   R_ab^c   = d_[a U_b]^c - U_[a^d D_|d| U_b]^c (curvature, [ab] weight 1/2)
//   S_ab     = 1/2 ( V^2(g_ab) - V(d_a g_b) - V(d_b g_a) + 2 d_a d_b G
//                    - 2 g_cd U_a^c U_b^d )      (tidal force)
//   T_a^b    = 2 v^c R_ca^b

#pragma once

#include "causal/geometry.hpp"

namespace causal {

struct Ten3 {
  int n = 0;
  std::vector<double> a;
  Ten3() = default;
  explicit Ten3(int n_) : n(n_), a(static_cast<size_t>(n_) * n_ * n_, 0.0) {}
  double& operator()(int i, int j, int k) {
    return a[(static_cast<size_t>(i) * n + j) * n + k];
  }
  double operator()(int i, int j, int k) const {
    return a[(static_cast<size_t>(i) * n + j) * n + k];
  }
};

struct Ten4 {
  int n = 0;
  std::vector<double> a;
  Ten4() = default;
  explicit Ten4(int n_) : n(n_), a(static_cast<size_t>(n_) * n_ * n_ * n_, 0.0) {}
  double& operator()(int i, int j, int k, int l) {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
};

enum class Depth {
  SprayValue,  // u only
  Linearized,  // + du/dx, du/dv (geodesic linearization)
  Curvature,   // + U, R, S, T values
  Identities,  // + exact first derivatives of U, R, S for the identity suite
};

struct TensorBundle {
  PhasePoint p;
  int n = 0;
  double k = 2.0;
  Depth depth = Depth::SprayValue;

  double G = 0.0;
  Vec g;        // g_a
  Vec Gx;       // G_a
  Vec rhs;      // G_b - v^c d_c g_b
  Mat hess;     // g_ab
  Mat hess_inv;
  double cond = 0.0;

  Vec u;
  Mat dudx, dudv;  // (a, b) = d u^a / d x^b, d u^a / d v^b

  Mat U;     // (b, a) = U_b^a
  Ten3 R;    // (a, b, c) = R_ab^c, antisymmetric in (a, b)
  Mat S;     // S_ab
  Mat T;     // (a, b) = T_a^b
  double t_asym = 0.0;  // max |T_ab - T_ba| after lowering (monitored defect)

  // Identity-depth first derivatives (leading index = derivative slot).
  Ten3 dU_dv, dU_dx;    // (c, b, a) = D_c U_b^a ; d_c U_b^a
  Ten4 dR_dv, dR_dx;    // (e, a, b, c) = D_e R_ab^c ; d_e R_ab^c
  Ten3 dSup_dv;         // (e, b, c) = D_e S_b^c with S_b^c = S_bd g^{dc}
  Vec Vg;               // V(g_a)  (equals G_a)
};

TensorBundle compute_bundle(const DefiningFunction& G, const PhasePoint& p, Depth depth);

// Spray result with its defining-system residual (relative) and V(G).
struct SprayData {
  PhasePoint base;
  Vec u;
  Vec contact;  // alpha_a = g_a
  double residual = 0.0;
  double VG = 0.0;
  double cond = 0.0;
};

SprayData spray(const DefiningFunction& G, const PhasePoint& p);

// (f, V(f), V^2(f)) at p, with V the spray of G.  Used by the conformal
// trace law, where V(J) and V^2(J) are taken along the original spray.
std::array<double, 3> spray_V2(const DefiningFunction& G, const PhasePoint& p,
                               const ScalarField& f);

}  // namespace causal
