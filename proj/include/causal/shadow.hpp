// Umbral (shadow) space E at an on-cone point: a deterministic basis of
// ker(g_a) / span(v) and the induced metric g_E.

#pragma once

#include "causal/spray.hpp"

namespace causal {

struct ShadowFrame {
  PhasePoint base;
  int n = 0;
  std::vector<Vec> basis;  // e_alpha, alpha = 1..n-2
  Mat gE, gE_inv;          // g_E(e_alpha, e_beta) = g_ab e_alpha^a e_beta^b
  std::pair<int, int> sig{0, 0};
  double det_gE = 0.0;
  double kernel_residual = 0.0;  // max |g_a e_alpha^a|
};

// Primary construction: Householder kernel basis of the covector g_a, then
// the quotient by v drops the kernel direction with the largest |v|
// coefficient (pivot-ordered, deterministic).
ShadowFrame shadow_frame(const DefiningFunction& G, const PhasePoint& p);

// Second deterministic construction (Gram-Schmidt over projected coordinate
// axes) used by basis-independence tests.
ShadowFrame shadow_frame_alt(const DefiningFunction& G, const PhasePoint& p);

// Shared core when g_a / g_ab are already available.
ShadowFrame shadow_from_values(const PhasePoint& p, const Vec& g, const Mat& hess,
                               bool alt_construction = false);

}  // namespace causal
