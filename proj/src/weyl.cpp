#include "causal/weyl.hpp"

#include <cmath>

namespace causal {

namespace {

Mat project_to_frame(const Mat& S, const std::vector<Vec>& basis) {
  const int m = static_cast<int>(basis.size());
  const int n = S.rows;
  Mat out(m, m);
  for (int al = 0; al < m; ++al)
    for (int be = 0; be < m; ++be) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          s += S(a, b) * basis[static_cast<size_t>(al)][static_cast<size_t>(a)] *
               basis[static_cast<size_t>(be)][static_cast<size_t>(b)];
      out(al, be) = s;
    }
  return out;
}

double frob(const Mat& m) {
  double s = 0.0;
  for (double x : m.a) s += x * x;
  return std::sqrt(s);
}

WeylData weyl_from(const ShadowFrame& frame, const Mat& S, const Mat& gE, const Mat& gE_inv,
                   const PhasePoint& p, int n) {
  WeylData w;
  w.base = p;
  w.n = n;
  w.frame = frame;
  w.Sproj = project_to_frame(S, frame.basis);

  const int m = n - 2;
  Mat TE = matmul(gE_inv, w.Sproj);
  double tr = 0.0;
  for (int i = 0; i < m; ++i) tr += TE(i, i);
  w.X = 4.0 / m * tr;

  w.W_endo = TE;
  for (int i = 0; i < m; ++i) w.W_endo(i, i) -= tr / m;
  w.W_low = w.Sproj;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) w.W_low(i, j) -= tr / m * gE(i, j);

  Mat check = matmul(gE_inv, w.W_low);
  double trc = 0.0;
  for (int i = 0; i < m; ++i) trc += check(i, i);
  w.tracefree_residual = std::abs(trc);
  return w;
}

}  // namespace

WeylData weyl_tensor(const DefiningFunction& G, const PhasePoint& p,
                     const ShadowFrame* frame_override) {
  ShadowFrame frame = frame_override ? *frame_override : shadow_frame(G, p);
  TensorBundle b = compute_bundle(G, p, Depth::Curvature);

  // g_E must come from this G's Hessian even when the frame is shared.
  const int m = G.n - 2;
  Mat gE(m, m);
  for (int al = 0; al < m; ++al)
    for (int be = 0; be < m; ++be) {
      double s = 0.0;
      for (int a = 0; a < G.n; ++a)
        for (int bb = 0; bb < G.n; ++bb)
          s += b.hess(a, bb) * frame.basis[static_cast<size_t>(al)][static_cast<size_t>(a)] *
               frame.basis[static_cast<size_t>(be)][static_cast<size_t>(bb)];
      gE(al, be) = s;
    }
  Lu lu(gE);
  if (lu.singular()) throw RegularityError("weyl_tensor: degenerate g_E");
  return weyl_from(frame, b.S, gE, lu.inverse(), p, G.n);
}

ConformalContext make_conformal_context(const DefiningFunction& base,
                                        const ConformalFactor& factor) {
  ConformalContext ctx;
  ctx.base = &base;
  ctx.factor = factor;
  ctx.rescaled = conformal_rescale(base, factor);
  ctx.p_degree = base.k + factor.q;
  return ctx;
}

ConformalPointReport conformal_compare(const ConformalContext& ctx, const PhasePoint& p) {
  const DefiningFunction& G = *ctx.base;
  const double pd = ctx.p_degree;

  if (!ctx.factor.J.in_domain(p)) throw DomainError("conformal factor undefined at the point");
  const double Jval = ctx.factor.J.value(p.x, p.v);
  if (std::abs(Jval) < 1e-12) throw DomainError("conformal factor vanishes at the point");

  // Shared realization of E from the base geometry.
  ShadowFrame frame = shadow_frame(G, p);
  WeylData w = weyl_tensor(G, p, &frame);
  WeylData wp = weyl_tensor(ctx.rescaled, p, &frame);

  ConformalPointReport rep;
  rep.point = p;
  rep.X = w.X;
  rep.X_measured = wp.X;
  rep.gE_signature = frame.sig;
  rep.J = Jval;

  auto v2 = spray_V2(G, p, ctx.factor.J);
  rep.VJ = v2[1];
  rep.V2J = v2[2];
  // X' = X + 2 V(delta) - delta^2 with delta = (p-1)^{-1} J^{-1} V(J):
  // the coefficient of (V(J)/J)^2 is -(2p-1)/(p-1)^2.
  rep.X_predicted = w.X + 2.0 / (pd - 1.0) * rep.V2J / Jval -
                    (2.0 * pd - 1.0) / ((pd - 1.0) * (pd - 1.0)) * rep.VJ * rep.VJ /
                        (Jval * Jval);
  rep.trace_law_residual = std::abs(rep.X_measured - rep.X_predicted);

  Mat diff = wp.W_endo;
  for (size_t i = 0; i < diff.a.size(); ++i) diff.a[i] -= w.W_endo.a[i];
  rep.weyl_abs_deviation = frob(diff);
  rep.weyl_deviation = rep.weyl_abs_deviation / std::max(frob(w.W_endo), 1e-12);
  return rep;
}

}  // namespace causal
