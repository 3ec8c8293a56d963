#include "causal/curvature.hpp"

namespace causal {

ConnectionData connection(const DefiningFunction& G, const PhasePoint& p) {
  TensorBundle b = compute_bundle(G, p, Depth::Curvature);
  ConnectionData c;
  c.base = p;
  c.U = b.U;

  double r1 = 0.0;
  for (int bb = 0; bb < b.n; ++bb) {
    double s = 0.0;
    for (int a = 0; a < b.n; ++a) s += b.U(bb, a) * b.g[static_cast<size_t>(a)];
    r1 = std::max(r1, std::abs(s - b.Gx[static_cast<size_t>(bb)]));
  }
  c.contraction_residual = r1 / (1.0 + max_abs(b.Gx));

  double r2 = 0.0;
  for (int a = 0; a < b.n; ++a) {
    double s = 0.0;
    for (int bb = 0; bb < b.n; ++bb) s += p.v[static_cast<size_t>(bb)] * b.U(bb, a);
    r2 = std::max(r2, std::abs(s + b.u[static_cast<size_t>(a)]));
  }
  c.euler_residual = r2 / (1.0 + max_abs(b.u));
  return c;
}

namespace {

// Shared residual assembly; bundle must be at identity depth for the
// derivative identities, curvature depth suffices for the algebraic ones.
std::map<std::string, double> residuals_from_bundle(const TensorBundle& b) {
  const int n = b.n;
  std::map<std::string, double> out;

  const double gscale = 1.0 + max_abs(b.g);
  const double gxscale = 1.0 + max_abs(b.Gx);
  const double uscale = 1.0 + max_abs(b.u);
  double rscale = 1.0, sscale = 1.0;
  for (double x : b.R.a) rscale = std::max(rscale, std::abs(x));
  for (double x : b.S.a) sscale = std::max(sscale, std::abs(x));

  // V(G) = 0 (holds off-cone as well).
  {
    double vg = 0.0;
    for (int a = 0; a < n; ++a)
      vg += b.p.v[static_cast<size_t>(a)] * b.Gx[static_cast<size_t>(a)] +
            b.u[static_cast<size_t>(a)] * b.g[static_cast<size_t>(a)];
    out["V(G)"] = std::abs(vg) / (gxscale * (1.0 + max_abs(b.p.v)));
  }

  // U_b^a g_a = G_b.
  {
    double r = 0.0;
    for (int bb = 0; bb < n; ++bb) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += b.U(bb, a) * b.g[static_cast<size_t>(a)];
      r = std::max(r, std::abs(s - b.Gx[static_cast<size_t>(bb)]));
    }
    out["Ug=Gx"] = r / gxscale;
  }

  // v^b U_b^a = -u^a.
  {
    double r = 0.0;
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int bb = 0; bb < n; ++bb) s += b.p.v[static_cast<size_t>(bb)] * b.U(bb, a);
      r = std::max(r, std::abs(s + b.u[static_cast<size_t>(a)]));
    }
    out["vU=-u"] = r / uscale;
  }

  // R_ab^c g_c = 0.
  {
    double r = 0.0;
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += b.R(a, bb, c) * b.g[static_cast<size_t>(c)];
        r = std::max(r, std::abs(s));
      }
    out["Rg=0"] = r / (rscale * gscale);
  }

  // v^a S_ab = 0 (on the cone).
  {
    double r = 0.0;
    for (int bb = 0; bb < n; ++bb) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += b.p.v[static_cast<size_t>(a)] * b.S(a, bb);
      r = std::max(r, std::abs(s));
    }
    out["vS=0"] = r / (sscale * (1.0 + max_abs(b.p.v)));
  }

  // 2 v^a R_ab^c = S_b^c.
  {
    double r = 0.0;
    for (int bb = 0; bb < n; ++bb)
      for (int c = 0; c < n; ++c) {
        double lhs = 0.0;
        for (int a = 0; a < n; ++a) lhs += 2.0 * b.p.v[static_cast<size_t>(a)] * b.R(a, bb, c);
        double rhs = 0.0;
        for (int d = 0; d < n; ++d) rhs += b.S(bb, d) * b.hess_inv(d, c);
        r = std::max(r, std::abs(lhs - rhs));
      }
    out["2vR=S"] = r / sscale;
  }

  // T_ab = T_ba after lowering (monitored symmetrization defect).
  out["T_asym"] = b.t_asym / sscale;

  if (b.depth != Depth::Identities) return out;

  // V(g_a) = G_a.
  {
    double r = 0.0;
    for (int a = 0; a < n; ++a)
      r = std::max(r, std::abs(b.Vg[static_cast<size_t>(a)] - b.Gx[static_cast<size_t>(a)]));
    out["V(g)=Gx"] = r / gxscale;
  }

  // D_[a S_b]^c = 3 R_ab^c.
  {
    double r = 0.0, scale = rscale;
    for (const double x : b.dSup_dv.a) scale = std::max(scale, std::abs(x));
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb)
        for (int c = 0; c < n; ++c) {
          const double lhs = 0.5 * (b.dSup_dv(a, bb, c) - b.dSup_dv(bb, a, c));
          r = std::max(r, std::abs(lhs - 3.0 * b.R(a, bb, c)));
        }
    out["DS=3R"] = r / scale;
  }

  // D_[a R_bc]^d = 0 (normalized antisymmetrization over six permutations).
  {
    double r = 0.0, scale = rscale;
    for (const double x : b.dR_dv.a) scale = std::max(scale, std::abs(x));
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const double s = (b.dR_dv(a, bb, c, d) + b.dR_dv(bb, c, a, d) +
                              b.dR_dv(c, a, bb, d)) /
                             3.0;
            r = std::max(r, std::abs(s));
          }
    out["DR=0"] = r / scale;
  }

  // Bianchi: H_[a R_bc]^d + R_[ab^e D_c] U_e^d = 0 with H_a = d_a - U_a^e D_e.
  {
    double r = 0.0, scale = rscale;
    Ten4 HR(n);
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            double h = b.dR_dx(a, bb, c, d);
            for (int e = 0; e < n; ++e) h -= b.U(a, e) * b.dR_dv(e, bb, c, d);
            HR(a, bb, c, d) = h;
            scale = std::max(scale, std::abs(h));
          }
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            double s = (HR(a, bb, c, d) + HR(bb, c, a, d) + HR(c, a, bb, d)) / 3.0;
            double t = 0.0;
            for (int e = 0; e < n; ++e)
              t += b.R(a, bb, e) * b.dU_dv(c, e, d) + b.R(bb, c, e) * b.dU_dv(a, e, d) +
                   b.R(c, a, e) * b.dU_dv(bb, e, d);
            s += t / 3.0;
            r = std::max(r, std::abs(s));
          }
    out["Bianchi"] = r / scale;
  }

  return out;
}

}  // namespace

CurvatureData curvature(const DefiningFunction& G, const PhasePoint& p) {
  TensorBundle b = compute_bundle(G, p, Depth::Curvature);
  CurvatureData c;
  c.base = p;
  c.R = b.R;
  c.S = b.S;
  c.T = b.T;
  c.t_asym = b.t_asym;
  c.residuals = residuals_from_bundle(b);
  return c;
}

std::map<std::string, double> identity_residuals(const DefiningFunction& G,
                                                 const PhasePoint& p) {
  TensorBundle b = compute_bundle(G, p, Depth::Identities);
  auto out = residuals_from_bundle(b);

  // Euler identities of the jets themselves.
  RingPtr ring = JetRing::get(JetSpec{G.n, 0, 3, 3});
  Jet j = eval_field_jet(G.G, p, ring);
  const int n = G.n;
  auto part = [&](std::initializer_list<int> vs) {
    std::array<uint8_t, 16> e{};
    for (int a : vs) e[static_cast<size_t>(n + a)]++;
    return j.partial(e);
  };
  double scale = 1.0 + std::abs(j.value());
  double r0, r1 = 0.0, r2 = 0.0;
  {
    double vg = 0.0;
    for (int a = 0; a < n; ++a) vg += p.v[static_cast<size_t>(a)] * part({a});
    r0 = std::abs(vg - G.k * j.value());
    for (int a = 0; a < n; ++a) scale = std::max(scale, 1.0 + std::abs(part({a})));
  }
  for (int bb = 0; bb < n; ++bb) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += p.v[static_cast<size_t>(a)] * part({a, bb});
    r1 = std::max(r1, std::abs(s - (G.k - 1.0) * part({bb})));
  }
  for (int bb = 0; bb < n; ++bb)
    for (int c = bb; c < n; ++c) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += p.v[static_cast<size_t>(a)] * part({a, bb, c});
      r2 = std::max(r2, std::abs(s - (G.k - 2.0) * part({bb, c})));
    }
  out["euler"] = std::max({r0, r1, r2}) / scale;
  return out;
}

IdentityReport identity_suite(const DefiningFunction& G, const std::vector<PhasePoint>& points) {
  IdentityReport rep;
  for (const PhasePoint& p : points) {
    auto res = identity_residuals(G, p);
    for (const auto& [name, val] : res) {
      auto it = rep.max_residual.find(name);
      if (it == rep.max_residual.end()) rep.max_residual[name] = val;
      else it->second = std::max(it->second, val);
    }
    ++rep.points;
  }
  return rep;
}

}  // namespace causal
