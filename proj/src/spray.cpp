#include "causal/spray.hpp"

namespace causal {

namespace {

// acc += f * nu_slot (multiplication by one v-block monomial, a degree shift).
void shift_mul_acc(Jet& acc, const Jet& f, int slot, int max_deg) {
  const JetRing& R = *acc.ring;
  for (const auto& e : R.deriv[static_cast<size_t>(slot)]) {
    // e.src = monomial with the extra nu_slot power, e.dst = without it.
    if (R.degree[e.src] > max_deg) continue;
    acc.c[e.src] += f.c[e.dst];
  }
}

struct Pipeline {
  const DefiningFunction& def;
  const PhasePoint& p;
  Depth depth;
  int n;
  RingPtr ring;
  int du_valid;  // total-degree validity carried by the u polynomials

  std::vector<Jet> gpoly;   // g_a
  std::vector<Jet> upoly;   // u^a
  std::vector<Jet> Upoly;   // U_b^a at (b*n + a)
  Jet Gp;

  Pipeline(const DefiningFunction& d, const PhasePoint& pt, Depth dep)
      : def(d), p(pt), depth(dep), n(d.n) {
    switch (depth) {
      case Depth::SprayValue:
        ring = JetRing::get(JetSpec{n, 1, 2, 2});
        du_valid = 0;
        break;
      case Depth::Linearized:
        ring = JetRing::get(JetSpec{n, 2, 3, 3});
        du_valid = 1;
        break;
      case Depth::Curvature:
        ring = JetRing::get(JetSpec{n, 2, 4, 4});
        du_valid = 2;
        break;
      case Depth::Identities:
        ring = JetRing::get(JetSpec{n, 3, 5, 5});
        du_valid = 3;
        break;
    }
  }

  // V(f) = v^c d_c f + u^c D_c f, products truncated at max_deg.
  Jet applyV(const Jet& f, int max_deg) {
    Jet r(ring);
    for (int c = 0; c < n; ++c) {
      Jet fx = f.dx(c);
      Jet t = fx * p.v[static_cast<size_t>(c)];
      for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += t.c[i];
      shift_mul_acc(r, fx, n + c, max_deg);
      Jet::mul_acc(r, upoly[static_cast<size_t>(c)], f.dv(c), max_deg);
    }
    return r;
  }

  TensorBundle run() {
    check_phase_point(p);
    TensorBundle b;
    b.p = p;
    b.n = n;
    b.k = def.k;
    b.depth = depth;

    Gp = eval_field_jet(def.G, p, ring);
    b.G = Gp.value();

    gpoly.reserve(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) gpoly.push_back(Gp.dv(a));

    b.g.resize(static_cast<size_t>(n));
    b.Gx.resize(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) {
      b.g[static_cast<size_t>(a)] = gpoly[static_cast<size_t>(a)].value();
      b.Gx[static_cast<size_t>(a)] = Gp.dx(a).value();
    }

    // Hessian and regularity.
    std::vector<Jet> hp(static_cast<size_t>(n) * n);
    b.hess = Mat(n, n);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        hp[static_cast<size_t>(a) * n + c] = gpoly[static_cast<size_t>(a)].dv(c);
        b.hess(a, c) = hp[static_cast<size_t>(a) * n + c].value();
      }
    Lu lu(b.hess);
    if (lu.singular())
      throw RegularityError("singular velocity Hessian at phase point",
                            std::numeric_limits<double>::infinity());
    b.cond = lu.cond_1();
    if (b.cond > 1e12)
      throw RegularityError("ill-conditioned velocity Hessian (cond > 1e12)", b.cond);
    b.hess_inv = lu.inverse();

    // rhs_b = G_b - v^c d_c g_b.
    std::vector<Jet> rhsp;
    rhsp.reserve(static_cast<size_t>(n));
    b.rhs.resize(static_cast<size_t>(n));
    for (int bb = 0; bb < n; ++bb) {
      Jet r = Gp.dx(bb);
      for (int c = 0; c < n; ++c) {
        Jet dg = gpoly[static_cast<size_t>(bb)].dx(c);
        Jet t = dg * (-p.v[static_cast<size_t>(c)]);
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += t.c[i];
        Jet sh(ring);
        shift_mul_acc(sh, dg, n + c, ring->spec.total);
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= sh.c[i];
      }
      b.rhs[static_cast<size_t>(bb)] = r.value();
      rhsp.push_back(std::move(r));
    }

    // Solve u^a g_ab = rhs_b over the ring: fixed point
    // u <- H0^{-1} (rhs - N u) with N the nonconstant part of the Hessian;
    // each sweep extends validity by one total degree.
    std::vector<Jet> Np(hp);
    for (int i = 0; i < n * n; ++i) Np[static_cast<size_t>(i)].c[0] = 0.0;
    upoly.assign(static_cast<size_t>(n), Jet(ring));
    for (int sweep = 0; sweep <= du_valid; ++sweep) {
      std::vector<Jet> resid(rhsp);
      if (sweep > 0) {
        for (int bb = 0; bb < n; ++bb) {
          Jet acc(ring);
          for (int a = 0; a < n; ++a)
            Jet::mul_acc(acc, Np[static_cast<size_t>(a) * n + bb],
                         upoly[static_cast<size_t>(a)], du_valid);
          for (size_t i = 0; i < resid[static_cast<size_t>(bb)].c.size(); ++i)
            resid[static_cast<size_t>(bb)].c[i] -= acc.c[i];
        }
      }
      for (int a = 0; a < n; ++a) {
        Jet acc(ring);
        for (int bb = 0; bb < n; ++bb) {
          Jet t = resid[static_cast<size_t>(bb)] * b.hess_inv(a, bb);
          for (size_t i = 0; i < acc.c.size(); ++i) acc.c[i] += t.c[i];
        }
        upoly[static_cast<size_t>(a)] = std::move(acc);
      }
    }
    b.u.resize(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) b.u[static_cast<size_t>(a)] = upoly[static_cast<size_t>(a)].value();

    if (depth == Depth::SprayValue) return b;

    b.dudx = Mat(n, n);
    b.dudv = Mat(n, n);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        b.dudx(a, c) = upoly[static_cast<size_t>(a)].dx(c).value();
        b.dudv(a, c) = upoly[static_cast<size_t>(a)].dv(c).value();
      }

    if (depth == Depth::Linearized) return b;

    // Connection U_b^a = -1/2 D_b u^a.
    Upoly.assign(static_cast<size_t>(n) * n, Jet(ring));
    b.U = Mat(n, n);
    for (int bb = 0; bb < n; ++bb)
      for (int a = 0; a < n; ++a) {
        Jet t = upoly[static_cast<size_t>(a)].dv(bb) * (-0.5);
        b.U(bb, a) = t.value();
        Upoly[static_cast<size_t>(bb) * n + a] = std::move(t);
      }

    const int rbound = depth == Depth::Identities ? 1 : 0;

    // Curvature: Q_ab^c = d_a U_b^c - U_a^d D_d U_b^c, R = antisym in (a,b).
    std::vector<Jet> Rpoly(static_cast<size_t>(n) * n * n, Jet(ring));
    {
      std::vector<Jet> Q(static_cast<size_t>(n) * n * n, Jet(ring));
      for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb)
          for (int c = 0; c < n; ++c) {
            Jet q = Upoly[static_cast<size_t>(bb) * n + c].dx(a);
            for (int d = 0; d < n; ++d)
              Jet::mul_acc(q, Upoly[static_cast<size_t>(a) * n + d],
                           Upoly[static_cast<size_t>(bb) * n + c].dv(d), rbound, -1.0);
            Q[(static_cast<size_t>(a) * n + bb) * n + c] = std::move(q);
          }
      for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb)
          for (int c = 0; c < n; ++c) {
            Jet r = Q[(static_cast<size_t>(a) * n + bb) * n + c];
            const Jet& m = Q[(static_cast<size_t>(bb) * n + a) * n + c];
            for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = 0.5 * (r.c[i] - m.c[i]);
            Rpoly[(static_cast<size_t>(a) * n + bb) * n + c] = std::move(r);
          }
    }
    b.R = Ten3(n);
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb)
        for (int c = 0; c < n; ++c)
          b.R(a, bb, c) = Rpoly[(static_cast<size_t>(a) * n + bb) * n + c].value();

    // Tidal force from the closed formula (symmetrized in (a,b)).
    const int sbound = rbound;           // S validity needed: value (+1 at identity depth)
    const int vbound1 = sbound + 1;      // inner V(...) one order deeper
    std::vector<Jet> Spoly(static_cast<size_t>(n) * n, Jet(ring));
    {
      std::vector<Jet> Vh(static_cast<size_t>(n) * n, Jet(ring));
      for (int a = 0; a < n; ++a)
        for (int bb = a; bb < n; ++bb) {
          Jet vh = applyV(hp[static_cast<size_t>(a) * n + bb], vbound1);
          Vh[static_cast<size_t>(a) * n + bb] = vh;
          Vh[static_cast<size_t>(bb) * n + a] = std::move(vh);
        }
      for (int a = 0; a < n; ++a)
        for (int bb = a; bb < n; ++bb) {
          Jet s = applyV(Vh[static_cast<size_t>(a) * n + bb], sbound);
          Jet t1 = applyV(gpoly[static_cast<size_t>(bb)].dx(a), sbound);
          Jet t2 = applyV(gpoly[static_cast<size_t>(a)].dx(bb), sbound);
          for (size_t i = 0; i < s.c.size(); ++i) s.c[i] -= t1.c[i] + t2.c[i];
          Jet gxx = Gp.dx(a).dx(bb);
          for (size_t i = 0; i < s.c.size(); ++i) s.c[i] += 2.0 * gxx.c[i];
          // -2 g_cd U_a^c U_b^d term.
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              Jet prod = Jet::mul(Upoly[static_cast<size_t>(a) * n + c],
                                  Upoly[static_cast<size_t>(bb) * n + d], sbound);
              Jet::mul_acc(s, prod, hp[static_cast<size_t>(c) * n + d], sbound, -2.0);
            }
          for (double& cc : s.c) cc *= 0.5;
          Spoly[static_cast<size_t>(a) * n + bb] = s;
          Spoly[static_cast<size_t>(bb) * n + a] = std::move(s);
        }
    }
    b.S = Mat(n, n);
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb)
        b.S(a, bb) = Spoly[static_cast<size_t>(a) * n + bb].value();

    // T_a^b = 2 v^c R_ca^b and its lowered asymmetry defect.
    b.T = Mat(n, n);
    for (int a = 0; a < n; ++a)
      for (int bb = 0; bb < n; ++bb) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += p.v[static_cast<size_t>(c)] * b.R(c, a, bb);
        b.T(a, bb) = 2.0 * s;
      }
    {
      Mat tlow(n, n);
      for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb) {
          double s = 0.0;
          for (int c = 0; c < n; ++c) s += b.T(a, c) * b.hess(c, bb);
          tlow(a, bb) = s;
        }
      for (int a = 0; a < n; ++a)
        for (int bb = a + 1; bb < n; ++bb)
          b.t_asym = std::max(b.t_asym, std::abs(tlow(a, bb) - tlow(bb, a)));
    }

    if (depth != Depth::Identities) return b;

    b.dU_dv = Ten3(n);
    b.dU_dx = Ten3(n);
    for (int c = 0; c < n; ++c)
      for (int bb = 0; bb < n; ++bb)
        for (int a = 0; a < n; ++a) {
          b.dU_dv(c, bb, a) = Upoly[static_cast<size_t>(bb) * n + a].dv(c).value();
          b.dU_dx(c, bb, a) = Upoly[static_cast<size_t>(bb) * n + a].dx(c).value();
        }

    b.dR_dv = Ten4(n);
    b.dR_dx = Ten4(n);
    for (int e = 0; e < n; ++e)
      for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb)
          for (int c = 0; c < n; ++c) {
            const Jet& r = Rpoly[(static_cast<size_t>(a) * n + bb) * n + c];
            b.dR_dv(e, a, bb, c) = r.dv(e).value();
            b.dR_dx(e, a, bb, c) = r.dx(e).value();
          }

    // Raised S_b^c = S_bd g^{dc} via a degree-1 Neumann inverse of the
    // Hessian polynomial, then one v-derivative.
    {
      std::vector<Jet> ginv(static_cast<size_t>(n) * n, Jet(ring));
      for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb) {
          Jet t(ring, b.hess_inv(a, bb));
          // - H0^{-1} N H0^{-1} up to degree 1
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              Jet np = hp[static_cast<size_t>(c) * n + d];
              np.c[0] = 0.0;
              Jet term = np * (-b.hess_inv(a, c) * b.hess_inv(d, bb));
              for (size_t i = 0; i < t.c.size(); ++i) t.c[i] += term.c[i];
            }
          ginv[static_cast<size_t>(a) * n + bb] = std::move(t);
        }
      b.dSup_dv = Ten3(n);
      for (int bb = 0; bb < n; ++bb)
        for (int c = 0; c < n; ++c) {
          Jet sup(ring);
          for (int d = 0; d < n; ++d)
            Jet::mul_acc(sup, Spoly[static_cast<size_t>(bb) * n + d],
                         ginv[static_cast<size_t>(d) * n + c], 1);
          for (int e = 0; e < n; ++e) b.dSup_dv(e, bb, c) = sup.dv(e).value();
        }
    }

    b.Vg.resize(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a)
      b.Vg[static_cast<size_t>(a)] = applyV(gpoly[static_cast<size_t>(a)], 0).value();

    return b;
  }
};

}  // namespace

TensorBundle compute_bundle(const DefiningFunction& G, const PhasePoint& p, Depth depth) {
  Pipeline pipe(G, p, depth);
  return pipe.run();
}

std::array<double, 3> spray_V2(const DefiningFunction& G, const PhasePoint& p,
                               const ScalarField& f) {
  Pipeline pipe(G, p, Depth::Linearized);
  pipe.run();
  Jet fp = eval_field_jet(f, p, pipe.ring);
  Jet vf = pipe.applyV(fp, 1);
  Jet vvf = pipe.applyV(vf, 0);
  return {fp.value(), vf.value(), vvf.value()};
}

SprayData spray(const DefiningFunction& G, const PhasePoint& p) {
  TensorBundle b = compute_bundle(G, p, Depth::SprayValue);
  SprayData s;
  s.base = p;
  s.u = b.u;
  s.contact = b.g;
  s.cond = b.cond;

  double worst = 0.0, scale = max_abs(b.Gx);
  for (int bb = 0; bb < b.n; ++bb) {
    double lhs = 0.0;
    for (int a = 0; a < b.n; ++a) lhs += b.u[static_cast<size_t>(a)] * b.hess(a, bb);
    worst = std::max(worst, std::abs(lhs - b.rhs[static_cast<size_t>(bb)]));
  }
  s.residual = worst / (1.0 + scale);

  double vg = 0.0;
  for (int a = 0; a < b.n; ++a)
    vg += p.v[static_cast<size_t>(a)] * b.Gx[static_cast<size_t>(a)] +
          b.u[static_cast<size_t>(a)] * b.g[static_cast<size_t>(a)];
  s.VG = vg;
  return s;
}

}  // namespace causal
