#include "causal/congruence.hpp"

#include <cmath>

namespace causal {

namespace {

PhasePoint unpack_phase(const Vec& y, int n) {
  PhasePoint p;
  p.x.assign(y.begin(), y.begin() + n);
  p.v.assign(y.begin() + n, y.begin() + 2 * n);
  return p;
}

}  // namespace

std::pair<Vec, Vec> jacobi_rhs(const DefiningFunction& G, const PhasePoint& phase, const Vec& J,
                               const Vec& Jdot) {
  TensorBundle b = compute_bundle(G, phase, Depth::Linearized);
  const int n = G.n;
  Vec dJ = Jdot;
  Vec dJdot(static_cast<size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    double s = 0.0;
    for (int c = 0; c < n; ++c)
      s += b.dudx(a, c) * J[static_cast<size_t>(c)] + b.dudv(a, c) * Jdot[static_cast<size_t>(c)];
    dJdot[static_cast<size_t>(a)] = s;
  }
  return {std::move(dJ), std::move(dJdot)};
}

VertexCongruence vertex_congruence(const DefiningFunction& G, const Vec& x0, const Vec& v0,
                                   double t_end, double tol) {
  const int n = G.n;
  PhasePoint vert{x0, v0};
  check_phase_point(vert);
  const double g0 = G.G(vert);
  if (std::abs(g0) > 1e-10)
    throw DomainError("vertex_congruence: vertex direction is not on the cone");

  ShadowFrame vf = shadow_frame(G, vert);
  const int m = n - 2;

  VertexCongruence cong;
  cong.geometry = G.name;
  cong.n = n;
  cong.vertex = vert;
  cong.seed = vf.basis;
  cong.def = &G;

  // State layout: (x, v, J_1, Jdot_1, ..., J_m, Jdot_m).
  const size_t dim = 2 * static_cast<size_t>(n) * (1 + static_cast<size_t>(m));
  Vec y0(dim, 0.0);
  for (int i = 0; i < n; ++i) {
    y0[static_cast<size_t>(i)] = x0[static_cast<size_t>(i)];
    y0[static_cast<size_t>(n + i)] = v0[static_cast<size_t>(i)];
  }
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i)
      y0[2 * static_cast<size_t>(n) * (1 + static_cast<size_t>(j)) + static_cast<size_t>(n + i)] =
          vf.basis[static_cast<size_t>(j)][static_cast<size_t>(i)];

  auto rhs = [&G, n, m](double, const Vec& y, Vec& dy) {
    PhasePoint p = unpack_phase(y, n);
    TensorBundle b = compute_bundle(G, p, Depth::Linearized);
    dy.assign(y.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      dy[static_cast<size_t>(i)] = p.v[static_cast<size_t>(i)];
      dy[static_cast<size_t>(n + i)] = b.u[static_cast<size_t>(i)];
    }
    for (int j = 0; j < m; ++j) {
      const size_t off = 2 * static_cast<size_t>(n) * (1 + static_cast<size_t>(j));
      for (int a = 0; a < n; ++a) {
        dy[off + static_cast<size_t>(a)] = y[off + static_cast<size_t>(n + a)];
        double s = 0.0;
        for (int c = 0; c < n; ++c)
          s += b.dudx(a, c) * y[off + static_cast<size_t>(c)] +
               b.dudv(a, c) * y[off + static_cast<size_t>(n + c)];
        dy[off + static_cast<size_t>(n + a)] = s;
      }
    }
  };

  cong.sol = integrate_ode(rhs, 0.0, std::move(y0), t_end, tol, tol);
  cong.t_reached = cong.sol.t_end;
  cong.exit = cong.sol.exit;
  return cong;
}

CongruenceState expansion_decomposition(const DefiningFunction& G, double t,
                                        const PhasePoint& phase, const std::vector<Vec>& J,
                                        const std::vector<Vec>& Jdot) {
  const int n = G.n;
  const int m = n - 2;
  TensorBundle b = compute_bundle(G, phase, Depth::Curvature);

  CongruenceState st;
  st.t = t;
  st.phase = phase;
  st.J = J;
  st.Jdot = Jdot;
  st.shadow = shadow_from_values(phase, b.g, b.hess);

  // Components in the basis {v, e_1..e_m, w} with w the Euclidean-raised g_a
  // (transversal): J lies in ker(g_a), so its w-component monitors drift.
  Mat B(n, n);
  for (int i = 0; i < n; ++i) {
    B(i, 0) = phase.v[static_cast<size_t>(i)];
    for (int j = 0; j < m; ++j) B(i, 1 + j) = st.shadow.basis[static_cast<size_t>(j)][static_cast<size_t>(i)];
    B(i, n - 1) = b.g[static_cast<size_t>(i)];
  }
  Lu lub(B);
  if (lub.singular()) throw RegularityError("expansion_decomposition: frame not invertible");

  Mat A(m, m), F(m, m);
  for (int i = 0; i < m; ++i) {
    // nabla_J k = Jdot + U(J).
    Vec f(static_cast<size_t>(n), 0.0);
    for (int bidx = 0; bidx < n; ++bidx) {
      double s = Jdot[static_cast<size_t>(i)][static_cast<size_t>(bidx)];
      for (int a = 0; a < n; ++a)
        s += J[static_cast<size_t>(i)][static_cast<size_t>(a)] * b.U(a, bidx);
      f[static_cast<size_t>(bidx)] = s;
    }
    Vec cj = lub.solve(J[static_cast<size_t>(i)]);
    Vec cf = lub.solve(f);
    st.quotient_residual = std::max(st.quotient_residual, std::abs(cj[static_cast<size_t>(n - 1)]));
    for (int al = 0; al < m; ++al) {
      A(al, i) = cj[static_cast<size_t>(1 + al)];
      F(al, i) = cf[static_cast<size_t>(1 + al)];
    }
  }

  Lu lua(A);
  st.det_JE = lua.det();
  st.lambda_K = std::sqrt(std::abs(st.shadow.det_gE)) * std::abs(st.det_JE);
  if (lua.singular() || lua.cond_1() > 1e14) {
    st.jacobian_singular = true;
    return st;
  }

  Mat P = matmul(F, lua.inverse());
  st.theta = 0.0;
  for (int i = 0; i < m; ++i) st.theta += P(i, i);

  Mat Pl = matmul(st.shadow.gE, P);
  st.rho_low = Mat(m, m);
  st.sigma_low = Mat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      st.rho_low(i, j) = 0.5 * (Pl(i, j) - Pl(j, i));
      st.sigma_low(i, j) =
          0.5 * (Pl(i, j) + Pl(j, i)) - st.theta / m * st.shadow.gE(i, j);
    }
  Mat re = matmul(st.shadow.gE_inv, st.rho_low);
  Mat se = matmul(st.shadow.gE_inv, st.sigma_low);
  Mat r2 = matmul(re, re), s2 = matmul(se, se);
  st.tr_rho2 = 0.0;
  st.tr_sigma2 = 0.0;
  for (int i = 0; i < m; ++i) {
    st.tr_rho2 += r2(i, i);
    st.tr_sigma2 += s2(i, i);
  }

  // tr S# on E.
  Mat Sproj(m, m);
  for (int al = 0; al < m; ++al)
    for (int be = 0; be < m; ++be) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb)
          s += b.S(a, bb) * st.shadow.basis[static_cast<size_t>(al)][static_cast<size_t>(a)] *
               st.shadow.basis[static_cast<size_t>(be)][static_cast<size_t>(bb)];
      Sproj(al, be) = s;
    }
  Mat SE = matmul(st.shadow.gE_inv, Sproj);
  st.trS = 0.0;
  for (int i = 0; i < m; ++i) st.trS += SE(i, i);

  return st;
}

CongruenceState VertexCongruence::state_at(double t) const {
  const Vec y = sol.at(t);
  const int m = n - 2;
  PhasePoint p = unpack_phase(y, n);
  std::vector<Vec> J(static_cast<size_t>(m)), Jd(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    const size_t off = 2 * static_cast<size_t>(n) * (1 + static_cast<size_t>(j));
    J[static_cast<size_t>(j)].assign(y.begin() + off, y.begin() + off + n);
    Jd[static_cast<size_t>(j)].assign(y.begin() + off + n, y.begin() + off + 2 * n);
  }
  return expansion_decomposition(*def, t, p, J, Jd);
}

std::vector<CongruenceState> VertexCongruence::states(double t_min, double t_max,
                                                      int count) const {
  std::vector<CongruenceState> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = t_min + (t_max - t_min) * static_cast<double>(i) / (count - 1);
    if (!sol.covers(t)) break;
    out.push_back(state_at(t));
  }
  return out;
}

std::vector<ResidualSample> raychaudhuri_samples(const VertexCongruence& cong, double t_min,
                                                 int count) {
  std::vector<ResidualSample> out;
  const double dir = cong.t_reached >= 0.0 ? 1.0 : -1.0;
  const double span = std::abs(cong.t_reached);
  if (span <= t_min * 1.1) return out;
  const int m = cong.n - 2;

  for (int i = 0; i < count; ++i) {
    // Log-spaced |t| from t_min to just inside the end of the run.
    const double frac = static_cast<double>(i) / (count - 1);
    const double ta = t_min * std::pow(0.96 * span / t_min, frac);
    // Stencil width ~ t^{3/2} keeps the 4th-order differencing error of
    // theta' (which grows like t^-6 at fixed h) uniformly small.
    double h = 0.02 * std::pow(ta, 1.5);
    h = std::min(h, 0.24 * (0.999 * span - ta));
    h = std::min(h, 0.24 * (ta - 0.5 * t_min));
    if (h <= 0.0) continue;

    ResidualSample s;
    s.t = dir * ta;
    CongruenceState c0 = cong.state_at(dir * ta);
    if (c0.jacobian_singular) continue;
    double th[5], lk[5];
    bool ok = true;
    for (int j = -2; j <= 2; ++j) {
      CongruenceState cj =
          j == 0 ? c0 : cong.state_at(dir * ta + j * h);
      if (cj.jacobian_singular || cj.lambda_K <= 0.0) {
        ok = false;
        break;
      }
      th[j + 2] = cj.theta;
      lk[j + 2] = std::log(cj.lambda_K);
    }
    if (!ok) continue;
    s.theta = c0.theta;
    s.tr_sigma2 = c0.tr_sigma2;
    s.tr_rho2 = c0.tr_rho2;
    s.trS = c0.trS;
    s.theta_dot = (-th[4] + 8.0 * th[3] - 8.0 * th[1] + th[0]) / (12.0 * h);
    const double dlog = (-lk[4] + 8.0 * lk[3] - 8.0 * lk[1] + lk[0]) / (12.0 * h);
    s.theta_cross = std::abs(dlog - s.theta);
    s.residual =
        std::abs(s.theta_dot + s.tr_rho2 + s.tr_sigma2 + s.theta * s.theta / m - s.trS);
    out.push_back(s);
  }
  return out;
}

double raychaudhuri_residual(const std::vector<ResidualSample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, s.residual);
  return worst;
}

std::vector<ResidualSample> raychaudhuri_grid_residual(const std::vector<CongruenceState>& st) {
  std::vector<ResidualSample> out;
  if (st.size() < 5) return out;
  const double h = st[1].t - st[0].t;
  const int m = static_cast<int>(st[0].shadow.basis.size());
  for (size_t i = 2; i + 2 < st.size(); ++i) {
    if (st[i].jacobian_singular) continue;
    ResidualSample s;
    s.t = st[i].t;
    s.theta = st[i].theta;
    s.tr_sigma2 = st[i].tr_sigma2;
    s.tr_rho2 = st[i].tr_rho2;
    s.trS = st[i].trS;
    s.theta_dot = (-st[i + 2].theta + 8.0 * st[i + 1].theta - 8.0 * st[i - 1].theta +
                   st[i - 2].theta) /
                  (12.0 * h);
    s.residual =
        std::abs(s.theta_dot + s.tr_rho2 + s.tr_sigma2 + s.theta * s.theta / m - s.trS);
    if (st[i + 1].lambda_K > 0.0 && st[i - 1].lambda_K > 0.0) {
      const double dlog = (std::log(st[i + 1].lambda_K) - std::log(st[i - 1].lambda_K)) /
                          (2.0 * h);
      s.theta_cross = std::abs(dlog - s.theta);
    }
    out.push_back(s);
  }
  return out;
}

FocusingReport focusing_check(const VertexCongruence& cong, double t_min, int grid) {
  FocusingReport rep;
  const int m = cong.n - 2;
  const double dir = cong.t_reached >= 0.0 ? 1.0 : -1.0;
  const double span = std::abs(cong.t_reached);

  std::vector<double> ts, theta, trS, detJE, mu;
  ts.reserve(static_cast<size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double ta = t_min + (0.999 * span - t_min) * static_cast<double>(i) / (grid - 1);
    const double t = dir * ta;
    if (!cong.sol.covers(t)) break;
    CongruenceState st = cong.state_at(t);
    ts.push_back(t);
    theta.push_back(st.jacobian_singular ? std::nan("") : st.theta);
    trS.push_back(st.trS);
    detJE.push_back(st.det_JE);
    mu.push_back(std::pow(std::abs(st.lambda_K), 1.0 / m));
  }
  if (ts.size() < 5) return rep;

  size_t i0 = ts.size();
  for (size_t i = 0; i < ts.size(); ++i)
    if (std::isfinite(theta[i]) && theta[i] < 0.0) {
      i0 = i;
      break;
    }
  if (i0 == ts.size()) return rep;  // expansion never turns negative

  rep.triggered = true;
  rep.t0 = ts[i0];
  rep.theta0 = theta[i0];
  rep.bound = ts[i0] + dir * (-static_cast<double>(m) / theta[i0]);

  rep.energy_ok = true;
  for (size_t i = i0; i < ts.size(); ++i)
    if (trS[i] > 1e-10) rep.energy_ok = false;

  // Conjugate point: first try a det sign change, then a volume minimum.
  auto det_at = [&](double t) { return cong.state_at(t).det_JE; };
  auto mu_at = [&](double t) {
    return std::pow(std::abs(cong.state_at(t).lambda_K), 1.0 / m);
  };

  for (size_t i = i0; i + 1 < ts.size(); ++i) {
    if (detJE[i] * detJE[i + 1] < 0.0) {
      double a = ts[i], b = ts[i + 1];
      double fa = detJE[i];
      for (int it = 0; it < 80; ++it) {
        const double c = 0.5 * (a + b);
        const double fc = det_at(c);
        if (fa * fc <= 0.0) b = c;
        else {
          a = c;
          fa = fc;
        }
      }
      rep.conjugate_found = true;
      rep.t_conjugate = 0.5 * (a + b);
      rep.locator = "det-sign-bisection";
      break;
    }
  }
  if (!rep.conjugate_found) {
    // Interior minimum of the volume scale mu (covers even-order zeros and
    // the vertex of a backward run).
    size_t imin = i0;
    for (size_t i = i0; i < ts.size(); ++i)
      if (mu[i] < mu[imin]) imin = i;
    const bool interior = imin > 0 && imin + 1 < ts.size();
    const double scale = *std::max_element(mu.begin(), mu.end());
    if (mu[imin] < 1e-3 * scale) {
      double a = imin > 0 ? ts[imin - 1] : ts[imin];
      double b = imin + 1 < ts.size() ? ts[imin + 1] : ts[imin];
      if (!interior) {
        // Zero at the span edge: tighten toward it.
        a = ts[imin > 0 ? imin - 1 : imin];
        b = dir * 0.999999 * span;
        if (imin == 0) {
          a = dir * t_min;
          b = ts[1];
        }
      }
      for (int it = 0; it < 200; ++it) {
        const double c1 = a + 0.381966 * (b - a);
        const double c2 = b - 0.381966 * (b - a);
        if (mu_at(c1) < mu_at(c2)) b = c2;
        else a = c1;
      }
      rep.conjugate_found = true;
      rep.t_conjugate = 0.5 * (a + b);
      rep.locator = "volume-min-search";
    }
  }

  if (rep.conjugate_found)
    rep.bound_satisfied = dir * rep.t_conjugate <= dir * rep.bound + 1e-6;

  // Concavity of mu = lambda_K^{1/(n-2)} wherever trS <= 0, away from the
  // conjugate point (mu kinks upward at its zero).
  rep.concavity_ok = true;
  const double dt = std::abs(ts[1] - ts[0]);
  for (size_t i = 1; i + 1 < ts.size(); ++i) {
    if (trS[i] > 1e-10) continue;
    if (rep.conjugate_found && std::abs(ts[i] - rep.t_conjugate) < 3.0 * dt) continue;
    const double dd = mu[i + 1] - 2.0 * mu[i] + mu[i - 1];
    rep.max_second_difference = std::max(rep.max_second_difference, dd);
    if (dd > 1e-7 * (1.0 + mu[i])) rep.concavity_ok = false;
  }
  return rep;
}

}  // namespace causal
