#include "causal/shadow.hpp"

#include <cmath>

namespace causal {

namespace {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<Vec> quotient_basis_householder(const Vec& g, const Vec& v) {
  // Kernel directions of the covector g_a, then drop the one carrying the
  // largest |v| coefficient (that direction represents v in the quotient).
  std::vector<Vec> q = householder_kernel_basis(g);
  const int m = static_cast<int>(q.size());
  Vec c(static_cast<size_t>(m));
  int pivot = 0;
  for (int i = 0; i < m; ++i) {
    c[static_cast<size_t>(i)] = dot(q[static_cast<size_t>(i)], v);
    if (std::abs(c[static_cast<size_t>(i)]) > std::abs(c[static_cast<size_t>(pivot)]))
      pivot = i;
  }
  if (std::abs(c[static_cast<size_t>(pivot)]) < 1e-12)
    throw RegularityError("shadow frame: v has no component in ker(g_a)");
  std::vector<Vec> basis;
  for (int i = 0; i < m; ++i) {
    if (i == pivot) continue;
    Vec e = q[static_cast<size_t>(i)];
    const double f = c[static_cast<size_t>(i)] / c[static_cast<size_t>(pivot)];
    for (size_t j = 0; j < e.size(); ++j) e[j] -= f * q[static_cast<size_t>(pivot)][j];
    basis.push_back(std::move(e));
  }
  return basis;
}

std::vector<Vec> quotient_basis_gram_schmidt(const Vec& g, const Vec& v) {
  const int n = static_cast<int>(g.size());
  const double g2 = dot(g, g);
  std::vector<Vec> kept;
  Vec vh = v;
  {
    const double nv = std::sqrt(dot(v, v));
    for (double& c : vh) c /= nv;
  }
  kept.push_back(vh);
  std::vector<Vec> basis;
  for (int j = 0; j < n && static_cast<int>(basis.size()) < n - 2; ++j) {
    Vec w(static_cast<size_t>(n), 0.0);
    w[static_cast<size_t>(j)] = 1.0;
    const double pg = g[static_cast<size_t>(j)] / g2;
    for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] -= pg * g[static_cast<size_t>(i)];
    for (const Vec& k : kept) {
      const double pk = dot(w, k) / dot(k, k);
      for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] -= pk * k[static_cast<size_t>(i)];
    }
    const double nw = std::sqrt(dot(w, w));
    if (nw < 1e-8) continue;
    for (double& c : w) c /= nw;
    kept.push_back(w);
    basis.push_back(w);
  }
  if (static_cast<int>(basis.size()) != n - 2)
    throw RegularityError("shadow frame: could not complete the quotient basis");
  return basis;
}

}  // namespace

ShadowFrame shadow_from_values(const PhasePoint& p, const Vec& g, const Mat& hess,
                               bool alt_construction) {
  const int n = static_cast<int>(g.size());
  if (n < 3) throw ValidationError("shadow space needs n >= 3");
  if (max_abs(g) == 0.0) throw RegularityError("shadow frame: g_a vanishes");

  ShadowFrame f;
  f.base = p;
  f.n = n;
  f.basis = alt_construction ? quotient_basis_gram_schmidt(g, p.v)
                             : quotient_basis_householder(g, p.v);

  const int m = n - 2;
  f.gE = Mat(m, m);
  for (int al = 0; al < m; ++al)
    for (int be = 0; be < m; ++be) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          s += hess(a, b) * f.basis[static_cast<size_t>(al)][static_cast<size_t>(a)] *
               f.basis[static_cast<size_t>(be)][static_cast<size_t>(b)];
      f.gE(al, be) = s;
    }

  Lu lu(f.gE);
  if (lu.singular() || lu.cond_1() > 1e12)
    throw RegularityError("shadow frame: degenerate induced metric g_E",
                          lu.singular() ? std::numeric_limits<double>::infinity()
                                        : lu.cond_1());
  f.gE_inv = lu.inverse();
  f.det_gE = lu.det();
  f.sig = signature(f.gE);

  for (const Vec& e : f.basis)
    f.kernel_residual = std::max(f.kernel_residual, std::abs(dot(g, e)));
  return f;
}

namespace {

ShadowFrame frame_impl(const DefiningFunction& G, const PhasePoint& p, bool alt) {
  check_phase_point(p);
  if (!G.G.in_domain(p)) throw DomainError("shadow_frame: point outside domain");
  const double gval = G.G(p);
  if (std::abs(gval) > 1e-10)
    throw DomainError("shadow_frame: point is off the cone (|G| = " +
                      std::to_string(std::abs(gval)) + ")");
  RingPtr ring = JetRing::get(JetSpec{G.n, 0, 2, 2});
  Jet j = eval_field_jet(G.G, p, ring);
  Vec g(static_cast<size_t>(G.n));
  Mat hess(G.n, G.n);
  for (int a = 0; a < G.n; ++a) {
    std::array<uint8_t, 16> e{};
    e[static_cast<size_t>(G.n + a)] = 1;
    g[static_cast<size_t>(a)] = j.partial(e);
    for (int b = 0; b < G.n; ++b) {
      std::array<uint8_t, 16> e2{};
      e2[static_cast<size_t>(G.n + a)]++;
      e2[static_cast<size_t>(G.n + b)]++;
      hess(a, b) = j.partial(e2);
    }
  }
  return shadow_from_values(p, g, hess, alt);
}

}  // namespace

ShadowFrame shadow_frame(const DefiningFunction& G, const PhasePoint& p) {
  return frame_impl(G, p, false);
}

ShadowFrame shadow_frame_alt(const DefiningFunction& G, const PhasePoint& p) {
  return frame_impl(G, p, true);
}

}  // namespace causal
