#include "causal/oracle.hpp"

namespace causal {

Vec ChristoffelData::tidal_apply(const Vec& k, const Vec& X) const {
  Vec out(static_cast<size_t>(n), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double w = k[static_cast<size_t>(a)] * X[static_cast<size_t>(b)] *
                         k[static_cast<size_t>(c)];
        if (w == 0.0) continue;
        for (int d = 0; d < n; ++d) out[static_cast<size_t>(d)] += w * riemann(a, b, c, d);
      }
  return out;
}

double ChristoffelData::ric_kk(const Vec& k) const {
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      s += ricci(a, c) * k[static_cast<size_t>(a)] * k[static_cast<size_t>(c)];
  return s;
}

ChristoffelData christoffel_oracle(const MetricField& metric, const Vec& x) {
  const int n = metric.n;
  ChristoffelData d;
  d.n = n;

  // Metric and its first two x-derivatives through the Dual2 path.
  std::vector<Dual2> xd;
  xd.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) xd.push_back(Dual2::variable(n, i, x[static_cast<size_t>(i)]));
  std::vector<Dual2> gd(static_cast<size_t>(n) * n);
  metric.d2_value(xd, gd);

  d.g = Mat(n, n);
  Ten3 dg(n);   // dg(c, a, b) = d_c g_ab
  Ten4 ddg(n);  // ddg(c, e, a, b) = d_c d_e g_ab
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Dual2& e = gd[static_cast<size_t>(a) * n + b];
      d.g(a, b) = e.f;
      for (int c = 0; c < n; ++c) {
        dg(c, a, b) = e.g[static_cast<size_t>(c)];
        for (int f = 0; f < n; ++f) ddg(c, f, a, b) = e.hess(c, f);
      }
    }

  Lu lu(d.g);
  if (lu.singular() || lu.cond_1() > 1e12)
    throw RegularityError("christoffel_oracle: singular metric", lu.cond_1());
  d.g_inv = lu.inverse();

  // Gamma_bc^a = 1/2 g^{ad} (d_b g_cd + d_c g_bd - d_d g_bc).
  d.gamma = Ten3(n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int e = 0; e < n; ++e)
          s += d.g_inv(a, e) * (dg(b, c, e) + dg(c, b, e) - dg(e, b, c));
        d.gamma(b, c, a) = 0.5 * s;
      }

  // d_d Gamma_bc^a with d(g^{-1}) = -g^{-1} (dg) g^{-1}.
  d.dgamma = Ten4(n);
  for (int dd = 0; dd < n; ++dd) {
    Mat dginv(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) s += d.g_inv(i, p) * dg(dd, p, q) * d.g_inv(q, j);
        dginv(i, j) = -s;
      }
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) {
            s += dginv(a, e) * (dg(b, c, e) + dg(c, b, e) - dg(e, b, c));
            s += d.g_inv(a, e) * (ddg(dd, b, c, e) + ddg(dd, c, b, e) - ddg(dd, e, b, c));
          }
          d.dgamma(dd, b, c, a) = 0.5 * s;
        }
  }

  // R(e_a, e_b) e_c = [d_a Gamma_bc^d - d_b Gamma_ac^d
  //                     + Gamma_bc^e Gamma_ae^d - Gamma_ac^e Gamma_be^d] e_d.
  d.riemann = Ten4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          double s = d.dgamma(a, b, c, e) - d.dgamma(b, a, c, e);
          for (int f = 0; f < n; ++f)
            s += d.gamma(b, c, f) * d.gamma(a, f, e) - d.gamma(a, c, f) * d.gamma(b, f, e);
          d.riemann(a, b, c, e) = s;
        }

  // Ric(X, Y) = tr(Z -> R(X, Z) Y).
  d.ricci = Mat(n, n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) s += d.riemann(a, b, c, b);
      d.ricci(a, c) = s;
    }

  return d;
}

OdeSolution oracle_geodesic(const MetricField& metric, const PhasePoint& p0, double t_end,
                            double tol) {
  const int n = metric.n;
  auto rhs = [&metric, n](double, const Vec& y, Vec& dy) {
    Vec x(y.begin(), y.begin() + n), v(y.begin() + n, y.begin() + 2 * n);
    ChristoffelData cd = christoffel_oracle(metric, x);
    dy.assign(2 * static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) dy[static_cast<size_t>(i)] = v[static_cast<size_t>(i)];
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          s += cd.gamma(b, c, a) * v[static_cast<size_t>(b)] * v[static_cast<size_t>(c)];
      dy[static_cast<size_t>(n + a)] = -s;
    }
  };
  Vec y0;
  y0.insert(y0.end(), p0.x.begin(), p0.x.end());
  y0.insert(y0.end(), p0.v.begin(), p0.v.end());
  return integrate_ode(rhs, 0.0, std::move(y0), t_end, tol, tol);
}

OdeSolution oracle_jacobi(const MetricField& metric, const PhasePoint& p0, const Vec& J0,
                          const Vec& W0, double t_end, double tol) {
  const int n = metric.n;
  auto rhs = [&metric, n](double, const Vec& y, Vec& dy) {
    Vec x(y.begin(), y.begin() + n), v(y.begin() + n, y.begin() + 2 * n);
    Vec J(y.begin() + 2 * n, y.begin() + 3 * n), W(y.begin() + 3 * n, y.begin() + 4 * n);
    ChristoffelData cd = christoffel_oracle(metric, x);
    dy.assign(4 * static_cast<size_t>(n), 0.0);
    auto gam = [&](const Vec& a, const Vec& b, int up) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s += cd.gamma(i, j, up) * a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
      return s;
    };
    Vec tidal = cd.tidal_apply(v, J);
    for (int i = 0; i < n; ++i) {
      dy[static_cast<size_t>(i)] = v[static_cast<size_t>(i)];
      dy[static_cast<size_t>(n + i)] = -gam(v, v, i);
      dy[static_cast<size_t>(2 * n + i)] = W[static_cast<size_t>(i)] - gam(v, J, i);
      dy[static_cast<size_t>(3 * n + i)] = -gam(v, W, i) + tidal[static_cast<size_t>(i)];
    }
  };
  Vec y0;
  y0.insert(y0.end(), p0.x.begin(), p0.x.end());
  y0.insert(y0.end(), p0.v.begin(), p0.v.end());
  y0.insert(y0.end(), J0.begin(), J0.end());
  y0.insert(y0.end(), W0.begin(), W0.end());
  return integrate_ode(rhs, 0.0, std::move(y0), t_end, tol, tol);
}

}  // namespace causal
