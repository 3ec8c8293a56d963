#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "causal/curvature.hpp"
#include "causal/oracle.hpp"
#include "causal/spray.hpp"

using namespace causal;

TEST_CASE("minkowski spray vanishes") {
  const auto& mink = catalog("minkowski4");
  PhasePoint p{{0.2, -0.1, 0.4, 0.0}, {1.0, 0.6, -0.8, 0.0}};
  SprayData s = spray(mink, p);
  for (double c : s.u) CHECK(std::abs(c) <= 1e-14);
  CHECK(std::abs(s.VG) <= 1e-14);
  CHECK(s.residual <= 1e-14);
}

TEST_CASE("quadratic metrics: u^a = -Gamma^a_bc v^b v^c against the oracle") {
  for (const char* name : {"kapadia", "frw_like", "polydiag4"}) {
    const auto& def = catalog(name);
    SeededRng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
      PhasePoint p = sample_on_cone(def, rng);
      SprayData s = spray(def, p);
      ChristoffelData cd = christoffel_oracle(*def.metric, p.x);
      for (int a = 0; a < 4; ++a) {
        double expect = 0.0;
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c)
            expect -= cd.gamma(b, c, a) * p.v[static_cast<size_t>(b)] *
                      p.v[static_cast<size_t>(c)];
        CHECK(s.u[static_cast<size_t>(a)] ==
              doctest::Approx(expect).epsilon(1e-10).scale(1.0));
      }
      CHECK(s.residual <= 1e-12);
      CHECK(std::abs(s.VG) <= 1e-11 * (1.0 + max_abs(s.u)));
    }
  }
}

TEST_CASE("spray homogeneity: u(x, 2v) = 4 u(x, v), also off-cone") {
  for (const char* name : {"kapadia", "wuenschmann_cone", "kapadia*vnorm"}) {
    const auto& def = catalog(name);
    SeededRng rng(3);
    PhasePoint p = sample_on_cone(def, rng);
    // Push slightly off the cone: V(G) = 0 and homogeneity hold regardless.
    p.v[static_cast<size_t>(def.n - 1)] += 0.05;
    if (!def.G.in_domain(p)) continue;
    SprayData s1 = spray(def, p);
    CHECK(std::abs(s1.VG) <=
          1e-10 * (1.0 + max_abs(s1.u)) * (1.0 + std::abs(def.G.value(p.x, p.v))));
    for (double t : {0.5, 2.0}) {
      PhasePoint q = p;
      for (double& c : q.v) c *= t;
      SprayData s2 = spray(def, q);
      for (int a = 0; a < def.n; ++a)
        CHECK(s2.u[static_cast<size_t>(a)] ==
              doctest::Approx(t * t * s1.u[static_cast<size_t>(a)]).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("contact form: V contracted into d(alpha) equals -(k-1) dG") {
  // dalpha(V, Y) = -(k-1) dG(Y) for coordinate directions Y, evaluated with
  // exact jets; pins the spray normalization of the dynamics theorem.
  for (const char* name : {"kapadia", "wuenschmann_cone"}) {
    const auto& def = catalog(name);
    const int n = def.n;
    SeededRng rng(9);
    PhasePoint p = sample_on_cone(def, rng);
    TensorBundle b = compute_bundle(def, p, Depth::Linearized);

    RingPtr ring = JetRing::get(JetSpec{n, 1, 2, 3});
    Jet G = eval_field_jet(def.G, p, ring);
    auto d_along = [&](const Jet& f, const Vec& xc, const Vec& vc) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        s += f.dx(i).value() * xc[static_cast<size_t>(i)];
        s += f.dv(i).value() * vc[static_cast<size_t>(i)];
      }
      return s;
    };
    Vec zero(static_cast<size_t>(n), 0.0);
    for (int dir = 0; dir < 2 * n; ++dir) {
      Vec yx = zero, yv = zero;
      if (dir < n) yx[static_cast<size_t>(dir)] = 1.0;
      else yv[static_cast<size_t>(dir - n)] = 1.0;

      // dalpha(X, Y) = X(g_a) Y^{x,a} - Y(g_a) X^{x,a} for constant-component
      // fields X = V, Y = coordinate direction.
      double dalpha_VY = 0.0;
      for (int a = 0; a < n; ++a) {
        const Jet ga = G.dv(a);
        dalpha_VY += d_along(ga, p.v, b.u) * yx[static_cast<size_t>(a)];
        dalpha_VY -= d_along(ga, yx, yv) * p.v[static_cast<size_t>(a)];
      }
      double dG_Y = 0.0;
      for (int a = 0; a < n; ++a)
        dG_Y += G.dx(a).value() * yx[static_cast<size_t>(a)] +
                G.dv(a).value() * yv[static_cast<size_t>(a)];
      CHECK(dalpha_VY == doctest::Approx(-(def.k - 1.0) * dG_Y).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("singular metric rejected at construction") {
  auto sing = make_metric(2, [](const auto& x, auto& g) {
    auto zero = x[0] * 0.0;
    g[0] = zero + 1.0;
    g[1] = zero;
    g[2] = zero;
    g[3] = zero + x[0];  // vanishes at x1 = 0
  });
  CHECK_THROWS_AS(make_quadratic("sing", sing, {-1.0, -1.0}, {1.0, 1.0}), RegularityError);
}

TEST_CASE("spray_V2 matches finite differences of J along the integral curve") {
  const auto& kap = catalog("kapadia");
  SeededRng rng(17);
  PhasePoint p = sample_on_cone(kap, rng);
  const ConformalFactor& f = builtin_factor("vnorm");
  auto v2 = spray_V2(kap, p, f.J);
  CHECK(v2[0] == doctest::Approx(f.J.value(p.x, p.v)).epsilon(1e-13));

  auto J_at = [&](double t) {
    // Fixed-step RK4 along the spray, independent of the ODE module.
    PhasePoint q = p;
    const int steps = 40;
    const double h = t / steps;
    if (t == 0.0) return f.J.value(q.x, q.v);
    for (int s = 0; s < steps; ++s) {
      auto k1 = compute_bundle(kap, q, Depth::SprayValue);
      PhasePoint q2 = q;
      for (int i = 0; i < 4; ++i) {
        q2.x[static_cast<size_t>(i)] += 0.5 * h * q.v[static_cast<size_t>(i)];
        q2.v[static_cast<size_t>(i)] += 0.5 * h * k1.u[static_cast<size_t>(i)];
      }
      auto k2 = compute_bundle(kap, q2, Depth::SprayValue);
      PhasePoint q3 = q;
      for (int i = 0; i < 4; ++i) {
        q3.x[static_cast<size_t>(i)] += 0.5 * h * q2.v[static_cast<size_t>(i)];
        q3.v[static_cast<size_t>(i)] += 0.5 * h * k2.u[static_cast<size_t>(i)];
      }
      auto k3 = compute_bundle(kap, q3, Depth::SprayValue);
      PhasePoint q4 = q;
      for (int i = 0; i < 4; ++i) {
        q4.x[static_cast<size_t>(i)] += h * q3.v[static_cast<size_t>(i)];
        q4.v[static_cast<size_t>(i)] += h * k3.u[static_cast<size_t>(i)];
      }
      auto k4 = compute_bundle(kap, q4, Depth::SprayValue);
      for (int i = 0; i < 4; ++i) {
        q.x[static_cast<size_t>(i)] +=
            h / 6.0 *
            (q.v[static_cast<size_t>(i)] + 2 * q2.v[static_cast<size_t>(i)] +
             2 * q3.v[static_cast<size_t>(i)] + q4.v[static_cast<size_t>(i)]);
        q.v[static_cast<size_t>(i)] +=
            h / 6.0 *
            (k1.u[static_cast<size_t>(i)] + 2 * k2.u[static_cast<size_t>(i)] +
             2 * k3.u[static_cast<size_t>(i)] + k4.u[static_cast<size_t>(i)]);
      }
    }
    return f.J.value(q.x, q.v);
  };
  const double h = 0.02;
  const double fd1 = (J_at(h) - J_at(-h)) / (2 * h);
  const double fd2 = (J_at(h) - 2 * J_at(0.0) + J_at(-h)) / (h * h);
  CHECK(v2[1] == doctest::Approx(fd1).epsilon(1e-5));
  CHECK(v2[2] == doctest::Approx(fd2).epsilon(1e-3).scale(0.01));
}
