#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "causal/curvature.hpp"
#include "causal/oracle.hpp"

using namespace causal;

TEST_CASE("minkowski: U, R, S, T all vanish") {
  const auto& mink = catalog("minkowski4");
  PhasePoint p{{0.0, 0.0, 0.0, 0.0}, {1.0, 0.6, 0.8, 0.0}};
  ConnectionData c = connection(mink, p);
  CHECK(max_abs(c.U) <= 1e-14);
  CurvatureData cv = curvature(mink, p);
  for (double x : cv.R.a) CHECK(std::abs(x) <= 1e-13);
  CHECK(max_abs(cv.S) <= 1e-13);
  CHECK(max_abs(cv.T) <= 1e-13);
}

TEST_CASE("quadratic metrics: U_b^a = v^c Gamma_bc^a against the oracle") {
  for (const char* name : {"kapadia", "frw_like", "polydiag4"}) {
    const auto& def = catalog(name);
    SeededRng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
      PhasePoint p = sample_on_cone(def, rng);
      ConnectionData c = connection(def, p);
      ChristoffelData cd = christoffel_oracle(*def.metric, p.x);
      for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a) {
          double expect = 0.0;
          for (int e = 0; e < 4; ++e)
            expect += p.v[static_cast<size_t>(e)] * cd.gamma(b, e, a);
          CHECK(c.U(b, a) == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
        }
      CHECK(c.contraction_residual <= 1e-11);
      CHECK(c.euler_residual <= 1e-11);
    }
  }
}

TEST_CASE("quadratic metrics: S# X = R_riem(k, X) k on the cone") {
  for (const char* name : {"kapadia", "frw_like", "polydiag4"}) {
    const auto& def = catalog(name);
    SeededRng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      PhasePoint p = sample_on_cone(def, rng);
      CurvatureData cv = curvature(def, p);
      TensorBundle b = compute_bundle(def, p, Depth::Curvature);
      ChristoffelData cd = christoffel_oracle(*def.metric, p.x);

      double scale = 1.0;
      for (double x : cv.S.a) scale = std::max(scale, std::abs(x));
      for (int bb = 0; bb < 4; ++bb) {
        Vec X(4, 0.0);
        X[static_cast<size_t>(bb)] = 1.0;
        Vec tid = cd.tidal_apply(p.v, X);  // (R(k, X) k)^d
        for (int a = 0; a < 4; ++a) {
          // S#^a_b = g^{ac} S_cb vs oracle endomorphism.
          double lhs = 0.0;
          for (int c = 0; c < 4; ++c) lhs += b.hess_inv(a, c) * cv.S(c, bb);
          CHECK(lhs == doctest::Approx(tid[static_cast<size_t>(a)])
                           .epsilon(1e-9)
                           .scale(scale));
        }
        // Lowered form S(X, Y) = g(R(k,X)k, Y).
        for (int a = 0; a < 4; ++a) {
          double low = 0.0;
          for (int d = 0; d < 4; ++d) low += b.hess(a, d) * tid[static_cast<size_t>(d)];
          CHECK(cv.S(bb, a) == doctest::Approx(low).epsilon(1e-9).scale(scale));
        }
      }
    }
  }
}

TEST_CASE("identity suite on catalog geometries") {
  // Algebraic and differential identities at sampled on-cone points,
  // including the degree-3 conformally rescaled entries.
  for (const char* name :
       {"minkowski4", "kapadia", "wuenschmann_cone", "frw_like", "polydiag4",
        "minkowski4*vnorm", "kapadia*exp_x1", "kapadia*vnorm"}) {
    CAPTURE(name);
    const auto& def = catalog(name);
    SeededRng rng(77);
    std::vector<PhasePoint> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(sample_on_cone(def, rng));
    IdentityReport rep = identity_suite(def, pts);
    for (const auto& [id, r] : rep.max_residual) {
      CAPTURE(id);
      CHECK(r <= 1e-7);
    }
  }
}

TEST_CASE("degree checks: R degree 1, S degree 2, U degree 1 in v") {
  // Consistency: S_b^c = 2 v^a R_ab^c with S of degree 2 forces deg R = 1
  // (quadratic case: U = v Gamma, R ~ v dGamma).
  const auto& def = catalog("kapadia");
  SeededRng rng(31);
  PhasePoint p = sample_on_cone(def, rng);
  TensorBundle b1 = compute_bundle(def, p, Depth::Curvature);
  for (double t : {0.5, 2.0}) {
    PhasePoint q = p;
    for (double& c : q.v) c *= t;
    TensorBundle b2 = compute_bundle(def, q, Depth::Curvature);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        CHECK(b2.U(i, j) == doctest::Approx(t * b1.U(i, j)).epsilon(1e-9).scale(1.0));
        CHECK(b2.S(i, j) == doctest::Approx(t * t * b1.S(i, j)).epsilon(1e-9).scale(1.0));
        for (int k = 0; k < 4; ++k)
          CHECK(b2.R(i, j, k) ==
                doctest::Approx(t * b1.R(i, j, k)).epsilon(1e-9).scale(1.0));
      }
  }
}

TEST_CASE("kapadia christoffel fixture: x-dependence only through g_yy") {
  // g_yy = -1/u gives d_u g_yy = 1/u^2; the oracle must reproduce the handful
  // of nonzero Christoffel symbols that follow.
  const auto& def = catalog("kapadia");
  Vec x{1.3, 0.2, -0.4, 0.7};
  ChristoffelData cd = christoffel_oracle(*def.metric, x);
  const double u = x[0];
  // Gamma_yy^v: from 2 g_uv Gamma_yy^v... direct check of a few entries:
  // Gamma_44^a = -1/2 g^{ad} d_d g_44 with only d_1 g_44 = 1/u^2 nonzero.
  // g^{12} = g^{21} = 2, so Gamma_44^2 = -1/2 * 2 * (1/u^2) = -1/u^2.
  CHECK(cd.gamma(3, 3, 1) == doctest::Approx(-1.0 / (u * u)).epsilon(1e-12));
  // Gamma_14^4 = 1/2 g^{44} d_1 g_44 = 1/2 (-u) (1/u^2) = -1/(2u).
  CHECK(cd.gamma(0, 3, 3) == doctest::Approx(-1.0 / (2.0 * u)).epsilon(1e-12));
  CHECK(cd.gamma(3, 0, 3) == doctest::Approx(-1.0 / (2.0 * u)).epsilon(1e-12));
  // Everything not involving the y-slot twice or (u, y) is flat.
  CHECK(cd.gamma(0, 0, 0) == doctest::Approx(0.0));
  CHECK(cd.gamma(1, 2, 0) == doctest::Approx(0.0));
}

TEST_CASE("conformal metric christoffels follow the standard transformation law") {
  // h = J(x) g with J = exp(x1/2): Delta_bc^a = Gamma_bc^a
  //   + 1/2 J^{-1} (J_b delta_c^a + J_c delta_b^a - h^{ad} h_bc J_d).
  auto base = make_metric(4, [](const auto& x, auto& g) {
    auto zero = x[0] * 0.0;
    for (auto& e : g) e = zero;
    g[0] = zero + 1.0;
    g[5] = zero - 1.0 - x[0] * x[0] * 0.1;
    g[10] = zero - 1.0 - x[1] * x[1] * 0.05;
    g[15] = zero - 1.0;
  });
  auto conf = make_metric(4, [](const auto& x, auto& g) {
    auto zero = x[0] * 0.0;
    auto J = exp(x[0] * 0.5);
    for (auto& e : g) e = zero;
    g[0] = J;
    g[5] = (zero - 1.0 - x[0] * x[0] * 0.1) * J;
    g[10] = (zero - 1.0 - x[1] * x[1] * 0.05) * J;
    g[15] = zero - J;
  });
  Vec x{0.3, -0.2, 0.5, 0.1};
  ChristoffelData g0 = christoffel_oracle(base, x);
  ChristoffelData g1 = christoffel_oracle(conf, x);
  const double J = std::exp(x[0] * 0.5);
  Vec Jd{0.5 * J, 0.0, 0.0, 0.0};
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 4; ++c)
      for (int a = 0; a < 4; ++a) {
        double expect = g0.gamma(b, c, a) +
                        0.5 / J *
                            (Jd[static_cast<size_t>(b)] * (c == a ? 1.0 : 0.0) +
                             Jd[static_cast<size_t>(c)] * (b == a ? 1.0 : 0.0));
        double corr = 0.0;
        for (int d = 0; d < 4; ++d) corr += g1.g_inv(a, d) * Jd[static_cast<size_t>(d)];
        expect -= 0.5 * g1.g(b, c) * corr / J;
        CHECK(g1.gamma(b, c, a) == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
      }
}
