#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "causal/geometry.hpp"
#include "causal/jet_table.hpp"

using namespace causal;

namespace {

ScalarField mixed_test_field() {
  // Non-polynomial in every direction so central differences carry genuine
  // truncation error at all orders.
  return make_field(3, [](const auto& x, const auto& v) {
    return exp(x[1] * 0.3 * v[0] + 0.1 * v[2]) * (sin(x[2] + v[1]) * 0.2 + 1.0) +
           log(v[1] * v[1] + 1.5) * cos(x[0] + 0.5 * x[2] + 0.2 * v[2]);
  });
}

}  // namespace

TEST_CASE("jet ring basics: seeds, products, derivatives") {
  RingPtr ring = JetRing::get(JetSpec{2, 2, 3, 4});
  Jet x0 = Jet::variable(ring, 0, 1.5);
  Jet v1 = Jet::variable(ring, 3, -0.5);
  Jet f = x0 * v1 + v1 * v1 * x0 * x0;

  // f = x0 v1 + x0^2 v1^2 at (x0, v1) = (1.5, -0.5)
  CHECK(f.value() == doctest::Approx(1.5 * -0.5 + 2.25 * 0.25).epsilon(1e-15));
  std::array<uint8_t, 16> e{};
  e[0] = 1;
  e[3] = 1;  // d/dx0 d/dv1: 1 + 4 x0 v1^2 ... careful: d2/dx0dv1 = 1 + 4 x0 v1
  CHECK(f.partial(e) == doctest::Approx(1.0 + 4.0 * 1.5 * -0.5).epsilon(1e-14));
}

TEST_CASE("series composition matches closed forms") {
  RingPtr ring = JetRing::get(JetSpec{1, 1, 4, 5});
  Jet v = Jet::variable(ring, 1, 0.7);
  Jet f = exp(sqrt(v * v + 1.0)) / v;
  // Check against finite differences of the closed form.
  auto closed = [](double t) { return std::exp(std::sqrt(t * t + 1.0)) / t; };
  std::array<uint8_t, 16> e{};
  e[1] = 1;
  const double h = 1e-5;
  const double fd1 = (closed(0.7 + h) - closed(0.7 - h)) / (2 * h);
  CHECK(f.partial(e) == doctest::Approx(fd1).epsilon(1e-8));
  e[1] = 2;
  const double fd2 = (closed(0.7 + h) - 2 * closed(0.7) + closed(0.7 - h)) / (h * h);
  CHECK(f.partial(e) == doctest::Approx(fd2).epsilon(1e-5));
}

TEST_CASE("evaluate_jets: quadratic metric has exact Hessian and zero g_abc") {
  const auto& mink = catalog("minkowski4");
  PhasePoint p{{0.1, -0.2, 0.3, 0.4}, {1.0, 1.0, 0.0, 0.0}};
  JetTable t = evaluate_jets(mink.G, p, 2, 4);
  CHECK(t.G() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(t.g(0) == doctest::Approx(1.0));
  CHECK(t.g(1) == doctest::Approx(-1.0));
  CHECK(t.g(2) == doctest::Approx(0.0));
  CHECK(t.g2(0, 0) == doctest::Approx(1.0));
  CHECK(t.g2(1, 1) == doctest::Approx(-1.0));
  CHECK(t.g2(0, 1) == doctest::Approx(0.0));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) CHECK(t.g3(a, b, c) == doctest::Approx(0.0));
}

TEST_CASE("jet table: symmetry under index permutation and capability errors") {
  ScalarField f = mixed_test_field();
  PhasePoint p{{0.3, -0.4, 0.9}, {1.1, 0.7, -0.6}};
  JetTable t = evaluate_jets(f, p, 2, 4);
  CHECK(t.partial({0, 1}, {2}) == t.partial({1, 0}, {2}));
  CHECK(t.partial({}, {0, 1, 1}) == t.partial({}, {1, 0, 1}));
  CHECK_THROWS_AS(evaluate_jets(f, p, 3, 4), CapabilityError);
  CHECK_THROWS_AS(evaluate_jets(f, p, 1, 5), CapabilityError);
  CHECK_THROWS_AS(t.partial({0, 0, 0}, {}), CapabilityError);
}

TEST_CASE("central-difference oracle: step-halving ratio near 4") {
  ScalarField f = mixed_test_field();
  PhasePoint p{{0.3, -0.4, 0.9}, {1.1, 0.7, -0.6}};
  JetTable t = evaluate_jets(f, p, 2, 4);

  // One representative multi-index per total order.
  struct Case {
    std::vector<int> xi, vi;
    double h;
  };
  const std::vector<Case> cases = {
      {{}, {0}, 1e-3},      {{1}, {1}, 5e-3},      {{}, {1, 2}, 5e-3},
      {{0, 2}, {2}, 2e-2},  {{}, {1, 1, 2}, 2e-2}, {{1}, {2, 2, 2}, 5e-2},
      {{}, {0, 0, 1, 2}, 5e-2},
  };
  for (const auto& c : cases) {
    const double exact = t.partial(c.xi, c.vi);
    const double e1 = std::abs(central_difference(f, p, c.xi, c.vi, c.h) - exact);
    const double e2 = std::abs(central_difference(f, p, c.xi, c.vi, c.h / 2) - exact);
    if (e2 < 1e-10 * (1.0 + std::abs(exact))) continue;  // at rounding level
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
  }
}

TEST_CASE("euler residuals: homogeneous vs non-homogeneous control") {
  const auto& mink = catalog("minkowski4");
  PhasePoint p{{0.0, 0.0, 0.0, 0.0}, {1.3, 0.4, -0.2, 0.8}};
  auto r = euler_residuals(evaluate_jets(mink.G, p, 0, 3), 2.0);
  CHECK(r[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r[2] == doctest::Approx(0.0).epsilon(1e-14));

  const auto& wue = catalog("wuenschmann_cone");
  PhasePoint pw{{0.1, 0.2, 0.3}, {-0.8, 1.2, 0.5}};
  auto rw = euler_residuals(evaluate_jets(wue.G, pw, 0, 3), 2.0);
  CHECK(rw[0] <= 1e-10);
  CHECK(rw[1] <= 1e-10);
  CHECK(rw[2] <= 1e-10);

  // Negative control: G = v1 + v1^2 is not homogeneous of degree 2.
  ScalarField bad = make_field(2, [](const auto& x, const auto& v) {
    (void)x;
    return v[0] + v[0] * v[0];
  });
  PhasePoint pb{{0.0, 0.0}, {0.9, 0.4}};
  auto rb = euler_residuals(evaluate_jets(bad, pb, 0, 3), 2.0);
  CHECK(rb[0] > 1e-3);
}

TEST_CASE("v-rescaling scales jet entries by t^(k-|beta|)") {
  const auto& kap = catalog("kapadia");
  SeededRng rng(5);
  PhasePoint p = sample_on_cone(kap, rng);
  JetTable t1 = evaluate_jets(kap.G, p, 0, 3);
  for (double tscale : {0.5, 2.0}) {
    PhasePoint q = p;
    for (double& c : q.v) c *= tscale;
    JetTable t2 = evaluate_jets(kap.G, q, 0, 3);
    const double k = kap.k;
    CHECK(t2.G() == doctest::Approx(std::pow(tscale, k) * t1.G()).epsilon(1e-10));
    for (int a = 0; a < 4; ++a)
      CHECK(t2.g(a) == doctest::Approx(std::pow(tscale, k - 1) * t1.g(a)).epsilon(1e-10));
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b)
        CHECK(t2.g2(a, b) ==
              doctest::Approx(std::pow(tscale, k - 2) * t1.g2(a, b)).epsilon(1e-10));
    for (int a = 0; a < 4; ++a)
      CHECK(t2.g3(a, a, a) ==
            doctest::Approx(std::pow(tscale, k - 3) * t1.g3(a, a, a)).epsilon(1e-9));
  }
}

TEST_CASE("finite_difference_check on built-ins") {
  const auto& kap = catalog("kapadia");
  PhasePoint p{{1.2, 0.3, -0.2, 0.5}, {0.8, 1.1, 0.3, -0.4}};
  // Quadratic in v: second v-derivatives are exact under central differences.
  CHECK(finite_difference_check(kap.G, p, 0, 2, 1e-4) <= 1e-8);

  ScalarField expv = make_field(2, [](const auto& x, const auto& v) {
    (void)x;
    return exp(v[0]) + v[1] * v[1] * v[0];
  });
  PhasePoint pe{{0.0, 0.0}, {0.4, -0.3}};
  // Fourth v-derivative of an exponential-in-v field: tolerance from the
  // step-halving study (truncation ~ h^2 e^v, roundoff ~ eps h^-4).
  CHECK(finite_difference_check(expv, pe, 0, 4, 5e-2) <= 5e-3);
  CHECK(finite_difference_check(expv, pe, 0, 4, 5e-2) > 1e-12);
}

TEST_CASE("domain error during stenciling") {
  const auto& wue = catalog("wuenschmann_cone");
  // v1 close to the v1 < 0 boundary: the stencil crosses it.
  PhasePoint p{{0.0, 0.0, 0.0}, {-1e-7, 1.0, 0.5}};
  CHECK_THROWS_AS(finite_difference_check(wue.G, p, 0, 1, 1e-3), DomainError);
}
