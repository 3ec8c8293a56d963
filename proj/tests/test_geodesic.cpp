#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "causal/geodesic.hpp"
#include "causal/oracle.hpp"

using namespace causal;

namespace {

// Null cone of (u0, v0, x0, y0) in the Kapadia metric:
// 0 = (u - u0)(v - v0) - (x - x0)^2 - 2 (y - y0)^2 / (u + u0).
double kapadia_cone_residual(const Vec& x0, const Vec& xe) {
  const double du = xe[0] - x0[0], dv = xe[1] - x0[1], dx = xe[2] - x0[2],
               dy = xe[3] - x0[3];
  const double t1 = du * dv, t2 = dx * dx, t3 = 2.0 * dy * dy / (xe[0] + x0[0]);
  const double f = t1 - t2 - t3;
  return std::abs(f) / (1.0 + std::abs(t1) + std::abs(t2) + std::abs(t3));
}

}  // namespace

TEST_CASE("dense output accuracy of the integrator") {
  // y'' = -y with dense samples against the closed form.
  auto rhs = [](double, const Vec& y, Vec& dy) {
    dy = {y[1], -y[0]};
  };
  OdeSolution sol = integrate_ode(rhs, 0.0, {1.0, 0.0}, 6.0, 1e-10, 1e-10);
  REQUIRE(sol.exit == OdeExit::Completed);
  for (double t = 0.05; t < 6.0; t += 0.171) {
    Vec y = sol.at(t);
    CHECK(y[0] == doctest::Approx(std::cos(t)).epsilon(5e-10).scale(1.0));
    CHECK(y[1] == doctest::Approx(-std::sin(t)).epsilon(5e-10).scale(1.0));
  }
}

TEST_CASE("minkowski geodesics are straight lines") {
  const auto& mink = catalog("minkowski4");
  PhasePoint p0{{0.0, 0.0, 0.0, 0.0}, {1.0, 0.6, 0.8, 0.0}};
  GeodesicTrajectory tr = integrate_geodesic(mink, p0, 1.0, 1e-12);
  REQUIRE(tr.exit == OdeExit::Completed);
  for (const auto& [t, p] : tr.samples) {
    for (int i = 0; i < 4; ++i) {
      CHECK(p.x[static_cast<size_t>(i)] ==
            doctest::Approx(t * p0.v[static_cast<size_t>(i)]).epsilon(1e-12).scale(1.0));
      CHECK(p.v[static_cast<size_t>(i)] ==
            doctest::Approx(p0.v[static_cast<size_t>(i)]).epsilon(1e-12).scale(1.0));
    }
  }
  ConservationReport rep = conservation_report(tr, mink);
  CHECK(rep.max_G <= 1e-12);
  CHECK(rep.max_contact <= 1e-12);
}

TEST_CASE("kapadia endpoints satisfy the closed-form null cone") {
  const auto& kap = catalog("kapadia");
  Vec x0{1.0, 0.3, -0.2, 0.5};
  SeededRng rng(2024);
  int done = 0;
  for (int trial = 0; trial < 80 && done < 50; ++trial) {
    // Random on-cone direction at the fixed base point.
    Vec v(4);
    for (auto& c : v) c = rng.normal();
    double nrm = 0.0;
    for (double c : v) nrm += c * c;
    for (auto& c : v) c /= std::sqrt(nrm);
    if (!polish_to_cone(kap, x0, v)) continue;
    PhasePoint p0{x0, v};

    GeodesicTrajectory tr = integrate_geodesic(kap, p0, 0.35, 1e-10);
    if (tr.exit != OdeExit::Completed) continue;  // left u > 0
    ++done;
    const PhasePoint pe = tr.samples.back().second;
    CHECK(kapadia_cone_residual(x0, pe.x) <= 1e-6);
    CHECK(tr.max_G_drift <= 1e-8);
  }
  CHECK(done == 50);
}

TEST_CASE("wuenschmann trajectory: straight lines on the flat cone, drift tiny") {
  const auto& wue = catalog("wuenschmann_cone");
  SeededRng rng(5);
  PhasePoint p0 = sample_on_cone(wue, rng);
  GeodesicTrajectory tr = integrate_geodesic(wue, p0, 0.5, 1e-10);
  CHECK(tr.max_G_drift <= 1e-8);
  ConservationReport rep = conservation_report(tr, wue);
  CHECK(rep.max_G <= 1e-8);
}

TEST_CASE("affine rescaling equivariance: (x0, 2v) over T/2 = (x0, v) over T") {
  const auto& kap = catalog("kapadia");
  SeededRng rng(8);
  PhasePoint p0 = sample_on_cone(kap, rng);
  GeodesicTrajectory t1 = integrate_geodesic(kap, p0, 0.4, 1e-11, 41);
  PhasePoint p2 = p0;
  for (double& c : p2.v) c *= 2.0;
  GeodesicTrajectory t2 = integrate_geodesic(kap, p2, 0.2, 1e-11, 41);
  REQUIRE(t1.exit == OdeExit::Completed);
  REQUIRE(t2.exit == OdeExit::Completed);
  for (size_t s = 0; s < t1.samples.size(); ++s) {
    const auto& [ta, pa] = t1.samples[s];
    const auto& [tb, pb] = t2.samples[s];
    CHECK(tb == doctest::Approx(0.5 * ta).epsilon(1e-12));
    for (int i = 0; i < 4; ++i) {
      CHECK(pb.x[static_cast<size_t>(i)] ==
            doctest::Approx(pa.x[static_cast<size_t>(i)]).epsilon(1e-9).scale(1.0));
      CHECK(pb.v[static_cast<size_t>(i)] ==
            doctest::Approx(2.0 * pa.v[static_cast<size_t>(i)]).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("quadratic-metric equivalence: trajectory matches the oracle integrator") {
  const auto& def = catalog("polydiag4");
  SeededRng rng(33);
  PhasePoint p0 = sample_on_cone(def, rng);
  GeodesicTrajectory tr = integrate_geodesic(def, p0, 0.8, 1e-11, 21);
  OdeSolution orc = oracle_geodesic(*def.metric, p0, 0.8, 1e-11);
  REQUIRE(tr.exit == OdeExit::Completed);
  REQUIRE(orc.exit == OdeExit::Completed);
  for (const auto& [t, p] : tr.samples) {
    Vec yo = orc.at(t);
    for (int i = 0; i < 4; ++i) {
      CHECK(p.x[static_cast<size_t>(i)] ==
            doctest::Approx(yo[static_cast<size_t>(i)]).epsilon(1e-8).scale(1.0));
      CHECK(p.v[static_cast<size_t>(i)] ==
            doctest::Approx(yo[static_cast<size_t>(4 + i)]).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("domain exit truncates with a flag") {
  const auto& kap = catalog("kapadia");
  // Aim the geodesic at the u = 0 boundary.
  Vec x0{0.3, 0.0, 0.0, 0.0};
  Vec v{-1.0, 0.5, 0.3, 0.2};
  REQUIRE(polish_to_cone(kap, x0, v));
  GeodesicTrajectory tr = integrate_geodesic(kap, {x0, v}, 5.0, 1e-10);
  CHECK(tr.exit != OdeExit::Completed);
  CHECK(std::abs(tr.sol.t_end) < 5.0);
}

TEST_CASE("off-cone start is rejected") {
  const auto& mink = catalog("minkowski4");
  PhasePoint p0{{0.0, 0.0, 0.0, 0.0}, {1.0, 0.5, 0.0, 0.0}};  // G = 0.375
  CHECK_THROWS_AS(integrate_geodesic(mink, p0, 1.0, 1e-10), DomainError);
}

TEST_CASE("trajectory export carries 17-digit samples") {
  const auto& mink = catalog("minkowski4");
  PhasePoint p0{{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0}};
  GeodesicTrajectory tr = integrate_geodesic(mink, p0, 1.0, 1e-10, 5);
  std::string csv = trajectory_csv(tr, mink);
  CHECK(csv.find("t,x1,x2,x3,x4,v1,v2,v3,v4,G") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header + 5 samples
}
