#include "causal/geodesic.hpp"

#include <cmath>
#include <cstdio>

namespace causal {

namespace {

PhasePoint unpack(const Vec& y, int n) {
  PhasePoint p;
  p.x.assign(y.begin(), y.begin() + n);
  p.v.assign(y.begin() + n, y.begin() + 2 * n);
  return p;
}

}  // namespace

PhasePoint GeodesicTrajectory::at(double t) const {
  const int n = static_cast<int>(samples.front().second.x.size());
  return unpack(sol.at(t), n);
}

GeodesicTrajectory integrate_geodesic(const DefiningFunction& G, const PhasePoint& p0,
                                      double t_end, double tol, int n_samples,
                                      bool polish_cone) {
  check_phase_point(p0);
  if (!(tol > 0.0)) throw ValidationError("integrate_geodesic: tol must be positive");
  const double G0 = G.G(p0);
  if (std::abs(G0) > 1e-10)
    throw DomainError("integrate_geodesic: start point is not on the cone (|G| = " +
                      std::to_string(std::abs(G0)) + ")");
  const int n = G.n;

  auto rhs = [&G, n](double, const Vec& y, Vec& dy) {
    PhasePoint p = unpack(y, n);
    TensorBundle b = compute_bundle(G, p, Depth::SprayValue);
    dy.resize(2 * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      dy[static_cast<size_t>(i)] = p.v[static_cast<size_t>(i)];
      dy[static_cast<size_t>(n + i)] = b.u[static_cast<size_t>(i)];
    }
  };

  Vec y0(2 * static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    y0[static_cast<size_t>(i)] = p0.x[static_cast<size_t>(i)];
    y0[static_cast<size_t>(n + i)] = p0.v[static_cast<size_t>(i)];
  }

  GeodesicTrajectory traj;
  traj.geometry = G.name;
  traj.sol = integrate_ode(rhs, 0.0, std::move(y0), t_end, tol, tol);
  traj.steps = traj.sol.accepted;
  traj.rejected = traj.sol.rejected;
  traj.exit = traj.sol.exit;
  traj.exit_message = traj.sol.exit_message;

  const double reach = traj.sol.t_end;
  const int ns = std::max(2, n_samples);
  for (int s = 0; s < ns; ++s) {
    const double t = reach * static_cast<double>(s) / (ns - 1);
    if (!traj.sol.covers(t)) continue;
    PhasePoint p = unpack(traj.sol.at(t), n);
    if (polish_cone && G.G.in_domain(p)) polish_to_cone(G, p.x, p.v);
    if (G.G.in_domain(p))
      traj.max_G_drift = std::max(traj.max_G_drift, std::abs(G.G.value(p.x, p.v)));
    traj.samples.emplace_back(t, std::move(p));
  }
  // Drift at accepted step ends as well (samples may be coarse).
  for (const OdeStep& st : traj.sol.steps) {
    PhasePoint p = unpack(st.y0, n);
    if (G.G.in_domain(p))
      traj.max_G_drift = std::max(traj.max_G_drift, std::abs(G.G.value(p.x, p.v)));
  }
  return traj;
}

ConservationReport conservation_report(const GeodesicTrajectory& traj,
                                       const DefiningFunction& G) {
  ConservationReport rep;
  RingPtr ring = JetRing::get(JetSpec{G.n, 0, 1, 1});
  for (const auto& [t, p] : traj.samples) {
    if (!G.G.in_domain(p)) continue;
    Jet j = eval_field_jet(G.G, p, ring);
    const double gval = j.value();
    rep.max_G = std::max(rep.max_G, std::abs(gval));
    double contact = 0.0;
    for (int a = 0; a < G.n; ++a) {
      std::array<uint8_t, 16> e{};
      e[static_cast<size_t>(G.n + a)] = 1;
      contact += p.v[static_cast<size_t>(a)] * j.partial(e);
    }
    rep.max_contact = std::max(rep.max_contact, std::abs(contact - G.k * gval));
  }
  return rep;
}

std::string trajectory_csv(const GeodesicTrajectory& traj, const DefiningFunction& G) {
  std::string out = "t";
  for (int i = 1; i <= G.n; ++i) out += ",x" + std::to_string(i);
  for (int i = 1; i <= G.n; ++i) out += ",v" + std::to_string(i);
  out += ",G\n";
  char buf[64];
  for (const auto& [t, p] : traj.samples) {
    snprintf(buf, sizeof buf, "%.17g", t);
    out += buf;
    for (int i = 0; i < G.n; ++i) {
      snprintf(buf, sizeof buf, ",%.17g", p.x[static_cast<size_t>(i)]);
      out += buf;
    }
    for (int i = 0; i < G.n; ++i) {
      snprintf(buf, sizeof buf, ",%.17g", p.v[static_cast<size_t>(i)]);
      out += buf;
    }
    const double g = G.G.in_domain(p) ? G.G.value(p.x, p.v) : std::nan("");
    snprintf(buf, sizeof buf, ",%.17g\n", g);
    out += buf;
  }
  return out;
}

}  // namespace causal
