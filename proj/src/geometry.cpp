#include "causal/geometry.hpp"

#include <cmath>
#include <map>

namespace causal {

double SeededRng::normal() {
  if (cached_) {
    const double z = *cached_;
    cached_.reset();
    return z;
  }
  double u1 = u01();
  while (u1 <= 0.0) u1 = u01();
  const double u2 = u01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  cached_ = r * std::sin(a);
  return r * std::cos(a);
}

namespace {

// G value/jets for a quadratic metric geometry.
template <typename T>
T quadratic_G(const MetricField& m, const std::vector<T>& x, const std::vector<T>& v) {
  const int n = m.n;
  std::vector<T> g(static_cast<size_t>(n) * n);
  if constexpr (std::is_same_v<T, double>) {
    Mat gm;
    m.value(x, gm);
    for (int i = 0; i < n * n; ++i) g[static_cast<size_t>(i)] = gm.a[static_cast<size_t>(i)];
  } else {
    m.jet_value(x, g);
  }
  T acc = v[0] * 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      acc += 0.5 * (g[static_cast<size_t>(a) * n + b] * (v[static_cast<size_t>(a)] *
                                                          v[static_cast<size_t>(b)]));
  return acc;
}

Vec box_sample(const Vec& lo, const Vec& hi, SeededRng& rng) {
  Vec x(lo.size());
  for (size_t i = 0; i < lo.size(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
  return x;
}

Vec sphere_sample(int n, SeededRng& rng) {
  Vec v(static_cast<size_t>(n));
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (int i = 0; i < n; ++i) {
      v[static_cast<size_t>(i)] = rng.normal();
      nrm += v[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
    }
  } while (nrm < 1e-12);
  nrm = std::sqrt(nrm);
  for (double& c : v) c /= nrm;
  return v;
}

// Value and v-gradient of G at (x, v) without building larger rings.
void value_and_grad(const ScalarField& G, const Vec& x, const Vec& v, double& val, Vec& grad) {
  RingPtr ring = JetRing::get(JetSpec{G.n, 0, 1, 1});
  Jet j = eval_field_jet(G, PhasePoint{x, v}, ring);
  val = j.value();
  grad.assign(static_cast<size_t>(G.n), 0.0);
  for (int a = 0; a < G.n; ++a) {
    std::array<uint8_t, 16> e{};
    e[static_cast<size_t>(G.n + a)] = 1;
    grad[static_cast<size_t>(a)] = j.partial(e);
  }
}

}  // namespace

bool polish_to_cone(const DefiningFunction& G, const Vec& x, Vec& v, double tol, int max_iter) {
  double val;
  Vec grad;
  if (!G.G.in_domain(x, v)) return false;
  value_and_grad(G.G, x, v, val, grad);
  const double scale = 1.0 + std::abs(val);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(val) <= tol * scale) return true;
    // Step along the Euclidean-raised gradient w = g_a.
    double gw = 0.0;
    for (double c : grad) gw += c * c;
    if (gw < 1e-14) return false;
    double step = -val / gw;
    // Backtracking safeguard: stay in the domain and decrease |G|.
    for (int bt = 0; bt < 30; ++bt) {
      Vec vn = v;
      for (size_t a = 0; a < vn.size(); ++a) vn[a] += step * grad[a];
      if (G.G.in_domain(x, vn)) {
        double nv;
        Vec ng;
        value_and_grad(G.G, x, vn, nv, ng);
        if (std::abs(nv) < std::abs(val)) {
          v = vn;
          val = nv;
          grad = ng;
          break;
        }
      }
      step *= 0.5;
      if (bt == 29) return false;
    }
  }
  return std::abs(val) <= tol * scale;
}

PhasePoint sample_on_cone(const DefiningFunction& G, SeededRng& rng, int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Vec x = box_sample(G.sample_x_lo, G.sample_x_hi, rng);
    Vec v = sphere_sample(G.n, rng);
    if (G.v_chart) G.v_chart(v);
    if (!G.G.in_domain(x, v)) continue;
    if (!polish_to_cone(G, x, v)) continue;

    // Keep the point usable downstream: renormalize, re-polish and insist on
    // a comfortably regular Hessian.
    double nrm = 0.0;
    for (double c : v) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) continue;
    for (double& c : v) c /= nrm;
    if (!G.G.in_domain(x, v) || !polish_to_cone(G, x, v)) continue;

    RingPtr ring = JetRing::get(JetSpec{G.n, 0, 2, 2});
    Jet j = eval_field_jet(G.G, PhasePoint{x, v}, ring);
    Mat hess(G.n, G.n);
    for (int a = 0; a < G.n; ++a)
      for (int b = 0; b < G.n; ++b) {
        std::array<uint8_t, 16> e{};
        e[static_cast<size_t>(G.n + a)]++;
        e[static_cast<size_t>(G.n + b)]++;
        hess(a, b) = j.partial(e);
      }
    Lu lu(hess);
    if (lu.singular() || lu.cond_1() > 1e10) continue;

    return PhasePoint{std::move(x), std::move(v)};
  }
  throw DomainError("sample_on_cone: no on-cone point found in chart for " + G.name);
}

DefiningFunction make_quadratic(const std::string& name, const MetricField& metric, Vec x_lo,
                                Vec x_hi, std::function<bool(const Vec&)> x_domain) {
  const int n = metric.n;
  DefiningFunction d;
  d.name = name;
  d.n = n;
  d.k = 2.0;
  d.sample_x_lo = x_lo;
  d.sample_x_hi = x_hi;
  d.metric = metric;

  // Symmetry and regularity at seeded chart points.
  SeededRng rng(7);
  for (int s = 0; s < 9; ++s) {
    Vec x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      x[static_cast<size_t>(i)] = s == 0 ? 0.5 * (x_lo[static_cast<size_t>(i)] +
                                                  x_hi[static_cast<size_t>(i)])
                                         : rng.uniform(x_lo[static_cast<size_t>(i)],
                                                       x_hi[static_cast<size_t>(i)]);
    if (x_domain && !x_domain(x)) continue;
    Mat g;
    metric.value(x, g);
    double scale = max_abs(g);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (std::abs(g(a, b) - g(b, a)) > 1e-12 * (1.0 + scale))
          throw ValidationError("make_quadratic: metric is not symmetric");
    Lu lu(g);
    if (lu.singular() || lu.cond_1() > 1e12)
      throw RegularityError("make_quadratic: metric is singular at a sample point",
                            lu.singular() ? std::numeric_limits<double>::infinity()
                                          : lu.cond_1());
  }

  MetricField m = metric;
  ScalarField f;
  f.n = n;
  f.value = [m](const Vec& x, const Vec& v) { return quadratic_G<double>(m, x, v); };
  f.jet_value = [m](const std::vector<Jet>& x, const std::vector<Jet>& v) {
    return quadratic_G<Jet>(m, x, v);
  };
  if (x_domain) f.domain = [x_domain](const Vec& x, const Vec&) { return x_domain(x); };
  d.G = std::move(f);
  return d;
}

DefiningFunction wuenschmann_cone() {
  DefiningFunction d;
  d.name = "wuenschmann_cone";
  d.n = 3;
  d.k = 2.0;
  d.domain_note = "v2 > 0, v1 < 0";
  d.sample_x_lo = {-1.0, -1.0, -1.0};
  d.sample_x_hi = {1.0, 1.0, 1.0};
  d.v_chart = [](Vec& v) {
    v[0] = -std::abs(v[0]) - 0.25;
    v[1] = std::abs(v[1]) + 0.25;
  };
  auto G = [](const auto& x, const auto& v) {
    // t'^2 - t' u' - t'^2 log(-s'/t') with (s', t', u') = (v1, v2, v3).
    auto ratio = (v[0] * (-1.0)) / v[1];
    (void)x;
    return v[1] * v[1] - v[1] * v[2] - v[1] * v[1] * log(ratio);
  };
  ScalarField f = make_field(3, G, [](const Vec&, const Vec& v) {
    return v[1] > 1e-12 && v[0] < -1e-12;
  });
  d.G = std::move(f);
  return d;
}

DefiningFunction conformal_rescale(const DefiningFunction& base, const ConformalFactor& factor) {
  const double p = base.k + factor.q;
  if (std::abs(p - 1.0) < 1e-12)
    throw ValidationError("conformal_rescale: degree p = k + q must not be 1");

  DefiningFunction d;
  d.name = base.name + "*" + factor.name;
  d.n = base.n;
  d.k = p;
  d.domain_note = base.domain_note;
  d.provenance = "rescaled";
  d.sample_x_lo = base.sample_x_lo;
  d.sample_x_hi = base.sample_x_hi;
  d.v_chart = base.v_chart;

  const ScalarField Gf = base.G;
  const ScalarField Jf = factor.J;
  ScalarField f;
  f.n = base.n;
  f.value = [Gf, Jf](const Vec& x, const Vec& v) { return Jf.value(x, v) * Gf.value(x, v); };
  f.jet_value = [Gf, Jf](const std::vector<Jet>& x, const std::vector<Jet>& v) {
    return Jf.jet_value(x, v) * Gf.jet_value(x, v);
  };
  f.domain = [Gf, Jf](const Vec& x, const Vec& v) {
    return Gf.in_domain(x, v) && Jf.in_domain(x, v);
  };
  d.G = std::move(f);

  // J must not vanish near the cone: check at seeded on-cone points.
  SeededRng rng(11);
  for (int s = 0; s < 5; ++s) {
    PhasePoint pt = sample_on_cone(base, rng);
    const double jv = Jf.value(pt.x, pt.v);
    if (std::abs(jv) < 1e-10)
      throw DomainError("conformal_rescale: factor vanishes at a sampled cone point");
  }
  return d;
}

double verify_homogeneity(const DefiningFunction& G, int samples, uint64_t seed) {
  if (samples < 1) throw ValidationError("verify_homogeneity: samples must be >= 1");
  SeededRng rng(seed);
  const double ts[3] = {0.5, 2.0, std::exp(1.0)};
  double worst = 0.0;
  int got = 0;
  int attempts = 0;
  while (got < samples && attempts < samples * 50) {
    ++attempts;
    Vec x = box_sample(G.sample_x_lo, G.sample_x_hi, rng);
    Vec v = sphere_sample(G.n, rng);
    if (G.v_chart) G.v_chart(v);
    if (!G.G.in_domain(x, v)) continue;
    const double g0 = G.G.value(x, v);
    bool usable = true;
    double local = 0.0;
    for (double t : ts) {
      Vec tv = v;
      for (double& c : tv) c *= t;
      if (!G.G.in_domain(x, tv)) {
        usable = false;
        break;
      }
      const double gt = G.G.value(x, tv);
      local = std::max(local, std::abs(gt - std::pow(t, G.k) * g0) / (1.0 + std::abs(g0)));
    }
    if (!usable) continue;
    ++got;
    worst = std::max(worst, local);
  }
  if (got < samples) throw DomainError("verify_homogeneity: could not sample enough domain points");
  return worst;
}

namespace {

std::map<std::string, DefiningFunction> build_catalog() {
  std::map<std::string, DefiningFunction> cat;

  {
    auto mink = make_metric(4, [](const auto& x, auto& g) {
      auto zero = x[0] * 0.0;
      for (auto& e : g) e = zero;
      g[0] = zero + 1.0;
      g[5] = zero - 1.0;
      g[10] = zero - 1.0;
      g[15] = zero - 1.0;
    });
    DefiningFunction d = make_quadratic("minkowski4", mink, Vec(4, -1.0), Vec(4, 1.0));
    cat.emplace(d.name, std::move(d));
  }

  {
    // g = du dv - dx^2 - u^{-1} dy^2 on u > 0, coordinates (u, v, x, y).
    auto kap = make_metric(4, [](const auto& x, auto& g) {
      auto zero = x[0] * 0.0;
      for (auto& e : g) e = zero;
      g[1] = zero + 0.5;
      g[4] = zero + 0.5;
      g[10] = zero - 1.0;
      g[15] = zero - 1.0 / x[0];
    });
    DefiningFunction d =
        make_quadratic("kapadia", kap, {0.5, -1.0, -1.0, -1.0}, {2.0, 1.0, 1.0, 1.0},
                       [](const Vec& x) { return x[0] > 1e-6; });
    d.domain_note = "u = x1 > 0";
    cat.emplace(d.name, std::move(d));
  }

  {
    DefiningFunction d = wuenschmann_cone();
    cat.emplace(d.name, std::move(d));
  }

  {
    // Closed-slice FRW-like metric (static Einstein-cylinder form):
    // g = dt^2 - dchi^2 - sin^2(chi) dy^2 - dz^2, chi = x2 in (0, pi).
    // Null energy condition holds with tr S <= 0 in the paper's sign.
    auto frw = make_metric(4, [](const auto& x, auto& g) {
      auto zero = x[0] * 0.0;
      for (auto& e : g) e = zero;
      g[0] = zero + 1.0;
      g[5] = zero - 1.0;
      auto s = sin(x[1]);
      g[10] = zero - s * s;
      g[15] = zero - 1.0;
    });
    DefiningFunction d = make_quadratic("frw_like", frw, {-1.0, 1.0, -1.0, -1.0},
                                        {1.0, 2.0, 1.0, 1.0},
                                        [](const Vec& x) { return x[1] > 0.15 && x[1] < 3.0; });
    d.domain_note = "chi = x2 in (0.15, 3.0)";
    cat.emplace(d.name, std::move(d));
  }

  {
    // Generic diagonal metric with polynomial coefficients.
    auto poly = make_metric(4, [](const auto& x, auto& g) {
      auto zero = x[0] * 0.0;
      for (auto& e : g) e = zero;
      g[0] = zero + 1.0 + (x[1] * x[1] + x[2] * x[2]) * 0.125;
      g[5] = zero - 1.0 - x[0] * x[0] * 0.1 - x[3] * (1.0 / 12.0);
      g[10] = zero - 1.0 - (x[0] + x[2]) * (x[0] + x[2]) * (1.0 / 12.0);
      g[15] = zero - 1.0 - x[1] * x[1] * (1.0 / 9.0) - x[0] * (1.0 / 15.0);
    });
    DefiningFunction d = make_quadratic("polydiag4", poly, Vec(4, -0.8), Vec(4, 0.8));
    cat.emplace(d.name, std::move(d));
  }

  // Conformally rescaled entries (the identity suite runs over these too).
  auto add_rescaled = [&cat](const std::string& base, const std::string& factor) {
    DefiningFunction d = conformal_rescale(cat.at(base), builtin_factor(factor));
    cat.emplace(d.name, std::move(d));
  };
  add_rescaled("minkowski4", "exp_x1");
  add_rescaled("minkowski4", "vnorm");
  add_rescaled("kapadia", "exp_x1");
  add_rescaled("kapadia", "vnorm");

  return cat;
}

std::map<std::string, DefiningFunction>& catalog_map() {
  static std::map<std::string, DefiningFunction> cat = build_catalog();
  return cat;
}

std::map<std::string, ConformalFactor> build_factors() {
  std::map<std::string, ConformalFactor> fs;
  {
    ConformalFactor f;
    f.name = "const2";
    f.q = 0.0;
    f.J = make_field(4, [](const auto& x, const auto& v) {
      (void)v;
      return x[0] * 0.0 + 2.0;
    });
    fs.emplace(f.name, std::move(f));
  }
  {
    ConformalFactor f;
    f.name = "exp_x1";
    f.q = 0.0;
    f.J = make_field(4, [](const auto& x, const auto& v) {
      (void)v;
      return exp(x[0] * 0.5);
    });
    fs.emplace(f.name, std::move(f));
  }
  {
    ConformalFactor f;
    f.name = "vnorm";
    f.q = 1.0;
    f.J = make_field(4, [](const auto& x, const auto& v) {
      auto acc = x[0] * 0.0;
      for (const auto& c : v) acc += c * c;
      return sqrt(acc);
    });
    fs.emplace(f.name, std::move(f));
  }
  return fs;
}

std::map<std::string, ConformalFactor>& factor_map() {
  static std::map<std::string, ConformalFactor> fs = build_factors();
  return fs;
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : catalog_map()) names.push_back(k);
  return names;
}

bool catalog_has(const std::string& name) { return catalog_map().count(name) > 0; }

const DefiningFunction& catalog(const std::string& name) {
  auto it = catalog_map().find(name);
  if (it == catalog_map().end()) throw ValidationError("unknown catalog geometry: " + name);
  return it->second;
}

const ConformalFactor& builtin_factor(const std::string& name) {
  auto it = factor_map().find(name);
  if (it == factor_map().end()) throw ValidationError("unknown conformal factor: " + name);
  return it->second;
}

std::vector<std::string> factor_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : factor_map()) names.push_back(k);
  return names;
}

}  // namespace causal
