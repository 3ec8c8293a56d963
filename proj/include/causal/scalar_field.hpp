// Scalar fields on phase space (x, v), evaluable over plain doubles and over
// jet rings.  A field owns its domain predicate; everything downstream
// treats evaluation outside the domain as a DomainError.

#pragma once

#include <functional>
#include <utility>

#include "causal/jet.hpp"
#include "causal/linalg.hpp"

namespace causal {

struct PhasePoint {
  Vec x, v;

  int n() const { return static_cast<int>(x.size()); }
};

inline void check_phase_point(const PhasePoint& p) {
  if (p.x.size() != p.v.size()) throw ValidationError("phase point: dim(x) != dim(v)");
  if (p.n() < 2) throw ValidationError("phase point: n must be >= 2");
  double vn = 0.0;
  for (double c : p.v) vn += c * c;
  if (vn == 0.0) throw DomainError("phase point: v = 0 is outside TM'");
}

struct ScalarField {
  int n = 0;
  std::function<double(const Vec& x, const Vec& v)> value;
  std::function<Jet(const std::vector<Jet>& x, const std::vector<Jet>& v)> jet_value;
  std::function<bool(const Vec& x, const Vec& v)> domain;  // empty = everywhere
  int max_x_order = 3;
  int max_v_order = 5;

  bool in_domain(const Vec& x, const Vec& v) const { return !domain || domain(x, v); }
  bool in_domain(const PhasePoint& p) const { return in_domain(p.x, p.v); }

  double operator()(const PhasePoint& p) const {
    if (!in_domain(p)) throw DomainError("scalar field evaluated outside its domain");
    return value(p.x, p.v);
  }
};

// Builds a ScalarField from one generic callable T f(const vector<T>& x,
// const vector<T>& v), instantiated for double and Jet.
template <typename F>
ScalarField make_field(int n, F f, std::function<bool(const Vec&, const Vec&)> domain = {}) {
  ScalarField s;
  s.n = n;
  s.value = [f](const Vec& x, const Vec& v) -> double { return f(x, v); };
  s.jet_value = [f](const std::vector<Jet>& x, const std::vector<Jet>& v) -> Jet {
    return f(x, v);
  };
  s.domain = std::move(domain);
  return s;
}

// Evaluates a field's jet polynomial at p over the given ring, seeding all
// 2n phase variables.
inline Jet eval_field_jet(const ScalarField& f, const PhasePoint& p, const RingPtr& ring) {
  if (!f.in_domain(p)) throw DomainError("scalar field evaluated outside its domain");
  const int n = f.n;
  std::vector<Jet> xj, vj;
  xj.reserve(static_cast<size_t>(n));
  vj.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    xj.push_back(Jet::variable_or_const(ring, i, p.x[static_cast<size_t>(i)]));
  for (int i = 0; i < n; ++i)
    vj.push_back(Jet::variable_or_const(ring, n + i, p.v[static_cast<size_t>(i)]));
  return f.jet_value(xj, vj);
}

}  // namespace causal
