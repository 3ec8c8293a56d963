#include "causal/jet_table.hpp"

namespace causal {

JetTable evaluate_jets(const ScalarField& f, const PhasePoint& p, int x_order, int v_order) {
  check_phase_point(p);
  if (x_order < 0 || x_order > 2 || v_order < 0 || v_order > 4)
    throw CapabilityError("evaluate_jets supports x_order <= 2 and v_order <= 4");
  if (x_order > f.max_x_order || v_order > f.max_v_order)
    throw CapabilityError("requested order exceeds field capability");
  // Rectangular ring: no combined-degree cap below x_order + v_order.
  RingPtr ring = JetRing::get(JetSpec{f.n, x_order, v_order, x_order + v_order});
  JetTable t;
  t.base = p;
  t.n = f.n;
  t.x_order = x_order;
  t.v_order = v_order;
  t.data = eval_field_jet(f, p, ring);
  return t;
}

std::array<double, 3> euler_residuals(const JetTable& jets, double k) {
  const int n = jets.n;
  const Vec& v = jets.base.v;
  double r0 = 0.0, r1 = 0.0, r2 = 0.0;

  double vg = 0.0;
  for (int a = 0; a < n; ++a) vg += v[static_cast<size_t>(a)] * jets.g(a);
  r0 = std::abs(vg - k * jets.G());

  for (int b = 0; b < n; ++b) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += v[static_cast<size_t>(a)] * jets.g2(a, b);
    r1 = std::max(r1, std::abs(s - (k - 1.0) * jets.g(b)));
  }

  for (int b = 0; b < n; ++b)
    for (int c = b; c < n; ++c) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += v[static_cast<size_t>(a)] * jets.g3(a, b, c);
      r2 = std::max(r2, std::abs(s - (k - 2.0) * jets.g2(b, c)));
    }

  return {r0, r1, r2};
}

namespace {

double fd_recursive(const ScalarField& f, Vec& x, Vec& v, const std::vector<int>& slots,
                    size_t pos, double h, int n) {
  if (pos == slots.size()) {
    if (!f.in_domain(x, v)) throw DomainError("finite difference stencil left the field domain");
    return f.value(x, v);
  }
  const int s = slots[pos];
  double* coord = s < n ? &x[static_cast<size_t>(s)] : &v[static_cast<size_t>(s - n)];
  const double saved = *coord;
  *coord = saved + h;
  const double fp = fd_recursive(f, x, v, slots, pos + 1, h, n);
  *coord = saved - h;
  const double fm = fd_recursive(f, x, v, slots, pos + 1, h, n);
  *coord = saved;
  return (fp - fm) / (2.0 * h);
}

void enumerate_multi(int n, int order, std::vector<std::vector<int>>& out) {
  // Nondecreasing index tuples of the given length (canonical representatives).
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start, int left) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i, left - 1);
      cur.pop_back();
    }
  };
  rec(rec, 0, order);
}

}  // namespace

double central_difference(const ScalarField& f, const PhasePoint& p, const std::vector<int>& xi,
                          const std::vector<int>& vi, double h) {
  if (h <= 0.0) throw ValidationError("central_difference: h must be positive");
  std::vector<int> slots;
  slots.reserve(xi.size() + vi.size());
  for (int a : xi) slots.push_back(a);
  for (int a : vi) slots.push_back(f.n + a);
  Vec x = p.x, v = p.v;
  return fd_recursive(f, x, v, slots, 0, h, f.n);
}

double finite_difference_check(const ScalarField& f, const PhasePoint& p, int x_order,
                               int v_order, double h) {
  JetTable t = evaluate_jets(f, p, x_order, v_order);
  std::vector<std::vector<int>> xs, vs;
  enumerate_multi(f.n, x_order, xs);
  enumerate_multi(f.n, v_order, vs);
  double worst = 0.0;
  for (const auto& xi : xs)
    for (const auto& vi : vs) {
      const double jet = t.partial(xi, vi);
      const double fd = central_difference(f, p, xi, vi, h);
      worst = std::max(worst, std::abs(fd - jet) / (1.0 + std::abs(jet)));
    }
  return worst;
}

}  // namespace causal
