// JetTable: all mixed partials d_x^alpha D_v^beta G at one phase point, with
// |alpha| <= x_order <= 2 and |beta| <= v_order <= 4.  Lookup is by
// multi-index given as index lists; order inside a list does not matter
// (mixed partials commute and storage is canonical).

#pragma once

#include <array>

#include "causal/scalar_field.hpp"

namespace causal {

struct JetTable {
  PhasePoint base;
  int n = 0;
  int x_order = 0;
  int v_order = 0;
  Jet data;

  double value() const { return data.value(); }

  // Mixed partial for x-indices xi and v-indices vi, e.g. partial({0}, {1,1})
  // is d/dx^0 D_1 D_1 G.
  double partial(const std::vector<int>& xi, const std::vector<int>& vi) const {
    if (static_cast<int>(xi.size()) > x_order || static_cast<int>(vi.size()) > v_order)
      throw CapabilityError("jet table lookup exceeds stored orders");
    std::array<uint8_t, 16> e{};
    for (int a : xi) e[static_cast<size_t>(a)]++;
    for (int a : vi) e[static_cast<size_t>(n + a)]++;
    return data.partial(e);
  }

  double G() const { return value(); }
  double Gx(int a) const { return partial({a}, {}); }
  double g(int a) const { return partial({}, {a}); }
  double g2(int a, int b) const { return partial({}, {a, b}); }
  double g3(int a, int b, int c) const { return partial({}, {a, b, c}); }
};

// Exact mixed jets by forward propagation through the field's evaluation
// rule.  Orders are capped at (2, 4); that is what the curvature stack
// consumes through this interface.
JetTable evaluate_jets(const ScalarField& f, const PhasePoint& p, int x_order, int v_order);

// Residuals of the Euler homogeneity identities for a degree-k field:
//   v^a g_a = k G,   v^a g_ab = (k-1) g_b,   v^a g_abc = (k-2) g_bc.
// Returns the three max-norms in that order.
std::array<double, 3> euler_residuals(const JetTable& jets, double k);

// Central-difference cross-check of one derivative order pair: compares every
// entry with |alpha| = x_order, |beta| = v_order against an iterated central
// difference with step h and returns the worst |fd - jet| / (1 + |jet|).
double finite_difference_check(const ScalarField& f, const PhasePoint& p, int x_order,
                               int v_order, double h);

// One central-difference estimate for a single multi-index (iterated stencil,
// O(h^2)); exposed so tests can run step-halving studies directly.
double central_difference(const ScalarField& f, const PhasePoint& p, const std::vector<int>& xi,
                          const std::vector<int>& vi, double h);

}  // namespace causal
