// Forward-mode derivative engine: truncated multivariate Taylor polynomials
// in the 2n phase-space variables (x^1..x^n, v^1..v^n).
//
// A ring is fixed by (n, x_order, v_order, total_order): it spans monomials
// xi^alpha nu^beta with |alpha| <= x_order, |beta| <= v_order and
// |alpha|+|beta| <= total_order.  Truncation at total_order is exact for the
// retained coefficients, so every stored coefficient of a product or series
// composition is the true Taylor coefficient.  Partial derivatives of an
// already-computed polynomial are coefficient shifts and cost nothing.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace causal {

struct JetSpec {
  int n = 0;         // base dimension; ring has 2n variables
  int x_order = 0;   // cap on the x-block degree
  int v_order = 0;   // cap on the v-block degree
  int total = 0;     // cap on combined degree

  bool operator==(const JetSpec&) const = default;
};

// Error kinds mirrored by the CLI exit-status contract.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RegularityError : std::runtime_error {
  double cond = 0.0;
  explicit RegularityError(const std::string& what, double c = 0.0)
      : std::runtime_error(what), cond(c) {}
};
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class JetRing;
using RingPtr = std::shared_ptr<const JetRing>;

class JetRing {
 public:
  JetSpec spec;
  int nvars = 0;                         // 2n
  int size = 0;                          // number of monomials
  std::vector<std::array<uint8_t, 16>> expo;  // exponent vectors
  std::vector<int> degree;               // total degree per monomial, ascending
  std::vector<int> degree_begin;         // monomials of degree d start at degree_begin[d]

  // Multiplication table grouped by result monomial: for result k the factor
  // pairs live in pairs[pair_begin[k] .. pair_begin[k+1]).
  std::vector<uint32_t> pair_begin;
  std::vector<std::pair<uint16_t, uint16_t>> pairs;

  // d/dz_s as a coefficient shift: for each entry, out[dst] = factor * in[src].
  struct DerivEntry {
    uint16_t src, dst;
    double factor;
  };
  std::vector<std::vector<DerivEntry>> deriv;  // per variable slot

  static RingPtr get(const JetSpec& spec);  // cached construction

  int index_of(const std::array<uint8_t, 16>& e) const;

 private:
  explicit JetRing(const JetSpec& s);
  friend struct RingRegistryAccess;
};

// One element of a jet ring.  Value semantics; coefficient 0 is the value at
// the base point.
class Jet {
 public:
  RingPtr ring;
  std::vector<double> c;

  Jet() = default;
  explicit Jet(RingPtr r, double value = 0.0)
      : ring(std::move(r)), c(static_cast<size_t>(ring->size), 0.0) {
    c[0] = value;
  }

  static Jet constant(RingPtr r, double value) { return Jet(std::move(r), value); }

  // Seed for variable slot s (x^i is slot i, v^i is slot n+i).
  static Jet variable(RingPtr r, int slot, double value);

  // Like variable(), but degrades to a constant when the ring carries no
  // first-order term for the slot (e.g. x-seeds in a v-only ring).
  static Jet variable_or_const(RingPtr r, int slot, double value);

  double value() const { return c[0]; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s) {
    c[0] += s;
    return *this;
  }
  Jet& operator-=(double s) {
    c[0] -= s;
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& x : c) x *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b);
  friend Jet operator-(const Jet& a);
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(double a, const Jet& b);
  friend Jet operator/(Jet a, double b) { return a *= (1.0 / b); }

  // Product truncated to total degree <= max_deg (exact for retained terms).
  static Jet mul(const Jet& a, const Jet& b, int max_deg);
  static void mul_acc(Jet& acc, const Jet& a, const Jet& b, int max_deg, double w = 1.0);

  // Partial derivative with respect to variable slot s (coefficient shift).
  Jet deriv_slot(int s) const;
  Jet dx(int i) const { return deriv_slot(i); }
  Jet dv(int i) const { return deriv_slot(ring->spec.n + i); }

  // Mixed partial derivative value at the base point.
  double partial(const std::array<uint8_t, 16>& e) const;

  // Analytic functions via truncated series composition.
  friend Jet exp(const Jet& a);
  friend Jet log(const Jet& a);
  friend Jet sqrt(const Jet& a);
  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);
  friend Jet pow(const Jet& a, double p);
  friend Jet pow(const Jet& a, const Jet& b);  // exp(b*log(a)), a > 0
};

// Series composition f(a) = sum_j coeffs[j] * (a - a0)^j where coeffs[j] is
// the j-th Taylor coefficient of f at a0.  Used by the math functions above.
Jet compose_series(const Jet& a, const std::vector<double>& coeffs);

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace causal
