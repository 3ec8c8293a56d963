#include "causal/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

namespace causal {

namespace {

struct ExpoHash {
  size_t operator()(const std::array<uint8_t, 16>& e) const {
    size_t h = 1469598103934665603ull;
    for (uint8_t b : e) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return h;
  }
};

void enumerate_block(int nvars, int maxdeg, std::vector<std::vector<uint8_t>>& out) {
  // All exponent vectors of nvars variables with total degree <= maxdeg,
  // in graded lexicographic-ish order (order fixed later by sort).
  std::vector<uint8_t> cur(static_cast<size_t>(nvars), 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == nvars) {
      out.push_back(cur);
      return;
    }
    for (int d = 0; d <= remaining; ++d) {
      cur[static_cast<size_t>(pos)] = static_cast<uint8_t>(d);
      self(self, pos + 1, remaining - d);
    }
    cur[static_cast<size_t>(pos)] = 0;
  };
  rec(rec, 0, maxdeg);
}

}  // namespace

struct RingRegistryAccess {
  static RingPtr make(const JetSpec& spec) { return RingPtr(new JetRing(spec)); }
};

RingPtr JetRing::get(const JetSpec& spec) {
  struct Key {
    JetSpec s;
    bool operator<(const Key& o) const {
      return std::tie(s.n, s.x_order, s.v_order, s.total) <
             std::tie(o.s.n, o.s.x_order, o.s.v_order, o.s.total);
    }
  };
  static std::map<Key, RingPtr> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(Key{spec});
  if (it != cache.end()) return it->second;
  if (spec.n < 1 || spec.n > 8)
    throw ValidationError("jet ring: dimension n must be in [1, 8]");
  auto ring = RingRegistryAccess::make(spec);
  cache.emplace(Key{spec}, ring);
  return ring;
}

JetRing::JetRing(const JetSpec& s) : spec(s), nvars(2 * s.n) {
  std::vector<std::vector<uint8_t>> xb, vb;
  enumerate_block(s.n, s.x_order, xb);
  enumerate_block(s.n, s.v_order, vb);

  for (const auto& xe : xb) {
    int xd = 0;
    for (uint8_t b : xe) xd += b;
    for (const auto& ve : vb) {
      int vd = 0;
      for (uint8_t b : ve) vd += b;
      if (xd + vd > s.total) continue;
      std::array<uint8_t, 16> e{};
      for (int i = 0; i < s.n; ++i) e[static_cast<size_t>(i)] = xe[static_cast<size_t>(i)];
      for (int i = 0; i < s.n; ++i) e[static_cast<size_t>(s.n + i)] = ve[static_cast<size_t>(i)];
      expo.push_back(e);
    }
  }

  std::sort(expo.begin(), expo.end(), [&](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int i = 0; i < nvars; ++i) {
      da += a[static_cast<size_t>(i)];
      db += b[static_cast<size_t>(i)];
    }
    if (da != db) return da < db;
    return a < b;
  });
  size = static_cast<int>(expo.size());

  degree.resize(static_cast<size_t>(size));
  std::unordered_map<std::array<uint8_t, 16>, int, ExpoHash> index;
  index.reserve(static_cast<size_t>(size) * 2);
  for (int i = 0; i < size; ++i) {
    int d = 0;
    for (int k = 0; k < nvars; ++k) d += expo[static_cast<size_t>(i)][static_cast<size_t>(k)];
    degree[static_cast<size_t>(i)] = d;
    index[expo[static_cast<size_t>(i)]] = i;
  }
  degree_begin.assign(static_cast<size_t>(s.total) + 2, size);
  for (int i = size - 1; i >= 0; --i)
    degree_begin[static_cast<size_t>(degree[static_cast<size_t>(i)])] = i;
  for (int d = s.total; d >= 0; --d)
    degree_begin[static_cast<size_t>(d)] =
        std::min(degree_begin[static_cast<size_t>(d)], degree_begin[static_cast<size_t>(d) + 1]);

  // Multiplication pairs grouped by result monomial.
  std::vector<std::vector<std::pair<uint16_t, uint16_t>>> by_k(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (degree[static_cast<size_t>(i)] + degree[static_cast<size_t>(j)] > s.total) continue;
      std::array<uint8_t, 16> e{};
      int xd = 0, vd = 0;
      for (int k = 0; k < nvars; ++k) {
        e[static_cast<size_t>(k)] = static_cast<uint8_t>(
            expo[static_cast<size_t>(i)][static_cast<size_t>(k)] +
            expo[static_cast<size_t>(j)][static_cast<size_t>(k)]);
        if (k < s.n) xd += e[static_cast<size_t>(k)];
        else vd += e[static_cast<size_t>(k)];
      }
      if (xd > s.x_order || vd > s.v_order) continue;
      auto it = index.find(e);
      if (it == index.end()) continue;
      by_k[static_cast<size_t>(it->second)].emplace_back(static_cast<uint16_t>(i),
                                                         static_cast<uint16_t>(j));
    }
  }
  pair_begin.resize(static_cast<size_t>(size) + 1, 0);
  for (int k = 0; k < size; ++k)
    pair_begin[static_cast<size_t>(k) + 1] =
        pair_begin[static_cast<size_t>(k)] + static_cast<uint32_t>(by_k[static_cast<size_t>(k)].size());
  pairs.reserve(pair_begin[static_cast<size_t>(size)]);
  for (int k = 0; k < size; ++k)
    for (auto& p : by_k[static_cast<size_t>(k)]) pairs.push_back(p);

  // Derivative shift tables.
  deriv.resize(static_cast<size_t>(nvars));
  for (int sv = 0; sv < nvars; ++sv) {
    for (int m = 0; m < size; ++m) {
      const uint8_t e = expo[static_cast<size_t>(m)][static_cast<size_t>(sv)];
      if (e == 0) continue;
      std::array<uint8_t, 16> d = expo[static_cast<size_t>(m)];
      d[static_cast<size_t>(sv)] = static_cast<uint8_t>(e - 1);
      auto it = index.find(d);
      if (it == index.end()) continue;
      deriv[static_cast<size_t>(sv)].push_back(JetRing::DerivEntry{
          static_cast<uint16_t>(m), static_cast<uint16_t>(it->second), static_cast<double>(e)});
    }
  }
}

int JetRing::index_of(const std::array<uint8_t, 16>& e) const {
  // Linear scan within the matching degree band (ring sizes are small and
  // this is only used for lookups, not inner loops).
  int d = 0;
  for (int k = 0; k < nvars; ++k) d += e[static_cast<size_t>(k)];
  if (d > spec.total) return -1;
  const int lo = degree_begin[static_cast<size_t>(d)];
  const int hi = degree_begin[static_cast<size_t>(d) + 1];
  for (int i = lo; i < hi; ++i)
    if (expo[static_cast<size_t>(i)] == e) return i;
  return -1;
}

Jet Jet::variable(RingPtr r, int slot, double value) {
  Jet j(r, value);
  std::array<uint8_t, 16> e{};
  e[static_cast<size_t>(slot)] = 1;
  const int idx = r->index_of(e);
  if (idx < 0) throw CapabilityError("jet ring has no first-order term for this variable");
  j.c[static_cast<size_t>(idx)] = 1.0;
  return j;
}

Jet Jet::variable_or_const(RingPtr r, int slot, double value) {
  Jet j(r, value);
  std::array<uint8_t, 16> e{};
  e[static_cast<size_t>(slot)] = 1;
  const int idx = r->index_of(e);
  if (idx >= 0) j.c[static_cast<size_t>(idx)] = 1.0;
  return j;
}

Jet& Jet::operator+=(const Jet& o) {
  for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
  return *this;
}

Jet operator-(double a, const Jet& b) {
  Jet r = b;
  for (double& x : r.c) x = -x;
  r.c[0] += a;
  return r;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (double& x : r.c) x = -x;
  return r;
}

void Jet::mul_acc(Jet& acc, const Jet& a, const Jet& b, int max_deg, double w) {
  const JetRing& R = *acc.ring;
  const int kend = max_deg >= R.spec.total
                       ? R.size
                       : R.degree_begin[static_cast<size_t>(max_deg) + 1];
  for (int k = 0; k < kend; ++k) {
    double s = 0.0;
    const uint32_t p0 = R.pair_begin[static_cast<size_t>(k)];
    const uint32_t p1 = R.pair_begin[static_cast<size_t>(k) + 1];
    for (uint32_t p = p0; p < p1; ++p) {
      const auto [i, j] = R.pairs[p];
      s += a.c[i] * b.c[j];
    }
    acc.c[static_cast<size_t>(k)] += w * s;
  }
}

Jet Jet::mul(const Jet& a, const Jet& b, int max_deg) {
  Jet r(a.ring);
  mul_acc(r, a, b, max_deg);
  return r;
}

Jet operator*(const Jet& a, const Jet& b) { return Jet::mul(a, b, a.ring->spec.total); }

Jet Jet::deriv_slot(int s) const {
  Jet r(ring);
  for (const auto& e : ring->deriv[static_cast<size_t>(s)])
    r.c[e.dst] = e.factor * c[e.src];
  return r;
}

double Jet::partial(const std::array<uint8_t, 16>& e) const {
  const int idx = ring->index_of(e);
  if (idx < 0) throw CapabilityError("requested partial derivative exceeds ring order");
  double f = 1.0;
  for (int k = 0; k < ring->nvars; ++k) f *= factorial(e[static_cast<size_t>(k)]);
  return c[static_cast<size_t>(idx)] * f;
}

Jet compose_series(const Jet& a, const std::vector<double>& coeffs) {
  // Horner in the nilpotent part N = a - a0.
  Jet n = a;
  n.c[0] = 0.0;
  const int T = a.ring->spec.total;
  Jet acc = Jet::constant(a.ring, coeffs.back());
  for (int j = static_cast<int>(coeffs.size()) - 2; j >= 0; --j) {
    Jet next(a.ring);
    Jet::mul_acc(next, acc, n, T);
    next.c[0] += coeffs[static_cast<size_t>(j)];
    acc = std::move(next);
  }
  return acc;
}

namespace {
int series_len(const Jet& a) { return a.ring->spec.total + 1; }
}  // namespace

Jet exp(const Jet& a) {
  const double e0 = std::exp(a.value());
  std::vector<double> cf(static_cast<size_t>(series_len(a)));
  for (int j = 0; j < series_len(a); ++j) cf[static_cast<size_t>(j)] = e0 / factorial(j);
  return compose_series(a, cf);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw DomainError("log: nonpositive argument");
  std::vector<double> cf(static_cast<size_t>(series_len(a)));
  cf[0] = std::log(a0);
  double p = 1.0;
  for (int j = 1; j < series_len(a); ++j) {
    p /= a0;
    cf[static_cast<size_t>(j)] = (j % 2 == 1 ? 1.0 : -1.0) * p / j;
  }
  return compose_series(a, cf);
}

Jet sqrt(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw DomainError("sqrt: nonpositive argument");
  return pow(a, 0.5);
}

Jet pow(const Jet& a, double p) {
  const double a0 = a.value();
  // Integer exponents work for any base via repeated multiplication.
  if (p == std::floor(p) && std::abs(p) <= 32) {
    int ip = static_cast<int>(p);
    if (ip == 0) return Jet::constant(a.ring, 1.0);
    Jet base = a;
    bool invert = ip < 0;
    ip = std::abs(ip);
    Jet acc = base;
    for (int i = 1; i < ip; ++i) acc = acc * base;
    if (!invert) return acc;
    return 1.0 / acc;
  }
  if (!(a0 > 0.0)) throw DomainError("pow: nonpositive base with non-integer exponent");
  std::vector<double> cf(static_cast<size_t>(series_len(a)));
  double coeff = std::pow(a0, p);
  cf[0] = coeff;
  for (int j = 1; j < series_len(a); ++j) {
    coeff *= (p - (j - 1)) / (j * a0);
    cf[static_cast<size_t>(j)] = coeff;
  }
  return compose_series(a, cf);
}

Jet pow(const Jet& a, const Jet& b) {
  if (!(a.value() > 0.0)) throw DomainError("pow: nonpositive base with variable exponent");
  return exp(b * log(a));
}

Jet sin(const Jet& a) {
  const double s0 = std::sin(a.value()), c0 = std::cos(a.value());
  std::vector<double> cf(static_cast<size_t>(series_len(a)));
  const double cyc[4] = {s0, c0, -s0, -c0};
  for (int j = 0; j < series_len(a); ++j) cf[static_cast<size_t>(j)] = cyc[j % 4] / factorial(j);
  return compose_series(a, cf);
}

Jet cos(const Jet& a) {
  const double s0 = std::sin(a.value()), c0 = std::cos(a.value());
  std::vector<double> cf(static_cast<size_t>(series_len(a)));
  const double cyc[4] = {c0, -s0, -c0, s0};
  for (int j = 0; j < series_len(a); ++j) cf[static_cast<size_t>(j)] = cyc[j % 4] / factorial(j);
  return compose_series(a, cf);
}

Jet operator/(const Jet& a, const Jet& b) {
  const double b0 = b.value();
  if (b0 == 0.0) throw DomainError("jet division by zero value");
  std::vector<double> cf(static_cast<size_t>(series_len(b)));
  double p = 1.0 / b0;
  for (int j = 0; j < series_len(b); ++j) {
    cf[static_cast<size_t>(j)] = (j % 2 == 0 ? 1.0 : -1.0) * p;
    p /= b0;
  }
  return a * compose_series(b, cf);
}

Jet operator/(double a, const Jet& b) { return Jet::constant(b.ring, a) / b; }

}  // namespace causal
