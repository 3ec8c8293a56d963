// Defining functions G(x, v): the built-in catalog, quadratic-metric
// constructor, generalized conformal rescaling, homogeneity verification and
// the seeded on-cone point sampler.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "causal/dual2.hpp"
#include "causal/scalar_field.hpp"

namespace causal {

// Symmetric metric g_ab(x).  Three evaluation paths: plain values, jet ring
// (main pipeline) and Dual2 (independent oracle path).
struct MetricField {
  int n = 0;
  std::function<void(const Vec& x, Mat& g)> value;
  std::function<void(const std::vector<Jet>& x, std::vector<Jet>& g)> jet_value;  // row-major
  std::function<void(const std::vector<Dual2>& x, std::vector<Dual2>& g)> d2_value;
};

template <typename F>
MetricField make_metric(int n, F f) {
  MetricField m;
  m.n = n;
  m.value = [n, f](const Vec& x, Mat& g) {
    std::vector<double> flat(static_cast<size_t>(n) * n);
    f(x, flat);
    g = Mat(n, n);
    g.a = flat;
  };
  m.jet_value = [f](const std::vector<Jet>& x, std::vector<Jet>& g) { f(x, g); };
  m.d2_value = [f](const std::vector<Dual2>& x, std::vector<Dual2>& g) { f(x, g); };
  return m;
}

struct DefiningFunction {
  std::string name;
  int n = 0;
  double k = 2.0;  // homogeneity degree, k != 1
  ScalarField G;
  std::string domain_note;
  std::string provenance = "builtin";

  // Chart box the samplers draw base points from.
  Vec sample_x_lo, sample_x_hi;

  // Optional velocity-sign constraints applied before cone polishing
  // (charts like the Wuenschmann cone need v-components of fixed sign).
  std::function<void(Vec& v)> v_chart;

  // Present when the geometry came from a metric; used by oracle tests.
  std::optional<MetricField> metric;
};

struct ConformalFactor {
  std::string name;
  ScalarField J;
  double q = 0.0;  // homogeneity degree of J in v
};

// G = (1/2) g_ab(x) v^a v^b.  Validates symmetry and invertibility of the
// metric at seeded sample points inside the chart box.
DefiningFunction make_quadratic(const std::string& name, const MetricField& metric, Vec x_lo,
                                Vec x_hi, std::function<bool(const Vec&)> x_domain = {});

// n = 3 homogenization of the Wuenschmann cone relation
// e^(1 - u'/t') + s'/t' = 0 on the chart {t' > 0, s' < 0}:
//   G = v2^2 - v2 v3 - v2^2 log(-v1/v2),  degree k = 2.
DefiningFunction wuenschmann_cone();

// G-hat = J * G with degree p = k + q and the same null cone.
DefiningFunction conformal_rescale(const DefiningFunction& base, const ConformalFactor& factor);

// Max over sampled points and t in {1/2, 2, e} of
// |G(x, t v) - t^k G(x, v)| / (1 + |G(x, v)|).
double verify_homogeneity(const DefiningFunction& G, int samples, uint64_t seed = 2024);

// Deterministic PRNG for fixtures: the standard-mandated mt19937_64 stream
// with explicit u64 -> double conversions (library distributions are not
// portable, so none are used).
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : eng_(seed) {}
  uint64_t raw() { return eng_(); }
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  double normal();  // Box-Muller on u01 pairs

 private:
  std::mt19937_64 eng_;
  std::optional<double> cached_;
};

// Draws a base point in the chart box and a unit velocity, then root-polishes
// G(x, v + tau w) = 0 along w = Euclidean-raised g_a (safeguarded Newton,
// <= 50 iterations, |G| <= 1e-12 target).  Throws DomainError after
// max_attempts failed draws.
PhasePoint sample_on_cone(const DefiningFunction& G, SeededRng& rng, int max_attempts = 200);

// Root-polish helper: moves v along w until |G(x,v)| <= tol; returns success.
bool polish_to_cone(const DefiningFunction& G, const Vec& x, Vec& v, double tol = 1e-12,
                    int max_iter = 50);

// Built-in catalog.
std::vector<std::string> catalog_names();
const DefiningFunction& catalog(const std::string& name);
bool catalog_has(const std::string& name);

// Named built-in conformal factors (for conformal-check runs):
//   const2   : J = 2                  (q = 0)
//   exp_x1   : J = exp(x1 / 2)        (q = 0)
//   vnorm    : J = sqrt(sum_a v_a^2)  (q = 1)
const ConformalFactor& builtin_factor(const std::string& name);
std::vector<std::string> factor_names();

}  // namespace causal
