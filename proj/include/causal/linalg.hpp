// Small dense linear algebra for phase-space dimensions n <= 8.
// LU with partial pivoting, 1-norm condition estimate, and a Jacobi
// eigensolver for symmetric matrices (signature counts).

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace causal {

using Vec = std::vector<double>;

// Row-major dense matrix, value semantics.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline Mat transpose(const Mat& m) {
  Mat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline Mat matmul(const Mat& x, const Mat& y) {
  Mat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

inline double norm1(const Mat& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

inline double max_abs(const Mat& m) {
  double best = 0.0;
  for (double x : m.a) best = std::max(best, std::abs(x));
  return best;
}

inline double max_abs(const Vec& v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

// LU factorization with partial pivoting.  singular() reports exact
// breakdown; cond_1() is ||A||_1 * ||A^-1||_1 computed from the inverse
// (matrices here are tiny).
struct Lu {
  int n = 0;
  Mat lu;
  std::vector<int> piv;
  bool ok = true;
  double a_norm1 = 0.0;

  explicit Lu(const Mat& m) : n(m.rows), lu(m), piv(static_cast<size_t>(m.rows)) {
    a_norm1 = norm1(m);
    for (int k = 0; k < n; ++k) {
      int p = k;
      for (int i = k + 1; i < n; ++i)
        if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
      piv[k] = p;
      if (p != k)
        for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      if (lu(k, k) == 0.0) {
        ok = false;
        return;
      }
      const double inv = 1.0 / lu(k, k);
      for (int i = k + 1; i < n; ++i) {
        lu(i, k) *= inv;
        const double f = lu(i, k);
        for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      }
    }
  }

  bool singular() const { return !ok; }

  void solve_inplace(Vec& b) const {
    for (int k = 0; k < n; ++k) {
      if (piv[k] != k) std::swap(b[k], b[piv[k]]);
      for (int i = k + 1; i < n; ++i) b[i] -= lu(i, k) * b[k];
    }
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) b[i] -= lu(i, j) * b[j];
      b[i] /= lu(i, i);
    }
  }

  Vec solve(Vec b) const {
    solve_inplace(b);
    return b;
  }

  Mat inverse() const {
    Mat inv(n, n);
    Vec col(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      std::fill(col.begin(), col.end(), 0.0);
      col[j] = 1.0;
      solve_inplace(col);
      for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
  }

  double cond_1() const {
    if (!ok) return std::numeric_limits<double>::infinity();
    return a_norm1 * norm1(inverse());
  }

  double det() const {
    if (!ok) return 0.0;
    double d = 1.0;
    for (int k = 0; k < n; ++k) {
      d *= lu(k, k);
      if (piv[k] != k) d = -d;
    }
    return d;
  }
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline Vec symmetric_eigenvalues(Mat m) {
  const int n = m.rows;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
  }
  Vec ev(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  return ev;
}

// Counts (positive, negative) eigenvalues above the scale cutoff.
inline std::pair<int, int> signature(const Mat& m, double cutoff = 1e-12) {
  Vec ev = symmetric_eigenvalues(m);
  double scale = 0.0;
  for (double e : ev) scale = std::max(scale, std::abs(e));
  const double tol = cutoff * (1.0 + scale);
  int pos = 0, neg = 0;
  for (double e : ev) {
    if (e > tol) ++pos;
    else if (e < -tol) ++neg;
  }
  return {pos, neg};
}

// Orthonormal basis of the hyperplane {X : <a,X> = 0} via the Householder
// reflection that maps a to a multiple of e_1; columns 2..n of the
// reflector are the basis.  Deterministic given a.
inline std::vector<Vec> householder_kernel_basis(const Vec& a) {
  const int n = static_cast<int>(a.size());
  double nrm = 0.0;
  for (double x : a) nrm += x * x;
  nrm = std::sqrt(nrm);
  if (nrm == 0.0) throw std::invalid_argument("householder_kernel_basis: zero covector");

  // Scale-invariant sign convention: flip so the largest-|entry| coordinate
  // of a is positive; ties resolved by lowest index.
  int imax = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(a[i]) > std::abs(a[imax])) imax = i;
  const double flip = a[imax] >= 0.0 ? 1.0 : -1.0;

  Vec u(a);
  for (double& x : u) x *= flip / nrm;
  u[0] += (u[0] >= 0.0 ? 1.0 : -1.0);
  double unrm2 = 0.0;
  for (double x : u) unrm2 += x * x;

  std::vector<Vec> basis;
  basis.reserve(static_cast<size_t>(n) - 1);
  for (int j = 1; j < n; ++j) {
    Vec col(static_cast<size_t>(n), 0.0);
    col[j] = 1.0;
    const double f = 2.0 * u[j] / unrm2;
    for (int i = 0; i < n; ++i) col[i] -= f * u[i];
    basis.push_back(std::move(col));
  }
  return basis;
}

}  // namespace causal
