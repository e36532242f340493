#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "azlab/errors.hpp"

namespace azlab {

/// Symmetric tridiagonal matrix: diag (n) and off (n-1) entries.
struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;

  int dim() const { return static_cast<int>(diag.size()); }

  static Tridiag zeros(int n) {
    Tridiag t;
    t.diag.assign(static_cast<std::size_t>(n), 0.0);
    t.off.assign(n > 1 ? static_cast<std::size_t>(n - 1) : 0, 0.0);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : diag) m = std::max(m, std::fabs(v));
    for (double v : off) m = std::max(m, std::fabs(v));
    return m;
  }
};

inline Tridiag tridiag_sum(const Tridiag& a, double alpha, const Tridiag& b) {
  // a + alpha * b
  Tridiag r = a;
  for (std::size_t i = 0; i < r.diag.size(); ++i) r.diag[i] += alpha * b.diag[i];
  for (std::size_t i = 0; i < r.off.size(); ++i) r.off[i] += alpha * b.off[i];
  return r;
}

inline std::vector<double> tridiag_mul(const Tridiag& t, const std::vector<double>& x) {
  const int n = t.dim();
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = t.diag[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    if (i > 0) s += t.off[static_cast<std::size_t>(i) - 1] * x[static_cast<std::size_t>(i) - 1];
    if (i + 1 < n) s += t.off[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i) + 1];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double sup_norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::fabs(v));
  return s;
}

struct Inertia {
  int negatives = 0;
  int zeros = 0;
  int positives = 0;
};

/// Inertia of a symmetric tridiagonal matrix by LDL^T (Sylvester's law).
/// Pivots inside the zero band count as zeros; a zero-band pivot that is
/// still coupled to the next row cannot be factored through and raises
/// FactorizationBreakdown (the caller perturbs and retries).
inline Inertia ldlt_inertia(const Tridiag& t, double zero_tol) {
  Inertia res;
  const int n = t.dim();
  double prev = 0.0;
  bool prev_zero = false;
  for (int i = 0; i < n; ++i) {
    double d = t.diag[static_cast<std::size_t>(i)];
    if (i > 0) {
      const double e = t.off[static_cast<std::size_t>(i) - 1];
      if (e != 0.0) {
        if (prev_zero)
          throw FactorizationBreakdown("zero pivot with nonzero coupling in LDL^T");
        d -= e * e / prev;
      }
    }
    prev = d;
    prev_zero = std::fabs(d) <= zero_tol;
    if (prev_zero)
      ++res.zeros;
    else if (d > 0.0)
      ++res.positives;
    else
      ++res.negatives;
  }
  return res;
}

/// Sturm count for the pencil K - theta*B: number of eigenvalues below theta.
/// Zero pivots are replaced by a tiny negative value (standard bisection
/// practice); never throws.
inline int sturm_count_below(const Tridiag& K, const Tridiag& B, double theta) {
  const int n = K.dim();
  const double scale = std::max(K.max_abs(), std::fabs(theta) * B.max_abs());
  const double tiny = std::max(scale, 1.0) * 1e-300 + std::numeric_limits<double>::min();
  int count = 0;
  double prev = 1.0;
  for (int i = 0; i < n; ++i) {
    double d = K.diag[static_cast<std::size_t>(i)] - theta * B.diag[static_cast<std::size_t>(i)];
    if (i > 0) {
      const double e =
          K.off[static_cast<std::size_t>(i) - 1] - theta * B.off[static_cast<std::size_t>(i) - 1];
      d -= e * e / prev;
    }
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
    prev = d;
  }
  return count;
}

/// LU solve with partial pivoting for a general tridiagonal system
/// (dl = subdiagonal, d = diagonal, du = superdiagonal). Returns false on an
/// exactly singular matrix. rhs is overwritten with the solution.
inline bool tridiag_lu_solve(std::vector<double> dl, std::vector<double> d,
                             std::vector<double> du, std::vector<double>& rhs) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return true;
  std::vector<double> du2(n > 2 ? static_cast<std::size_t>(n - 2) : 0, 0.0);
  std::vector<char> swapped(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n - 1; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    if (std::fabs(d[ui]) >= std::fabs(dl[ui])) {
      if (d[ui] == 0.0) return false;
      const double m = dl[ui] / d[ui];
      d[ui + 1] -= m * du[ui];
      rhs[ui + 1] -= m * rhs[ui];
      dl[ui] = 0.0;
    } else {
      // swap rows i and i+1
      const double m = d[ui] / dl[ui];
      d[ui] = dl[ui];
      double tmp = d[ui + 1];
      d[ui + 1] = du[ui] - m * tmp;
      if (i + 2 < n) {
        du2[ui] = du[ui + 1];
        du[ui + 1] = -m * du[ui + 1];
      }
      du[ui] = tmp;
      std::swap(rhs[ui], rhs[ui + 1]);
      rhs[ui + 1] -= m * rhs[ui];
      swapped[ui] = 1;
    }
  }
  if (d[static_cast<std::size_t>(n - 1)] == 0.0) return false;
  // back substitution
  rhs[static_cast<std::size_t>(n - 1)] /= d[static_cast<std::size_t>(n - 1)];
  if (n >= 2) {
    const std::size_t i = static_cast<std::size_t>(n - 2);
    rhs[i] = (rhs[i] - du[i] * rhs[i + 1]) / d[i];
  }
  for (int i = n - 3; i >= 0; --i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    rhs[ui] = (rhs[ui] - du[ui] * rhs[ui + 1] - du2[ui] * rhs[ui + 2]) / d[ui];
  }
  return true;
}

/// Solve the symmetric tridiagonal system t x = rhs with partial pivoting.
inline bool tridiag_solve(const Tridiag& t, std::vector<double>& rhs) {
  return tridiag_lu_solve(t.off, t.diag, t.off, rhs);
}

struct PencilEigenOptions {
  double bisection_rel_tol = 1e-14;
  int max_bisections = 200;
  int max_inverse_iterations = 60;
  double residual_rel_tol = 1e-11;
};

struct PencilEigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

namespace detail {

// Fixed linear congruential generator for deterministic start vectors.
inline double lcg_unit(std::uint64_t& state) {
  state = state * 6364136223846793005ULL + 1442695040888963407ULL;
  return static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0);
}

inline double b_dot(const Tridiag& B, const std::vector<double>& x, const std::vector<double>& y) {
  return dot(tridiag_mul(B, x), y);
}

}  // namespace detail

/// k algebraically smallest eigenpairs of K v = theta B v (K symmetric
/// tridiagonal, B symmetric tridiagonal positive definite) by inertia
/// bisection plus inverse iteration. Vectors are B-orthonormal with the first
/// significant component positive.
inline std::vector<PencilEigenPair> pencil_lowest_eigenpairs(const Tridiag& K, const Tridiag& B,
                                                             int k,
                                                             const PencilEigenOptions& opts = {}) {
  const int n = K.dim();
  if (k < 0 || k > n) throw BadConfig("eigenpair count out of range");
  std::vector<PencilEigenPair> out;
  if (k == 0 || n == 0) return out;

  // bracket all wanted eigenvalues by doubling
  double lo = -1.0, hi = 1.0;
  int guard = 0;
  while (sturm_count_below(K, B, lo) > 0) {
    lo *= 2.0;
    if (++guard > 2000) throw ConvergenceFailure("eigenvalue lower bracket not found");
  }
  guard = 0;
  while (sturm_count_below(K, B, hi) < k) {
    hi *= 2.0;
    if (++guard > 2000) throw ConvergenceFailure("eigenvalue upper bracket not found");
  }

  const double scale_k = K.max_abs();
  const double scale_b = B.max_abs();

  double running_lo = lo;
  for (int j = 1; j <= k; ++j) {
    double a = running_lo, b = hi;
    for (int it = 0; it < opts.max_bisections; ++it) {
      const double width = b - a;
      if (width <= opts.bisection_rel_tol * std::max({std::fabs(a), std::fabs(b), 1.0}))
        break;
      const double mid = 0.5 * (a + b);
      if (sturm_count_below(K, B, mid) >= j)
        b = mid;
      else
        a = mid;
    }
    const double theta = 0.5 * (a + b);
    running_lo = a;  // eigenvalues are sought in ascending order

    // inverse iteration on (K - theta_hat B)
    std::uint64_t rng = 0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(j) << 32);
    std::vector<double> x(static_cast<std::size_t>(n));
    PencilEigenPair pair;
    bool converged = false;
    for (int attempt = 0; attempt < 5 && !converged; ++attempt) {
      for (double& xi : x) xi = detail::lcg_unit(rng) - 0.5;
      double shift_off = (b - a) + (scale_k + std::fabs(theta) * scale_b) * 1e-14 * (attempt + 1);
      Tridiag shifted = tridiag_sum(K, -(theta + shift_off), B);
      for (int it = 0; it < opts.max_inverse_iterations; ++it) {
        std::vector<double> y = tridiag_mul(B, x);
        if (!tridiag_solve(shifted, y)) {
          shift_off *= 4.0;
          shifted = tridiag_sum(K, -(theta + shift_off), B);
          continue;
        }
        // B-orthogonalize against converged vectors
        for (const auto& prev : out) {
          const double c = detail::b_dot(B, y, prev.vector);
          for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * prev.vector[i];
        }
        const double bn = std::sqrt(std::max(detail::b_dot(B, y, y), 0.0));
        if (!(bn > 0.0) || !std::isfinite(bn)) break;
        for (double& yi : y) yi /= bn;
        x = y;
        std::vector<double> res = tridiag_mul(K, x);
        const std::vector<double> bx = tridiag_mul(B, x);
        for (std::size_t i = 0; i < res.size(); ++i) res[i] -= theta * bx[i];
        const double rnorm = sup_norm(res);
        if (rnorm <= opts.residual_rel_tol * std::max(scale_k + std::fabs(theta) * scale_b, 1.0)) {
          converged = true;
          break;
        }
      }
    }
    if (!converged) throw ConvergenceFailure("inverse iteration did not converge");

    // deterministic sign: first significant component positive
    double amax = sup_norm(x);
    for (double xi : x) {
      if (std::fabs(xi) > 1e-8 * amax) {
        if (xi < 0.0)
          for (double& v : x) v = -v;
        break;
      }
    }
    pair.value = theta;
    pair.vector = std::move(x);
    out.push_back(std::move(pair));
  }
  return out;
}

/// Dense symmetric positive definite solve via Cholesky; a (row-major n*n) is
/// overwritten. Returns false if the factorization needs a non-positive
/// pivot.
inline bool cholesky_solve(std::vector<double>& a, int n, std::vector<double>& rhs) {
  for (int j = 0; j < n; ++j) {
    double d = a[static_cast<std::size_t>(j) * n + j];
    for (int kk = 0; kk < j; ++kk) {
      const double l = a[static_cast<std::size_t>(j) * n + kk];
      d -= l * l;
    }
    if (!(d > 0.0)) return false;
    const double lj = std::sqrt(d);
    a[static_cast<std::size_t>(j) * n + j] = lj;
    for (int i = j + 1; i < n; ++i) {
      double s = a[static_cast<std::size_t>(i) * n + j];
      for (int kk = 0; kk < j; ++kk)
        s -= a[static_cast<std::size_t>(i) * n + kk] * a[static_cast<std::size_t>(j) * n + kk];
      a[static_cast<std::size_t>(i) * n + j] = s / lj;
    }
  }
  // forward then backward substitution
  for (int i = 0; i < n; ++i) {
    double s = rhs[static_cast<std::size_t>(i)];
    for (int kk = 0; kk < i; ++kk) s -= a[static_cast<std::size_t>(i) * n + kk] * rhs[static_cast<std::size_t>(kk)];
    rhs[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[static_cast<std::size_t>(i)];
    for (int kk = i + 1; kk < n; ++kk) s -= a[static_cast<std::size_t>(kk) * n + i] * rhs[static_cast<std::size_t>(kk)];
    rhs[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * n + i];
  }
  return true;
}

}  // namespace azlab
