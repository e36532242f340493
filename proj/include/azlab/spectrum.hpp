#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "azlab/assembly.hpp"
#include "azlab/errors.hpp"
#include "azlab/linalg.hpp"
#include "azlab/mesh.hpp"

namespace azlab {

/// Generalized half-period pi_p = 2*pi / (p * sin(pi/p)).
inline double pi_p(double p) {
  if (!(p > 1.0)) throw BadConfig("pi_p requires p > 1");
  return 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
}

/// m-th Dirichlet eigenvalue of the 1-D p-Laplacian on (0, L):
/// lambda_m = (p-1) (m pi_p / L)^p. For p = 2 this is (m pi / L)^2.
inline double eigenvalue_1d(double p, double L, int m) {
  if (!(p > 1.0) || !(L > 0.0) || m < 1) throw BadConfig("eigenvalue_1d: need p>1, L>0, m>=1");
  return (p - 1.0) * std::pow(m * pi_p(p) / L, p);
}

/// lambda_1 <= lambda_2 <= ... realized by the closed-form ODE spectrum;
/// lambda_0 = -infinity by convention. In one dimension the full spectrum is
/// this sequence, which is the modeling assumption every report surfaces.
struct SpectrumTable {
  double p = 2.0;
  double L = 1.0;
  std::vector<double> values;  // values[m-1] = lambda_m

  double lambda(int m) const {
    if (m == 0) return -std::numeric_limits<double>::infinity();
    if (m < 0 || m > static_cast<int>(values.size()))
      throw TableTooShort("spectrum table has no entry " + std::to_string(m));
    return values[static_cast<std::size_t>(m) - 1];
  }
  int count() const { return static_cast<int>(values.size()); }
};

inline SpectrumTable make_spectrum_table(double p, double L, int count) {
  if (count < 1) throw BadConfig("spectrum table needs at least one entry");
  SpectrumTable t;
  t.p = p;
  t.L = L;
  t.values.reserve(static_cast<std::size_t>(count));
  for (int m = 1; m <= count; ++m) t.values.push_back(eigenvalue_1d(p, L, m));
  return t;
}

enum class BracketSide { strict, left_closed, right_closed };

inline double spectrum_resonance_tolerance() { return 1e-8; }

/// True iff min_m |lambda - lambda_m| / lambda_m > tol. The table must reach
/// past lambda.
inline bool check_nonresonance(const SpectrumTable& table, double lambda,
                               double tol = spectrum_resonance_tolerance()) {
  if (table.count() < 1 || table.values.back() <= lambda)
    throw TableTooShort("spectrum table does not bracket lambda");
  for (double lm : table.values)
    if (std::fabs(lambda - lm) <= tol * lm) return false;
  return true;
}

/// Position of lambda in the eigenvalue sequence.
///   strict:       largest m with lambda_m < lambda < lambda_{m+1}
///                 (Resonant if lambda sits on the spectrum within tolerance)
///   left_closed:  lambda_m <= lambda < lambda_{m+1}
///   right_closed: lambda_m < lambda <= lambda_{m+1}
/// lambda_0 = -infinity makes m = 0 valid for lambda below lambda_1.
inline int locate_m_infinity(const SpectrumTable& table, double lambda, BracketSide side,
                             double tol = spectrum_resonance_tolerance()) {
  if (table.count() < 1 || table.values.back() <= lambda)
    throw TableTooShort("spectrum table does not bracket lambda");
  int hit = 0;  // index of the table value lambda coincides with, if any
  for (int m = 1; m <= table.count(); ++m) {
    if (std::fabs(lambda - table.lambda(m)) <= tol * table.lambda(m)) {
      hit = m;
      break;
    }
  }
  if (hit > 0) {
    switch (side) {
      case BracketSide::strict:
        throw Resonant("lambda coincides with lambda_" + std::to_string(hit));
      case BracketSide::left_closed:
        return hit;
      case BracketSide::right_closed:
        return hit - 1;
    }
  }
  int m = 0;
  while (m < table.count() && table.lambda(m + 1) < lambda) ++m;
  return m;
}

/// Inertia of the form matrix A - M (Sylvester's law via LDL^T). Zeros are
/// counted inside an absolute band of 1e-10 times the largest entry.
inline Inertia generalized_inertia(const AssembledQuadratic& q) {
  const Tridiag k = q.form();
  const double tol = 1e-10 * std::max(k.max_abs(), 1e-300);
  return ldlt_inertia(k, tol);
}

struct GeneralizedEigenPair {
  double value = 0.0;
  DiscreteField field;
};

/// The k algebraically smallest eigenpairs of (A - M) v = theta B v with B
/// the plain mass matrix, B-orthonormal, deterministic sign. When q carries a
/// degenerate-set reduction the pencil is solved in the reduced unknowns and
/// the fields are expanded back to nodal values.
inline std::vector<GeneralizedEigenPair> lowest_eigenpairs(const AssembledQuadratic& q, int k) {
  Tridiag B = plain_mass(*q.mesh);
  if (q.reduced) {
    // congruence-restrict the plain mass onto the reduced unknowns
    const int n = q.mesh->interior_count();
    Tridiag Br = Tridiag::zeros(q.dim());
    for (int e = 0; e < q.mesh->element_count(); ++e) {
      const double h = q.mesh->h(e);
      const int left = e - 1;   // interior index of left node, -1 at boundary
      const int right = e;      // interior index of right node, n at boundary
      const int dl = (left >= 0) ? q.dof_of_node[static_cast<std::size_t>(left)] : -1;
      const int dr = (right < n) ? q.dof_of_node[static_cast<std::size_t>(right)] : -1;
      if (dl >= 0) Br.diag[static_cast<std::size_t>(dl)] += h / 3.0;
      if (dr >= 0) Br.diag[static_cast<std::size_t>(dr)] += h / 3.0;
      if (dl >= 0 && dr >= 0) {
        if (dl == dr) {
          Br.diag[static_cast<std::size_t>(dl)] += 2.0 * (h / 6.0);
        } else {
          Br.off[static_cast<std::size_t>(std::min(dl, dr))] += h / 6.0;
        }
      }
    }
    B = Br;
  }
  const auto pairs = pencil_lowest_eigenpairs(q.form(), B, k);
  std::vector<GeneralizedEigenPair> out;
  out.reserve(pairs.size());
  for (const auto& pr : pairs) {
    GeneralizedEigenPair gp;
    gp.value = pr.value;
    gp.field = DiscreteField(q.mesh, q.expand(pr.vector));
    out.push_back(std::move(gp));
  }
  return out;
}

}  // namespace azlab
