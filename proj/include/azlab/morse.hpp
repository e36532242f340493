#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "azlab/assembly.hpp"
#include "azlab/errors.hpp"
#include "azlab/mesh.hpp"
#include "azlab/spectrum.hpp"

namespace azlab {

enum class Regime { kappa_positive, kappa_zero_subquadratic, kappa_zero_superquadratic };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::kappa_positive: return "kappaPositive";
    case Regime::kappa_zero_subquadratic: return "kappaZeroSubquadratic";
    case Regime::kappa_zero_superquadratic: return "kappaZeroSuperquadratic";
  }
  return "?";
}

inline Regime classify_regime(const PrincipalPart& pp) {
  // p = 2 behaves like kappa > 0 for any kappa (the kappa value is
  // irrelevant there).
  if (pp.p == 2.0 || pp.kappa > 0.0) return Regime::kappa_positive;
  return pp.p < 2.0 ? Regime::kappa_zero_subquadratic : Regime::kappa_zero_superquadratic;
}

/// Elements where the slope of u0 sits inside the zero band: the discrete
/// trace of Z_{u0} = {grad u0 = 0}.
struct DegenerateSet {
  std::vector<int> elements;
  double tol_z = 1e-8;

  bool empty() const { return elements.empty(); }
  bool all(const Mesh1D& mesh) const {
    return static_cast<int>(elements.size()) == mesh.element_count();
  }
};

inline DegenerateSet detect_degenerate_set(const DiscreteField& u0, double tol_z = 1e-8) {
  DegenerateSet z;
  z.tol_z = tol_z;
  double max_slope = 0.0;
  for (int e = 0; e < u0.mesh->element_count(); ++e)
    max_slope = std::max(max_slope, std::fabs(u0.slope(e)));
  const double band = tol_z * (1.0 + max_slope);
  for (int e = 0; e < u0.mesh->element_count(); ++e)
    if (std::fabs(u0.slope(e)) <= band) z.elements.push_back(e);
  return z;
}

/// A possibly-infinite Morse index. Infinite values are symbolic.
struct MorseIndex {
  bool infinite = false;
  int value = 0;

  static MorseIndex finite(int v) { return {false, v}; }
  static MorseIndex inf() { return {true, 0}; }

  bool operator==(const MorseIndex& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
};

inline std::string to_string(const MorseIndex& i) {
  return i.infinite ? "+inf" : std::to_string(i.value);
}

struct MorseData {
  MorseIndex m;
  MorseIndex m_star;
  int kernel_dim = 0;  // meaningful only when both indices are finite
  Regime regime = Regime::kappa_positive;

  bool finite() const { return !m.infinite && !m_star.infinite; }
};

struct QAssembly {
  AssembledQuadratic q;
  DegenerateSet degenerate;
  Regime regime = Regime::kappa_positive;
};

namespace detail {

// Merge nodes across degenerate elements (slope constrained to zero there),
// pinning every class that touches a boundary node. Returns the map
// interior node -> reduced dof (-1 = pinned) and the reduced dimension.
inline int build_constraint_map(const Mesh1D& mesh, const DegenerateSet& z,
                                std::vector<int>& dof_of_node) {
  const int n = mesh.interior_count();
  std::vector<char> degenerate(static_cast<std::size_t>(mesh.element_count()), 0);
  for (int e : z.elements) degenerate[static_cast<std::size_t>(e)] = 1;

  // class id per node 0..n+1, built left to right
  std::vector<int> cls(static_cast<std::size_t>(n) + 2, 0);
  int classes = 1;
  for (int i = 1; i <= n + 1; ++i)
    cls[static_cast<std::size_t>(i)] =
        degenerate[static_cast<std::size_t>(i) - 1] ? cls[static_cast<std::size_t>(i) - 1] : classes++;

  std::vector<char> pinned(static_cast<std::size_t>(classes), 0);
  pinned[static_cast<std::size_t>(cls.front())] = 1;
  pinned[static_cast<std::size_t>(cls.back())] = 1;

  std::vector<int> reduced(static_cast<std::size_t>(classes), -1);
  int dim = 0;
  for (int c = 0; c < classes; ++c)
    if (!pinned[static_cast<std::size_t>(c)]) reduced[static_cast<std::size_t>(c)] = dim++;

  dof_of_node.assign(static_cast<std::size_t>(n), -1);
  for (int i = 1; i <= n; ++i)
    dof_of_node[static_cast<std::size_t>(i) - 1] = reduced[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])];
  return dim;
}

}  // namespace detail

/// The quadratic form Q_{u0}(v) = int psi''(u0')[v']^2 - int g'(u0) v^2 at a
/// verified critical point, together with the degenerate set and the regime.
///   kappa_positive:       full form on all interior nodes
///   kappa_zero_sub:       form restricted to the discrete X_{u0}: slopes on
///                         degenerate elements constrained to zero, the
///                         curvature integral taken off the degenerate set
///   kappa_zero_super:     curvature weight 0 on degenerate elements
inline QAssembly assemble_Q(const EnergySpec& spec, const DiscreteField& u0,
                            double tol_z = 1e-8, double residual_tol = 1e-8) {
  if (sup_norm(assemble_gradient(spec, u0)) > residual_tol)
    throw NotCritical("assemble_Q requires a critical point (residual above tolerance)");

  QAssembly out;
  out.regime = classify_regime(spec.principal);
  out.degenerate = detect_degenerate_set(u0, tol_z);
  const Mesh1D& mesh = *u0.mesh;
  const int n = mesh.interior_count();

  if (out.regime != Regime::kappa_zero_subquadratic) {
    AssembledQuadratic q;
    q.mesh = u0.mesh;
    q.A = Tridiag::zeros(n);
    q.M = Tridiag::zeros(n);
    std::vector<char> deg(static_cast<std::size_t>(mesh.element_count()), 0);
    if (out.regime == Regime::kappa_zero_superquadratic)
      for (int e : out.degenerate.elements) deg[static_cast<std::size_t>(e)] = 1;
    for (int e = 0; e < mesh.element_count(); ++e) {
      const double h = mesh.h(e);
      const double w =
          deg[static_cast<std::size_t>(e)] ? 0.0 : psi_hess(spec.principal, u0.slope(e)) / h;
      if (e >= 1) q.A.diag[static_cast<std::size_t>(e) - 1] += w;
      if (e + 1 <= n) q.A.diag[static_cast<std::size_t>(e)] += w;
      if (e >= 1 && e + 1 <= n) q.A.off[static_cast<std::size_t>(e) - 1] -= w;
    }
    detail::accumulate_mass(mesh,
                            [&](int e, double t) {
                              const double s =
                                  u0.value_at_node(e) * (1.0 - t) + u0.value_at_node(e + 1) * t;
                              return g_prime(spec.g, s);
                            },
                            q.M);
    out.q = std::move(q);
    return out;
  }

  // kappa = 0, p < 2: assemble on the constrained space X_{u0}
  AssembledQuadratic q;
  q.mesh = u0.mesh;
  q.reduced = true;
  const int dim = detail::build_constraint_map(mesh, out.degenerate, q.dof_of_node);
  q.A = Tridiag::zeros(dim);
  q.M = Tridiag::zeros(dim);
  std::vector<char> deg(static_cast<std::size_t>(mesh.element_count()), 0);
  for (int e : out.degenerate.elements) deg[static_cast<std::size_t>(e)] = 1;

  auto dof_at = [&](int node) -> int {
    if (node <= 0 || node >= n + 1) return -1;
    return q.dof_of_node[static_cast<std::size_t>(node) - 1];
  };

  for (int e = 0; e < mesh.element_count(); ++e) {
    if (deg[static_cast<std::size_t>(e)]) continue;  // curvature integral off Z_{u0}
    const double h = mesh.h(e);
    const double w = psi_hess(spec.principal, u0.slope(e)) / h;
    const int dl = dof_at(e), dr = dof_at(e + 1);
    if (dl >= 0) q.A.diag[static_cast<std::size_t>(dl)] += w;
    if (dr >= 0) q.A.diag[static_cast<std::size_t>(dr)] += w;
    if (dl >= 0 && dr >= 0) q.A.off[static_cast<std::size_t>(std::min(dl, dr))] -= w;
  }
  // the v^2 term integrates over all of Omega
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double h = mesh.h(e);
    const int dl = dof_at(e), dr = dof_at(e + 1);
    for (int qq = 0; qq < 2; ++qq) {
      const double t = quadrature::points[static_cast<std::size_t>(qq)];
      const double w = h * quadrature::weights[static_cast<std::size_t>(qq)];
      const double s = u0.value_at_node(e) * (1.0 - t) + u0.value_at_node(e + 1) * t;
      const double c = g_prime(spec.g, s);
      const double pl = 1.0 - t, pr = t;
      if (dl >= 0) q.M.diag[static_cast<std::size_t>(dl)] += w * c * pl * pl;
      if (dr >= 0) q.M.diag[static_cast<std::size_t>(dr)] += w * c * pr * pr;
      if (dl >= 0 && dr >= 0) {
        if (dl == dr)
          q.M.diag[static_cast<std::size_t>(dl)] += 2.0 * w * c * pl * pr;
        else
          q.M.off[static_cast<std::size_t>(std::min(dl, dr))] += w * c * pl * pr;
      }
    }
  }
  out.q = std::move(q);
  return out;
}

namespace detail {

inline Inertia inertia_with_retry(const AssembledQuadratic& q) {
  Tridiag k = q.form();
  const double scale = std::max(k.max_abs(), 1e-300);
  for (int attempt = 0;; ++attempt) {
    try {
      return ldlt_inertia(k, 1e-10 * scale);
    } catch (const FactorizationBreakdown&) {
      if (attempt >= 3) throw;
      // nudge the diagonal off the tolerance boundary and retry
      for (std::size_t i = 0; i < k.diag.size(); ++i)
        k.diag[i] += ((i % 2 == 0) ? 1.0 : -1.0) * 3e-13 * scale * (attempt + 1);
    }
  }
}

}  // namespace detail

/// Morse index pair (m, m*) of Q_{u0}. Finite regimes count inertia; the
/// kappa = 0, p > 2 regime at u0 = 0 follows the closed trichotomy in g'(0).
inline MorseData morse_indices(const QAssembly& qa, const EnergySpec& spec,
                               const DiscreteField& u0) {
  MorseData md;
  md.regime = qa.regime;
  if (qa.regime == Regime::kappa_zero_superquadratic) {
    if (u0.sup_norm() == 0.0) {
      const double c = g_prime(spec.g, 0.0);
      if (c < 0.0) {
        md.m = MorseIndex::finite(0);
        md.m_star = MorseIndex::finite(0);
      } else if (c == 0.0) {
        md.m = MorseIndex::finite(0);
        md.m_star = MorseIndex::inf();
      } else {
        md.m = MorseIndex::inf();
        md.m_star = MorseIndex::inf();
      }
      return md;
    }
    // Nontrivial u0 with degenerate elements: directions supported where the
    // curvature weight vanishes and g'(u0) > 0 make Q negative on subspaces
    // of any dimension in the continuum, so the indices are infinite there.
    for (int e : qa.degenerate.elements) {
      const double mid = 0.5 * (u0.value_at_node(e) + u0.value_at_node(e + 1));
      if (g_prime(spec.g, mid) > 0.0) {
        md.m = MorseIndex::inf();
        md.m_star = MorseIndex::inf();
        return md;
      }
    }
  }
  const Inertia in = detail::inertia_with_retry(qa.q);
  md.m = MorseIndex::finite(in.negatives);
  md.m_star = MorseIndex::finite(in.negatives + in.zeros);
  md.kernel_dim = in.zeros;
  return md;
}

struct GroupStatement {
  std::string theorem;     // e.g. "T2.2"
  std::string degrees;     // degree range the statement covers
  std::string conclusion;  // what holds there
};

struct CriticalGroupVerdict {
  std::vector<GroupStatement> statements;
  std::string note;  // nonempty when no theorem applies
};

/// Emit exactly the degree-wise critical-group statements the theorems
/// justify for this Morse data; nothing beyond them.
inline CriticalGroupVerdict classify_critical_groups(const MorseData& md, bool isolated,
                                                     bool is_zero, const EnergySpec& spec) {
  (void)spec;
  CriticalGroupVerdict v;
  const std::string ms = to_string(md.m);
  const std::string mss = to_string(md.m_star);

  switch (md.regime) {
    case Regime::kappa_positive: {
      v.statements.push_back({"T2.1", "m < " + ms + " or m > " + mss, "C_m = 0"});
      if (md.finite() && md.m == md.m_star) {
        v.statements.push_back({"T2.2", "m = " + ms, "C_m isomorphic to G"});
        v.statements.push_back({"T2.2", "m != " + ms, "C_m = 0"});
      } else if (isolated && md.finite()) {
        v.statements.push_back(
            {"T2.3(a)", "m = " + ms, "C_m isomorphic to G, zero elsewhere (one of three)"});
        v.statements.push_back(
            {"T2.3(b)", "m = " + mss, "C_m isomorphic to G, zero elsewhere (one of three)"});
        v.statements.push_back(
            {"T2.3(c)", "m <= " + ms + " or m >= " + mss, "C_m = 0 (one of three)"});
      }
      break;
    }
    case Regime::kappa_zero_subquadratic: {
      v.statements.push_back({"T2.5", "m > " + mss, "C_m = 0"});
      if (is_zero) {
        v.statements.push_back({"T2.6", "m = 0", "C_m isomorphic to G (strict local minimum)"});
        v.statements.push_back({"T2.6", "m != 0", "C_m = 0"});
      }
      break;
    }
    case Regime::kappa_zero_superquadratic: {
      if (is_zero) {
        if (md.m.infinite && md.m_star.infinite) {
          v.statements.push_back({"T2.7", "every m", "C_m = 0"});
        } else if (!md.m.infinite && md.m_star.infinite) {
          v.statements.push_back({"T2.7", "(none)", "no degrees excluded"});
        } else {
          v.statements.push_back({"T2.7", "m < " + ms + " or m > " + mss, "C_m = 0"});
        }
      } else {
        v.note = "no theorem applies (kappa = 0, p > 2, u0 != 0)";
      }
      break;
    }
  }
  return v;
}

}  // namespace azlab
