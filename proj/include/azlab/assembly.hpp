#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "azlab/energy.hpp"
#include "azlab/errors.hpp"
#include "azlab/linalg.hpp"
#include "azlab/mesh.hpp"

namespace azlab {

/// The problem data: f(u) = int psi_{p,kappa}(u') - int G(u) on (0, L).
struct EnergySpec {
  PrincipalPart principal;
  Nonlinearity g;

  EnergySpec() = default;
  EnergySpec(PrincipalPart pp, Nonlinearity nl) : principal(pp), g(std::move(nl)) {
    if (g.family != GrowthFamily::custom && g.p != principal.p)
      throw BadConfig("nonlinearity growth exponent must match the principal part");
  }

  double p() const { return principal.p; }
  double kappa() const { return principal.kappa; }
};

namespace quadrature {
// 2-point Gauss on the reference element [0,1].
inline constexpr std::array<double, 2> points = {0.5 - 0.28867513459481287, 0.5 + 0.28867513459481287};
inline constexpr std::array<double, 2> weights = {0.5, 0.5};
}  // namespace quadrature

/// Energy with elementwise-exact principal part (slopes are constant per
/// element) and 2-point Gauss on the G term.
inline double assemble_energy(const EnergySpec& spec, const DiscreteField& u) {
  double acc = 0.0;
  const int ne = u.mesh->element_count();
  for (int e = 0; e < ne; ++e) {
    const double h = u.mesh->h(e);
    const double ul = u.value_at_node(e);
    const double ur = u.value_at_node(e + 1);
    acc += h * psi_value(spec.principal, (ur - ul) / h);
    for (int q = 0; q < 2; ++q) {
      const double t = quadrature::points[static_cast<std::size_t>(q)];
      acc -= h * quadrature::weights[static_cast<std::size_t>(q)] *
             g_antideriv(spec.g, ul * (1.0 - t) + ur * t);
    }
  }
  return acc;
}

/// Exact gradient of assemble_energy with respect to the interior nodal
/// values: flux differences minus the quadrature of g(u) against the hats.
inline std::vector<double> assemble_gradient(const EnergySpec& spec, const DiscreteField& u) {
  const int n = u.size();
  std::vector<double> grad(static_cast<std::size_t>(n), 0.0);
  const int ne = u.mesh->element_count();
  for (int e = 0; e < ne; ++e) {
    const double h = u.mesh->h(e);
    const double ul = u.value_at_node(e);
    const double ur = u.value_at_node(e + 1);
    const double flux = psi_grad(spec.principal, (ur - ul) / h);
    // d/du_left (h psi(slope)) = -flux, d/du_right = +flux
    if (e >= 1) grad[static_cast<std::size_t>(e) - 1] -= flux;
    if (e + 1 <= n) grad[static_cast<std::size_t>(e)] += flux;
    for (int q = 0; q < 2; ++q) {
      const double t = quadrature::points[static_cast<std::size_t>(q)];
      const double gv = g_value(spec.g, ul * (1.0 - t) + ur * t);
      const double w = h * quadrature::weights[static_cast<std::size_t>(q)];
      if (e >= 1) grad[static_cast<std::size_t>(e) - 1] -= w * gv * (1.0 - t);
      if (e + 1 <= n) grad[static_cast<std::size_t>(e)] -= w * gv * t;
    }
  }
  return grad;
}

/// Discretized quadratic form Q(v) = v^T A v - v^T M v. A carries the
/// principal-part curvature weights, M the g'(u) mass weights. When a
/// degenerate-set constraint has been applied (kappa = 0, p < 2), dof_of_node
/// maps interior nodes onto the reduced unknowns (-1 = pinned to zero) and
/// the tridiagonal blocks live in the reduced numbering.
struct AssembledQuadratic {
  MeshPtr mesh;
  Tridiag A;
  Tridiag M;
  bool reduced = false;
  std::vector<int> dof_of_node;  // size n when reduced

  int dim() const { return A.dim(); }

  Tridiag form() const { return tridiag_sum(A, -1.0, M); }

  // Expand a reduced coefficient vector back to interior nodal values.
  std::vector<double> expand(const std::vector<double>& x) const {
    if (!reduced) return x;
    std::vector<double> full(dof_of_node.size(), 0.0);
    for (std::size_t i = 0; i < dof_of_node.size(); ++i)
      if (dof_of_node[i] >= 0) full[i] = x[static_cast<std::size_t>(dof_of_node[i])];
    return full;
  }
};

namespace detail {

// Element contributions of a weighted mass term c(x) phi_i phi_j by 2-point
// Gauss, accumulated onto the interior tridiagonal (diag, off).
template <typename Weight>
void accumulate_mass(const Mesh1D& mesh, Weight&& c_at, Tridiag& m) {
  const int n = mesh.interior_count();
  const int ne = mesh.element_count();
  for (int e = 0; e < ne; ++e) {
    const double h = mesh.h(e);
    for (int q = 0; q < 2; ++q) {
      const double t = quadrature::points[static_cast<std::size_t>(q)];
      const double w = h * quadrature::weights[static_cast<std::size_t>(q)];
      const double c = c_at(e, t);
      const double pl = 1.0 - t, pr = t;
      if (e >= 1) m.diag[static_cast<std::size_t>(e) - 1] += w * c * pl * pl;
      if (e + 1 <= n) m.diag[static_cast<std::size_t>(e)] += w * c * pr * pr;
      if (e >= 1 && e + 1 <= n) m.off[static_cast<std::size_t>(e) - 1] += w * c * pl * pr;
    }
  }
}

}  // namespace detail

/// Hessian of the discrete energy at u. Requires nonzero element slopes when
/// kappa = 0 and p < 2; otherwise throws DegenerateElement with the offending
/// element list (callers route through the degenerate-set machinery).
inline AssembledQuadratic assemble_hessian(const EnergySpec& spec, const DiscreteField& u) {
  const int n = u.size();
  const Mesh1D& mesh = *u.mesh;
  AssembledQuadratic q;
  q.mesh = u.mesh;
  q.A = Tridiag::zeros(n);
  q.M = Tridiag::zeros(n);

  if (spec.principal.degenerate_at_zero_slope()) {
    std::vector<int> bad;
    for (int e = 0; e < mesh.element_count(); ++e)
      if (u.slope(e) == 0.0) bad.push_back(e);
    if (!bad.empty())
      throw DegenerateElement("psi'' undefined on elements with zero slope (kappa=0, p<2)",
                              std::move(bad));
  }

  for (int e = 0; e < mesh.element_count(); ++e) {
    const double h = mesh.h(e);
    const double w = psi_hess(spec.principal, u.slope(e)) / h;
    if (e >= 1) q.A.diag[static_cast<std::size_t>(e) - 1] += w;
    if (e + 1 <= n) q.A.diag[static_cast<std::size_t>(e)] += w;
    if (e >= 1 && e + 1 <= n) q.A.off[static_cast<std::size_t>(e) - 1] -= w;
  }
  detail::accumulate_mass(mesh,
                          [&](int e, double t) {
                            const double s =
                                u.value_at_node(e) * (1.0 - t) + u.value_at_node(e + 1) * t;
                            return g_prime(spec.g, s);
                          },
                          q.M);
  return q;
}

/// Plain (unweighted, consistent) P1 mass matrix over the interior nodes:
/// the discrete L^2 Gram matrix.
inline Tridiag plain_mass(const Mesh1D& mesh) {
  const int n = mesh.interior_count();
  Tridiag m = Tridiag::zeros(n);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double h = mesh.h(e);
    if (e >= 1) m.diag[static_cast<std::size_t>(e) - 1] += h / 3.0;
    if (e + 1 <= n) m.diag[static_cast<std::size_t>(e)] += h / 3.0;
    if (e >= 1 && e + 1 <= n) m.off[static_cast<std::size_t>(e) - 1] += h / 6.0;
  }
  return m;
}

inline double l2_dot(const Mesh1D& mesh, const std::vector<double>& a, const std::vector<double>& b) {
  return dot(tridiag_mul(plain_mass(mesh), a), b);
}

inline double l2_dot(const DiscreteField& a, const DiscreteField& b) {
  check_same_mesh(a, b);
  return l2_dot(*a.mesh, a.values, b.values);
}

struct FieldNorms {
  double w1p_semi = 0.0;  // (sum_e h_e |slope_e|^p)^(1/p)
  double lp = 0.0;        // element-exact L^p norm of the P1 function
  double sup = 0.0;       // max |nodal value|
};

namespace detail {

// Exact integral of |a + (b-a) t|^p over t in [0,1], scaled by h.
inline double lp_element_integral(double a, double b, double h, double p) {
  if (std::fabs(b - a) <= 1e-12 * (std::fabs(a) + std::fabs(b)) || a == b) {
    const double m = 0.5 * (a + b);
    return h * std::pow(std::fabs(m), p);
  }
  const double pa = std::pow(std::fabs(a), p) * a;
  const double pb = std::pow(std::fabs(b), p) * b;
  return h * (pb - pa) / ((p + 1.0) * (b - a));
}

}  // namespace detail

inline FieldNorms norms(const DiscreteField& u, double p) {
  FieldNorms r;
  double semi = 0.0, lp = 0.0;
  for (int e = 0; e < u.mesh->element_count(); ++e) {
    const double h = u.mesh->h(e);
    semi += h * std::pow(std::fabs(u.slope(e)), p);
    lp += detail::lp_element_integral(u.value_at_node(e), u.value_at_node(e + 1), h, p);
  }
  r.w1p_semi = std::pow(semi, 1.0 / p);
  r.lp = std::pow(lp, 1.0 / p);
  r.sup = u.sup_norm();
  return r;
}

inline double w1p_distance(const DiscreteField& a, const DiscreteField& b, double p) {
  return norms(axpy(-1.0, b, a), p).w1p_semi;
}

}  // namespace azlab
