#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "azlab/assembly.hpp"
#include "azlab/energy.hpp"
#include "azlab/errors.hpp"
#include "azlab/mesh.hpp"

namespace azlab {

/// First-order state of the flux formulation: u' is recovered from the flux
/// w = psi'(u') by monotone inversion, which keeps the system regular where
/// u' = 0 for p != 2.
struct IVPState {
  double x = 0.0;
  double u = 0.0;
  double w = 0.0;
};

/// Invert the flux map psi'(xi) = w. Closed form for kappa = 0, safeguarded
/// Newton otherwise; the recovery residual |psi'(xi) - w| stays below
/// 1e-12 * (1 + |w|).
inline double flux_inverse(const PrincipalPart& pp, double w) {
  if (w == 0.0) return 0.0;
  if (pp.kappa == 0.0) {
    const double mag = std::pow(std::fabs(w), 1.0 / (pp.p - 1.0));
    return w > 0.0 ? mag : -mag;
  }
  const double target = std::fabs(w);
  double lo = 0.0;
  double hi = std::max({std::pow(target, 1.0 / (pp.p - 1.0)),
                        target / std::pow(pp.kappa, pp.p - 2.0), 1.0});
  int guard = 0;
  while (psi_grad(pp, hi) < target) {
    hi *= 2.0;
    if (++guard > 400) throw ConvergenceFailure("flux inversion bracket failed");
  }
  double xi = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double r = psi_grad(pp, xi) - target;
    if (std::fabs(r) <= 1e-13 * (1.0 + target)) break;
    if (r > 0.0)
      hi = xi;
    else
      lo = xi;
    const double slope = psi_hess(pp, xi);
    double next = xi - r / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    xi = next;
  }
  return w > 0.0 ? xi : -xi;
}

struct IvpResult {
  IVPState end;
  int sign_changes = 0;  // interior sign changes of u at the step nodes
};

struct IvpOptions {
  int steps = 10000;
  double blowup = 1e8;
};

namespace detail {

struct IvpRhs {
  const EnergySpec& spec;
  void operator()(const IVPState& s, double& du, double& dw) const {
    du = flux_inverse(spec.principal, s.w);
    dw = -g_value(spec.g, s.u);
  }
};

}  // namespace detail

/// Classical 4th-order integration of (u' = psi'^{-1}(w), w' = -g(u)) from
/// (0, 0, psi'(slope0)). sample_xs, if given, must be increasing in [0, L];
/// the trajectory value of u is linearly interpolated onto them.
inline IvpResult integrate_ivp(const EnergySpec& spec, double slope0, double L,
                               const IvpOptions& opts = {},
                               const std::vector<double>* sample_xs = nullptr,
                               std::vector<double>* sample_u = nullptr) {
  if (opts.steps < 100) throw BadConfig("integrate_ivp needs at least 100 steps");
  const detail::IvpRhs rhs{spec};
  const double h = L / opts.steps;
  IVPState s;
  s.w = psi_grad(spec.principal, slope0);

  int sign_changes = 0;
  int last_sign = 0;
  std::size_t sample_pos = 0;
  if (sample_u && sample_xs) sample_u->assign(sample_xs->size(), 0.0);
  double prev_x = 0.0, prev_u = 0.0;

  auto emit_samples = [&](double x0, double u0, double x1, double u1) {
    if (!sample_xs || !sample_u) return;
    while (sample_pos < sample_xs->size() && (*sample_xs)[sample_pos] <= x1 + 1e-15 * L) {
      const double xs = (*sample_xs)[sample_pos];
      const double t = (x1 > x0) ? (xs - x0) / (x1 - x0) : 0.0;
      (*sample_u)[sample_pos] = u0 + t * (u1 - u0);
      ++sample_pos;
    }
  };
  emit_samples(0.0, 0.0, 0.0, 0.0);

  for (int k = 0; k < opts.steps; ++k) {
    prev_x = s.x;
    prev_u = s.u;
    double du1, dw1, du2, dw2, du3, dw3, du4, dw4;
    rhs(s, du1, dw1);
    IVPState t2{s.x + 0.5 * h, s.u + 0.5 * h * du1, s.w + 0.5 * h * dw1};
    rhs(t2, du2, dw2);
    IVPState t3{s.x + 0.5 * h, s.u + 0.5 * h * du2, s.w + 0.5 * h * dw2};
    rhs(t3, du3, dw3);
    IVPState t4{s.x + h, s.u + h * du3, s.w + h * dw3};
    rhs(t4, du4, dw4);
    s.u += h / 6.0 * (du1 + 2.0 * du2 + 2.0 * du3 + du4);
    s.w += h / 6.0 * (dw1 + 2.0 * dw2 + 2.0 * dw3 + dw4);
    s.x = (k + 1) * h;
    if (std::fabs(s.u) > opts.blowup) throw BlowUp("IVP trajectory exceeded the blow-up guard");
    emit_samples(prev_x, prev_u, s.x, s.u);
    const int sign = (s.u > 0.0) ? 1 : (s.u < 0.0 ? -1 : 0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign && k + 1 < opts.steps) ++sign_changes;
      last_sign = sign;
    }
  }
  IvpResult r;
  r.end = s;
  r.sign_changes = sign_changes;
  return r;
}

/// First integral of the autonomous equation: H = u' psi'(u') - psi(u') + G(u).
inline double hamiltonian(const EnergySpec& spec, const IVPState& s) {
  const double up = flux_inverse(spec.principal, s.w);
  return up * s.w - psi_value(spec.principal, up) + g_antideriv(spec.g, s.u);
}

struct ShootOptions {
  int steps = 10000;
  double rel_tol = 1e-12;
};

/// m-th Dirichlet eigenvalue of the 1-D p-Laplacian by shooting: bisects the
/// lambda at which the m-th zero of the slope-1 trajectory crosses x = L.
/// The result is slope-independent by p-homogeneity, which is re-asserted by
/// bracketing with slope 2.
inline double shoot_eigenvalue(double p, double L, int m, const ShootOptions& opts = {}) {
  if (!(p > 1.0) || !(L > 0.0) || m < 1) throw BadConfig("shoot_eigenvalue: need p>1, L>0, m>=1");
  auto count_at = [&](double lambda, double slope0) {
    // count over interior nodes plus the endpoint
    Nonlinearity gl;
    CustomG hook;
    hook.g = [lambda, p](double s) {
      return s == 0.0 ? 0.0 : lambda * std::pow(std::fabs(s), p - 2.0) * s;
    };
    hook.G = [lambda, p](double s) { return lambda / p * std::pow(std::fabs(s), p); };
    gl = custom_nonlinearity(p, hook);
    EnergySpec spec(PrincipalPart(p, 0.0), gl);
    IvpOptions io;
    io.steps = opts.steps;
    const IvpResult r = integrate_ivp(spec, slope0, L, io);
    int count = r.sign_changes;
    // fold in the endpoint as a (closed-interval) node
    // integrate_ivp counts strict interior changes; the endpoint adds one if
    // the final value flipped sign against the last interior sign.
    // Recover the last interior sign from the endpoint and change parity:
    // trajectory starts positive (slope0 > 0), so sign at the end of k
    // changes is (+1)(-1)^k.
    const int interior_sign = (slope0 > 0.0 ? 1 : -1) * ((count % 2 == 0) ? 1 : -1);
    if (r.end.u != 0.0 && ((r.end.u > 0.0) ? 1 : -1) != interior_sign) ++count;
    return count;
  };

  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (count_at(hi, 1.0) < m) {
    hi *= 2.0;
    if (++guard > 200) throw BracketFailure("eigenvalue shooting bracket failed");
  }
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= opts.rel_tol * hi) break;
    const double mid = 0.5 * (lo + hi);
    if (count_at(mid, 1.0) >= m)
      hi = mid;
    else
      lo = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  // p-homogeneity check with a different shooting slope
  const double band = 1e-6;
  if (!(count_at(lambda * (1.0 - band), 2.0) <= m - 1 &&
        count_at(lambda * (1.0 + band), 2.0) >= m))
    throw BracketFailure("eigenvalue is not slope-independent within tolerance");
  return lambda;
}

struct ShotSolution {
  DiscreteField field;
  double slope0 = 0.0;
  double endpoint_value = 0.0;
  int sign_changes = 0;
  double fem_residual_sup = 0.0;
};

/// Boundary-value shooting: bisection on the initial slope inside a bracket
/// whose endpoint values u(L) have opposite signs. Returns the solution
/// sampled onto the mesh, or nothing if the bracket carries no sign change
/// or the node count does not match.
inline std::optional<ShotSolution> shoot_bvp(const EnergySpec& spec, double slope_lo,
                                             double slope_hi, int nodes_wanted,
                                             const MeshPtr& mesh, const IvpOptions& opts = {}) {
  const double L = mesh->length();
  auto endpoint = [&](double s) -> double {
    try {
      return integrate_ivp(spec, s, L, opts).end.u;
    } catch (const BlowUp&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  double elo = endpoint(slope_lo);
  const double ehi = endpoint(slope_hi);
  if (!std::isfinite(elo) || !std::isfinite(ehi)) return std::nullopt;
  if (elo == 0.0 || ehi == 0.0) {
    // degenerate luck: accept the exact endpoint as converged below
  } else if ((elo > 0.0) == (ehi > 0.0)) {
    return std::nullopt;
  }
  double lo = slope_lo, hi = slope_hi;
  for (int it = 0; it < 200; ++it) {
    if (std::fabs(hi - lo) <= 1e-14 * std::max({std::fabs(lo), std::fabs(hi), 1.0})) break;
    const double mid = 0.5 * (lo + hi);
    const double em = endpoint(mid);
    if (!std::isfinite(em)) return std::nullopt;
    if (em == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((em > 0.0) == (elo > 0.0)) {
      lo = mid;
      elo = em;
    } else {
      hi = mid;
    }
  }
  const double slope = 0.5 * (lo + hi);
  std::vector<double> xs(mesh->nodes().begin() + 1, mesh->nodes().end() - 1);
  std::vector<double> us;
  IvpResult r;
  try {
    r = integrate_ivp(spec, slope, L, opts, &xs, &us);
  } catch (const BlowUp&) {
    return std::nullopt;
  }
  ShotSolution sol;
  sol.field = DiscreteField(mesh, std::move(us));
  sol.slope0 = slope;
  sol.endpoint_value = r.end.u;
  sol.sign_changes = r.sign_changes;
  sol.fem_residual_sup = sup_norm(assemble_gradient(spec, sol.field));
  if (sol.sign_changes != nodes_wanted) return std::nullopt;
  return sol;
}

}  // namespace azlab
