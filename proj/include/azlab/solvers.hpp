#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "azlab/assembly.hpp"
#include "azlab/errors.hpp"
#include "azlab/linalg.hpp"
#include "azlab/mesh.hpp"
#include "azlab/morse.hpp"
#include "azlab/spectrum.hpp"

namespace azlab {

struct SolverConfig {
  double tol_residual = 1e-10;  // sup norm of the assembled gradient
  int max_iter = 200;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double deflation_shift = 1.0;     // the "1 +" in the deflation factor
  double deflation_exponent = 2.0;  // power of the inverse distance
  double distinct_tol = 1e-6;       // pairwise W^{1,p} distance for distinctness
  std::uint64_t rng_seed = 1;
};

struct CriticalPointRecord {
  DiscreteField field;
  double energy = 0.0;
  double residual_sup = 0.0;
  int iterations = 0;
  double initial_slope = 0.0;  // slope on the first element; shooting cross-checks start here
  std::optional<MorseData> morse;
};

enum class SolveStatus { converged, max_iter_exceeded, singular_hessian, path_collapse };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter_exceeded: return "maxIterExceeded";
    case SolveStatus::singular_hessian: return "singularHessian";
    case SolveStatus::path_collapse: return "pathCollapse";
  }
  return "?";
}

struct SolveOutcome {
  SolveStatus status = SolveStatus::max_iter_exceeded;
  CriticalPointRecord record;  // valid when status == converged

  bool ok() const { return status == SolveStatus::converged; }
};

/// Hessian for optimization purposes: in the kappa = 0, p < 2 regime the
/// element curvature is evaluated at max(|slope|, eps_reg) with
/// eps_reg = 1e-8 (1 + max slope), so assembly never hits the degenerate
/// point. Only solvers use this; Morse analysis keeps the honest form.
inline AssembledQuadratic assemble_hessian_regularized(const EnergySpec& spec,
                                                       const DiscreteField& u) {
  if (!spec.principal.degenerate_at_zero_slope()) return assemble_hessian(spec, u);
  const Mesh1D& mesh = *u.mesh;
  const int n = u.size();
  double max_slope = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e)
    max_slope = std::max(max_slope, std::fabs(u.slope(e)));
  const double eps_reg = 1e-8 * (1.0 + max_slope);

  AssembledQuadratic q;
  q.mesh = u.mesh;
  q.A = Tridiag::zeros(n);
  q.M = Tridiag::zeros(n);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double h = mesh.h(e);
    const double s = std::max(std::fabs(u.slope(e)), eps_reg);
    const double w = psi_hess(spec.principal, s) / h;
    if (e >= 1) q.A.diag[static_cast<std::size_t>(e) - 1] += w;
    if (e + 1 <= n) q.A.diag[static_cast<std::size_t>(e)] += w;
    if (e >= 1 && e + 1 <= n) q.A.off[static_cast<std::size_t>(e) - 1] -= w;
  }
  detail::accumulate_mass(mesh,
                          [&](int e, double t) {
                            const double v =
                                u.value_at_node(e) * (1.0 - t) + u.value_at_node(e + 1) * t;
                            return g_prime(spec.g, v);
                          },
                          q.M);
  return q;
}

namespace detail {

// Shifted deflation factor prod_j (1 + ||u - u_j||^{-2}) in the W^{1,p}
// seminorm; identically 1 with no roots.
inline double deflation_factor(const EnergySpec& spec, const DiscreteField& u,
                               const std::vector<DiscreteField>& roots,
                               const SolverConfig& cfg) {
  double m = 1.0;
  for (const auto& r : roots) {
    const double d = w1p_distance(u, r, spec.p());
    if (d <= 0.0) return std::numeric_limits<double>::infinity();
    m *= cfg.deflation_shift + std::pow(d, -cfg.deflation_exponent);
  }
  return m;
}

}  // namespace detail

/// Damped Newton on the assembled gradient with an Armijo backtracking line
/// search on the (deflated) residual merit. Saddles are admissible: descent
/// of f is not required. In the kappa = 0, p < 2 regime the Hessian is
/// regularized and a pure gradient phase on f takes over if Newton stalls.
inline SolveOutcome newton_solve(const EnergySpec& spec, const DiscreteField& u0,
                                 const SolverConfig& cfg = {},
                                 const std::vector<DiscreteField>* deflated_roots = nullptr) {
  static const std::vector<DiscreteField> no_roots;
  const std::vector<DiscreteField>& roots = deflated_roots ? *deflated_roots : no_roots;
  const bool descent_fallback = spec.principal.degenerate_at_zero_slope();

  DiscreteField u = u0;
  auto residual = [&](const DiscreteField& v) { return assemble_gradient(spec, v); };
  auto merit = [&](const DiscreteField& v, const std::vector<double>& F) {
    const double m = detail::deflation_factor(spec, v, roots, cfg);
    const double nrm = std::sqrt(dot(F, F));
    return 0.5 * m * m * nrm * nrm;
  };

  std::vector<double> F = residual(u);
  auto finish = [&](int iters) {
    SolveOutcome out;
    out.status = SolveStatus::converged;
    out.record.field = u;
    out.record.energy = assemble_energy(spec, u);
    out.record.residual_sup = sup_norm(assemble_gradient(spec, u));
    out.record.iterations = iters;
    out.record.initial_slope = u.slope(0);
    return out;
  };
  if (sup_norm(F) <= cfg.tol_residual) return finish(0);

  double phi = merit(u, F);
  int stalls = 0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    AssembledQuadratic hq = assemble_hessian_regularized(spec, u);
    Tridiag H = hq.form();

    // Newton direction, with escalating Tikhonov shifts on singular solves
    std::vector<double> d(F.size());
    bool solved = false;
    double shift = 0.0;
    const double scale = std::max(H.max_abs(), 1e-300);
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::vector<double> rhs = F;
      for (double& x : rhs) x = -x;
      Tridiag Hs = H;
      if (shift > 0.0)
        for (double& x : Hs.diag) x += shift;
      if (tridiag_solve(Hs, rhs)) {
        d = std::move(rhs);
        solved = true;
        break;
      }
      shift = (shift == 0.0) ? 1e-12 * scale : shift * 100.0;
    }
    if (!solved) {
      SolveOutcome out;
      out.status = SolveStatus::singular_hessian;
      return out;
    }

    // deflated Newton step: scale by M / (M - grad(M) . d)
    if (!roots.empty()) {
      const double m0 = detail::deflation_factor(spec, u, roots, cfg);
      DiscreteField dfield(u.mesh, d);
      const double dn = norms(dfield, spec.p()).w1p_semi;
      const double eps = 1e-7 * (1.0 + norms(u, spec.p()).w1p_semi) / std::max(dn, 1e-30);
      const double mp = detail::deflation_factor(spec, axpy(eps, dfield, u), roots, cfg);
      const double mm = detail::deflation_factor(spec, axpy(-eps, dfield, u), roots, cfg);
      const double dm = (mp - mm) / (2.0 * eps);  // directional derivative of M along d
      const double denom = m0 - dm;
      if (std::isfinite(denom) && denom != 0.0) {
        const double tau = m0 / denom;
        for (double& x : d) x *= tau;
      }
    }

    // backtracking on the merit
    DiscreteField dfield(u.mesh, d);
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      DiscreteField trial = axpy(alpha, dfield, u);
      std::vector<double> Ft = residual(trial);
      const double phit = merit(trial, Ft);
      if (phit <= (1.0 - 2.0 * cfg.armijo_c * alpha) * phi) {
        u = std::move(trial);
        F = std::move(Ft);
        phi = phit;
        accepted = true;
        break;
      }
      alpha *= cfg.backtrack;
    }

    if (!accepted) {
      ++stalls;
      // stalled Newton: take a guarded descent step
      std::vector<double> dir;
      if (descent_fallback) {
        dir = F;  // -F descends f
        for (double& x : dir) x = -x;
        DiscreteField dd(u.mesh, dir);
        double a = 1.0 / (1.0 + sup_norm(F));
        bool moved = false;
        const double f0 = assemble_energy(spec, u);
        for (int ls = 0; ls < 60; ++ls) {
          DiscreteField trial = axpy(a, dd, u);
          const double ft = assemble_energy(spec, trial);
          if (ft < f0) {  // f non-increasing along the pure descent phase
            u = std::move(trial);
            F = residual(u);
            phi = merit(u, F);
            moved = true;
            break;
          }
          a *= cfg.backtrack;
        }
        if (!moved && stalls > 3) {
          SolveOutcome out;
          out.status = SolveStatus::max_iter_exceeded;
          return out;
        }
      } else {
        // steepest descent on the merit 0.5||F||^2: direction -H F
        std::vector<double> hf = tridiag_mul(H, F);
        DiscreteField dd(u.mesh, hf);
        double a = 1.0 / (1.0 + sup_norm(hf));
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
          DiscreteField trial = axpy(-a, dd, u);
          std::vector<double> Ft = residual(trial);
          const double phit = merit(trial, Ft);
          if (phit < phi) {
            u = std::move(trial);
            F = std::move(Ft);
            phi = phit;
            moved = true;
            break;
          }
          a *= cfg.backtrack;
        }
        if (!moved && stalls > 3) {
          SolveOutcome out;
          out.status = SolveStatus::max_iter_exceeded;
          return out;
        }
      }
    } else {
      stalls = 0;
    }

    if (sup_norm(F) <= cfg.tol_residual) return finish(it);
  }
  SolveOutcome out;
  out.status = SolveStatus::max_iter_exceeded;
  return out;
}

/// Deflated multistart: Newton runs from the zero field, eigenfunction-shaped
/// starts, and seeded random Fourier combinations; every converged root is
/// deflated away for the following runs. The output is deterministic for a
/// fixed seed and contains pairwise-distinct roots in discovery order.
inline std::vector<CriticalPointRecord> multistart_deflated(const EnergySpec& spec,
                                                            const MeshPtr& mesh, int starts,
                                                            const SolverConfig& cfg = {}) {
  if (starts < 1) throw BadConfig("multistart needs at least one start");
  const double L = mesh->length();

  std::vector<DiscreteField> start_fields;
  start_fields.push_back(DiscreteField::zero(mesh));
  const double amps[3] = {0.7, 1.5, 3.0};
  for (int k = 1; k <= 4 && static_cast<int>(start_fields.size()) < starts; ++k) {
    for (double amp : amps) {
      for (int sign = 0; sign < 2; ++sign) {
        if (static_cast<int>(start_fields.size()) >= starts) break;
        const double a = (sign == 0 ? amp : -amp);
        start_fields.push_back(interpolate(
            mesh, [&](double x) { return a * std::sin(k * std::numbers::pi * x / L); }));
      }
    }
  }
  std::mt19937_64 rng(cfg.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (static_cast<int>(start_fields.size()) < starts) {
    double coef[8];
    for (double& c : coef) c = gauss(rng);
    start_fields.push_back(interpolate(mesh, [&](double x) {
      double s = 0.0;
      for (int k = 1; k <= 8; ++k)
        s += coef[k - 1] * std::sin(k * std::numbers::pi * x / L) / k;
      return s;
    }));
  }

  std::vector<CriticalPointRecord> found;
  std::vector<DiscreteField> roots;
  for (const auto& s0 : start_fields) {
    SolveOutcome out = newton_solve(spec, s0, cfg, &roots);
    if (!out.ok()) continue;
    if (out.record.residual_sup > cfg.tol_residual) continue;
    bool fresh = true;
    for (const auto& r : found)
      if (w1p_distance(out.record.field, r.field, spec.p()) <= cfg.distinct_tol) {
        fresh = false;
        break;
      }
    if (!fresh) continue;
    roots.push_back(out.record.field);
    found.push_back(std::move(out.record));
  }
  return found;
}

/// Discretized-path minimax realizing the saddle geometry: the maximal path
/// point is pushed along -grad f with backtracking, the path is resampled to
/// equal arclength each sweep, and a plain Newton polish finishes the run
/// once the ridge point is nearly critical.
inline SolveOutcome mountain_pass(const EnergySpec& spec, const DiscreteField& a,
                                  const DiscreteField& b, int segments,
                                  const SolverConfig& cfg = {}) {
  check_same_mesh(a, b);
  if (segments < 2) throw BadConfig("mountain_pass needs at least 2 segments");
  const double p = spec.p();
  SolveOutcome fail;
  if (w1p_distance(a, b, p) <= 1e-12) {
    fail.status = SolveStatus::path_collapse;
    return fail;
  }

  const int np = segments + 1;
  std::vector<DiscreteField> path;
  path.reserve(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) {
    const double t = static_cast<double>(i) / segments;
    path.push_back(axpy(t, axpy(-1.0, a, b), a));
  }
  std::vector<double> fv(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) fv[static_cast<std::size_t>(i)] = assemble_energy(spec, path[static_cast<std::size_t>(i)]);

  // the endpoints must sit below the straight-path maximum
  double straight_max = fv[0];
  for (double v : fv) straight_max = std::max(straight_max, v);
  if (!(fv[0] < straight_max && fv[static_cast<std::size_t>(np - 1)] < straight_max)) {
    fail.status = SolveStatus::path_collapse;
    return fail;
  }

  auto reparametrize = [&]() {
    std::vector<double> cum(static_cast<std::size_t>(np), 0.0);
    for (int i = 1; i < np; ++i)
      cum[static_cast<std::size_t>(i)] =
          cum[static_cast<std::size_t>(i) - 1] +
          w1p_distance(path[static_cast<std::size_t>(i)], path[static_cast<std::size_t>(i) - 1], p);
    const double total = cum.back();
    if (total <= 0.0) return;
    std::vector<DiscreteField> fresh;
    fresh.reserve(static_cast<std::size_t>(np));
    fresh.push_back(path.front());
    int seg = 0;
    for (int i = 1; i < np - 1; ++i) {
      const double target = total * i / segments;
      while (seg + 1 < np - 1 && cum[static_cast<std::size_t>(seg) + 1] < target) ++seg;
      const double lo = cum[static_cast<std::size_t>(seg)], hi = cum[static_cast<std::size_t>(seg) + 1];
      const double t = (hi > lo) ? (target - lo) / (hi - lo) : 0.0;
      fresh.push_back(axpy(t, axpy(-1.0, path[static_cast<std::size_t>(seg)], path[static_cast<std::size_t>(seg) + 1]),
                           path[static_cast<std::size_t>(seg)]));
    }
    fresh.push_back(path.back());
    path = std::move(fresh);
    for (int i = 0; i < np; ++i) fv[static_cast<std::size_t>(i)] = assemble_energy(spec, path[static_cast<std::size_t>(i)]);
  };

  const int max_sweeps = std::max(cfg.max_iter, 50) * 10;
  int endpoint_hits = 0;
  double step = 1.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    int jmax = 1;
    for (int i = 1; i < np - 1; ++i)
      if (fv[static_cast<std::size_t>(i)] > fv[static_cast<std::size_t>(jmax)]) jmax = i;
    if (fv[0] >= fv[static_cast<std::size_t>(jmax)] || fv[static_cast<std::size_t>(np - 1)] >= fv[static_cast<std::size_t>(jmax)]) {
      if (++endpoint_hits >= 3) {
        fail.status = SolveStatus::path_collapse;
        return fail;
      }
    } else {
      endpoint_hits = 0;
    }

    DiscreteField& top = path[static_cast<std::size_t>(jmax)];
    std::vector<double> F = assemble_gradient(spec, top);
    const double res = sup_norm(F);
    if (res <= cfg.tol_residual) {
      SolveOutcome out;
      out.status = SolveStatus::converged;
      out.record.field = top;
      out.record.energy = fv[static_cast<std::size_t>(jmax)];
      out.record.residual_sup = res;
      out.record.iterations = sweep;
      out.record.initial_slope = top.slope(0);
      return out;
    }
    if (res <= 1e-3) {
      // close enough to a critical point for a local polish
      SolveOutcome polished = newton_solve(spec, top, cfg);
      if (polished.ok()) {
        polished.record.iterations += sweep;
        return polished;
      }
    }

    DiscreteField dir(top.mesh, F);
    for (double& x : dir.values) x = -x;
    double alpha = step / (1.0 + res);
    const double f0 = fv[static_cast<std::size_t>(jmax)];
    bool moved = false;
    for (int ls = 0; ls < 50; ++ls) {
      DiscreteField trial = axpy(alpha, dir, top);
      const double ft = assemble_energy(spec, trial);
      if (ft < f0 - cfg.armijo_c * alpha * dot(F, F)) {
        top = std::move(trial);
        fv[static_cast<std::size_t>(jmax)] = ft;
        moved = true;
        step = std::min(step * 2.0, 1e3);
        break;
      }
      alpha *= cfg.backtrack;
      step = std::max(step * cfg.backtrack, 1e-12);
    }
    if (!moved) {
      // the ridge point refuses to descend: try the polish anyway
      SolveOutcome polished = newton_solve(spec, top, cfg);
      if (polished.ok()) {
        polished.record.iterations += sweep;
        return polished;
      }
      fail.status = SolveStatus::max_iter_exceeded;
      return fail;
    }
    reparametrize();
  }
  fail.status = SolveStatus::max_iter_exceeded;
  return fail;
}

/// Minimize f(base + w) over w in span(basis) by projected Newton in the
/// basis coordinates, Armijo backtracking on f itself. Returns the minimizing
/// field; the projected gradient (directional derivatives along the basis)
/// ends below cfg.tol_residual in sup norm. Throws MaxIterExceeded.
inline DiscreteField minimize_over_subspace(const EnergySpec& spec, const DiscreteField& base,
                                            const std::vector<DiscreteField>& basis,
                                            const DiscreteField& start,
                                            const SolverConfig& cfg = {}) {
  const int K = static_cast<int>(basis.size());
  if (K == 0) return start;  // vacuous success
  check_same_mesh(base, start);
  const MeshPtr mesh = base.mesh;
  const int n = base.size();

  // coordinates of the start in the (B-orthonormalized Gram) basis
  std::vector<double> gram(static_cast<std::size_t>(K) * K, 0.0);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = l2_dot(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]);
      gram[static_cast<std::size_t>(i) * K + j] = v;
      gram[static_cast<std::size_t>(j) * K + i] = v;
    }
  std::vector<double> c(static_cast<std::size_t>(K), 0.0);
  for (int i = 0; i < K; ++i) c[static_cast<std::size_t>(i)] = l2_dot(basis[static_cast<std::size_t>(i)], start);
  {
    std::vector<double> gcopy = gram;
    if (!cholesky_solve(gcopy, K, c)) throw BadConfig("subspace basis is not linearly independent");
  }

  auto field_of = [&](const std::vector<double>& coords) {
    DiscreteField w = DiscreteField::zero(mesh);
    for (int k = 0; k < K; ++k)
      for (int i = 0; i < n; ++i)
        w.values[static_cast<std::size_t>(i)] +=
            coords[static_cast<std::size_t>(k)] * basis[static_cast<std::size_t>(k)].values[static_cast<std::size_t>(i)];
    return w;
  };

  DiscreteField u = axpy(1.0, field_of(c), base);
  double f = assemble_energy(spec, u);
  for (int it = 0; it <= cfg.max_iter; ++it) {
    const std::vector<double> F = assemble_gradient(spec, u);
    std::vector<double> gc(static_cast<std::size_t>(K), 0.0);
    for (int k = 0; k < K; ++k) gc[static_cast<std::size_t>(k)] = dot(F, basis[static_cast<std::size_t>(k)].values);
    if (sup_norm(gc) <= cfg.tol_residual) return axpy(-1.0, base, u);
    if (it == cfg.max_iter) break;

    // coordinate Hessian basis^T (A - M) basis
    const Tridiag H = assemble_hessian_regularized(spec, u).form();
    std::vector<double> hb(static_cast<std::size_t>(K) * n);
    for (int k = 0; k < K; ++k) {
      const std::vector<double> col = tridiag_mul(H, basis[static_cast<std::size_t>(k)].values);
      for (int i = 0; i < n; ++i) hb[static_cast<std::size_t>(k) * n + i] = col[static_cast<std::size_t>(i)];
    }
    std::vector<double> hc(static_cast<std::size_t>(K) * K, 0.0);
    for (int k = 0; k < K; ++k)
      for (int l = 0; l <= k; ++l) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          s += basis[static_cast<std::size_t>(l)].values[static_cast<std::size_t>(i)] * hb[static_cast<std::size_t>(k) * n + i];
        hc[static_cast<std::size_t>(k) * K + l] = s;
        hc[static_cast<std::size_t>(l) * K + k] = s;
      }

    // Newton direction, ridge-regularized until the factorization succeeds
    std::vector<double> dc(static_cast<std::size_t>(K));
    double trace = 0.0;
    for (int k = 0; k < K; ++k) trace += std::fabs(hc[static_cast<std::size_t>(k) * K + k]);
    double ridge = 0.0;
    bool solved = false;
    for (int attempt = 0; attempt < 10; ++attempt) {
      std::vector<double> hcopy = hc;
      if (ridge > 0.0)
        for (int k = 0; k < K; ++k) hcopy[static_cast<std::size_t>(k) * K + k] += ridge;
      std::vector<double> rhs = gc;
      for (double& x : rhs) x = -x;
      if (cholesky_solve(hcopy, K, rhs)) {
        dc = std::move(rhs);
        solved = true;
        break;
      }
      ridge = (ridge == 0.0) ? 1e-10 * std::max(trace / K, 1.0) : ridge * 100.0;
    }
    if (!solved) {
      dc = gc;
      for (double& x : dc) x = -x;  // steepest descent fallback
    }

    const DiscreteField dfield = field_of(dc);
    const double slope = dot(gc, dc);
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      DiscreteField trial = axpy(alpha, dfield, u);
      const double ft = assemble_energy(spec, trial);
      if (ft <= f + cfg.armijo_c * alpha * slope) {
        u = std::move(trial);
        f = ft;
        moved = true;
        break;
      }
      alpha *= cfg.backtrack;
    }
    if (!moved) throw MaxIterExceeded("subspace minimization stalled");
    for (int k = 0; k < K; ++k) c[static_cast<std::size_t>(k)] += alpha * dc[static_cast<std::size_t>(k)];
  }
  throw MaxIterExceeded("subspace minimization exceeded max iterations");
}

/// The symmetric cones of the saddle geometry at level m:
///   X_- : int |u'|^p <= lambda_m     int |u|^p
///   X_+ : int |u'|^p >= lambda_{m+1} int |u|^p
/// With m = 0 the degenerate variant X_- = {0}, X_+ = everything applies.
/// Discrete Rayleigh quotients overshoot the continuum eigenvalues by
/// O(h^2), so the predicates carry a small relative slack.
struct ConeGeometry {
  int m_index = 0;
  double lambda_m = 0.0;
  double lambda_m1 = 0.0;
  double radius = 1.0;
  double rel_slack = 1e-3;
};

inline ConeGeometry cone_geometry(const SpectrumTable& table, int m, double radius = 1.0) {
  ConeGeometry g;
  g.m_index = m;
  g.lambda_m = (m >= 1) ? table.lambda(m) : 0.0;
  g.lambda_m1 = table.lambda(m + 1);
  g.radius = radius;
  return g;
}

struct ConeMembership {
  bool in_x_minus = false;
  bool in_x_plus = false;

  bool neither() const { return !in_x_minus && !in_x_plus; }
};

inline ConeMembership cone_membership(const ConeGeometry& geom, const DiscreteField& u, double p) {
  ConeMembership r;
  const FieldNorms nn = norms(u, p);
  const double S = std::pow(nn.w1p_semi, p);
  const double T = std::pow(nn.lp, p);
  if (T == 0.0 && S == 0.0) {
    r.in_x_minus = true;  // the origin belongs to both cones
    r.in_x_plus = true;
    return r;
  }
  if (geom.m_index == 0) {
    r.in_x_minus = false;
    r.in_x_plus = true;
    return r;
  }
  r.in_x_minus = S <= geom.lambda_m * T * (1.0 + geom.rel_slack);
  r.in_x_plus = S >= geom.lambda_m1 * T * (1.0 - geom.rel_slack);
  return r;
}

}  // namespace azlab
