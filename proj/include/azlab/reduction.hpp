#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "azlab/assembly.hpp"
#include "azlab/errors.hpp"
#include "azlab/morse.hpp"
#include "azlab/solvers.hpp"
#include "azlab/spectrum.hpp"

namespace azlab {

/// V + W splitting at a critical point u0: V spans the nonpositive
/// eigendirections of Q_{u0} (dim V = m*), W is the L^2-orthogonal
/// complement inside the discrete space. Both bases are mass-orthonormal.
struct Decomposition {
  std::vector<DiscreteField> v_basis;
  std::vector<double> v_eigenvalues;  // pencil eigenvalues of the V directions
  std::vector<DiscreteField> w_basis;
  double rho = 0.1;  // radius of the V-ball
  double r = 0.1;    // radius of the W-ball

  int dim_v() const { return static_cast<int>(v_basis.size()); }
};

/// Remove the L^2 components along the V directions.
inline DiscreteField project_to_w(const Decomposition& dec, const DiscreteField& u) {
  DiscreteField w = u;
  for (const auto& v : dec.v_basis) {
    const double c = l2_dot(u, v);
    w = axpy(-c, v, w);
  }
  return w;
}

inline Decomposition build_decomposition(const EnergySpec& spec, const DiscreteField& u0,
                                         const MorseData& md, double rho = 0.0, double r = 0.0) {
  if (!md.finite())
    throw InfiniteIndex("reduction requires finite Morse indices");
  const int m_star = md.m_star.value;

  Decomposition dec;
  const double default_radius = 0.1 * (1.0 + norms(u0, spec.p()).w1p_semi);
  dec.rho = (rho > 0.0) ? rho : default_radius;
  dec.r = (r > 0.0) ? r : default_radius;

  if (m_star > 0) {
    const QAssembly qa = assemble_Q(spec, u0);
    const auto pairs = lowest_eigenpairs(qa.q, m_star);
    for (const auto& pr : pairs) {
      dec.v_basis.push_back(pr.field);
      dec.v_eigenvalues.push_back(pr.value);
    }
  }

  // W basis: mass-orthonormal complement of V by (twice-applied) modified
  // Gram-Schmidt over the nodal unit vectors.
  const MeshPtr mesh = u0.mesh;
  const int n = u0.size();
  const Tridiag B = plain_mass(*mesh);
  auto bdot = [&](const std::vector<double>& x, const std::vector<double>& y) {
    return dot(tridiag_mul(B, x), y);
  };
  for (int j = 0; j < n && static_cast<int>(dec.w_basis.size()) < n - m_star; ++j) {
    std::vector<double> cand(static_cast<std::size_t>(n), 0.0);
    cand[static_cast<std::size_t>(j)] = 1.0;
    const double norm0 = std::sqrt(bdot(cand, cand));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : dec.v_basis) {
        const double c = bdot(cand, v.values);
        for (int i = 0; i < n; ++i) cand[static_cast<std::size_t>(i)] -= c * v.values[static_cast<std::size_t>(i)];
      }
      for (const auto& w : dec.w_basis) {
        const double c = bdot(cand, w.values);
        for (int i = 0; i < n; ++i) cand[static_cast<std::size_t>(i)] -= c * w.values[static_cast<std::size_t>(i)];
      }
    }
    const double nn = std::sqrt(std::max(bdot(cand, cand), 0.0));
    if (nn <= 1e-10 * norm0) continue;  // linearly dependent leftover
    for (double& x : cand) x /= nn;
    dec.w_basis.emplace_back(mesh, std::move(cand));
  }
  return dec;
}

/// One evaluation of the reduced machinery at coordinates v (in the V basis):
/// the W minimizer psi(v), phi(v) = f(u0 + v + psi(v)), and the directional
/// derivatives of f along the V basis (Thm 5.1 makes these grad phi).
struct ReducedSample {
  std::vector<double> v_coords;
  DiscreteField psi_field;
  double phi = 0.0;
  std::vector<double> grad_phi;
  double rho_used = 0.0;
  double r_used = 0.0;
};

inline DiscreteField v_field(const Decomposition& dec, const std::vector<double>& coords) {
  if (coords.size() != dec.v_basis.size()) throw BadConfig("coordinate count mismatch");
  DiscreteField v = dec.v_basis.empty()
                        ? DiscreteField()  // replaced below
                        : DiscreteField::zero(dec.v_basis.front().mesh);
  if (dec.v_basis.empty()) {
    if (!dec.w_basis.empty()) v = DiscreteField::zero(dec.w_basis.front().mesh);
    return v;
  }
  for (std::size_t k = 0; k < coords.size(); ++k) v = axpy(coords[k], dec.v_basis[k], v);
  return v;
}

inline ReducedSample psi_map(const EnergySpec& spec, const DiscreteField& u0,
                             const Decomposition& dec, const std::vector<double>& coords,
                             const SolverConfig& cfg = {}) {
  const DiscreteField v = dec.dim_v() ? v_field(dec, coords) : DiscreteField::zero(u0.mesh);
  const double vnorm = norms(v, spec.p()).w1p_semi;

  double rho = dec.rho, r = dec.r;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    if (vnorm > rho * (1.0 + 1e-12))
      throw SolverFailure("psi_map: v lies outside the rho-ball");
    try {
      const DiscreteField base = axpy(1.0, v, u0);
      const DiscreteField w =
          minimize_over_subspace(spec, base, dec.w_basis, DiscreteField::zero(u0.mesh), cfg);
      if (norms(w, spec.p()).w1p_semi <= r * (1.0 + 1e-12)) {
        ReducedSample s;
        s.v_coords = coords;
        s.psi_field = w;
        const DiscreteField point = axpy(1.0, w, base);
        s.phi = assemble_energy(spec, point);
        const std::vector<double> F = assemble_gradient(spec, point);
        s.grad_phi.resize(dec.v_basis.size());
        for (std::size_t k = 0; k < dec.v_basis.size(); ++k)
          s.grad_phi[k] = dot(F, dec.v_basis[k].values);
        s.rho_used = rho;
        s.r_used = r;
        return s;
      }
    } catch (const MaxIterExceeded&) {
      // fall through to the halved radii
    }
    rho *= 0.5;
    r *= 0.5;
  }
  throw SolverFailure("psi_map failed after halving the radii four times");
}

namespace detail {

inline double basis_scale(const Decomposition& dec, double p) {
  double s = 0.0;
  for (const auto& v : dec.v_basis) s = std::max(s, norms(v, p).w1p_semi);
  return std::max(s, 1e-30);
}

}  // namespace detail

/// Max discrepancy between grad phi from psi_map and centered finite
/// differences of phi over random points in the rho-ball.
inline double reduced_gradient_check(const EnergySpec& spec, const DiscreteField& u0,
                                     const Decomposition& dec, int samples, std::uint64_t seed,
                                     const SolverConfig& cfg = {}) {
  const int dv = dec.dim_v();
  if (dv == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.1, 0.8);
  const double smax = detail::basis_scale(dec, spec.p());
  const double delta = 1e-4 * dec.rho / smax;

  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> z(static_cast<std::size_t>(dv));
    double nn = 0.0;
    for (double& x : z) {
      x = gauss(rng);
      nn += x * x;
    }
    nn = std::sqrt(std::max(nn, 1e-30));
    const double radius = dec.rho * unif(rng);
    const double fieldnorm = norms(v_field(dec, z), spec.p()).w1p_semi;
    const double scale = radius / std::max(fieldnorm, 1e-30);
    for (double& x : z) x *= scale;

    const ReducedSample at = psi_map(spec, u0, dec, z, cfg);
    for (int k = 0; k < dv; ++k) {
      std::vector<double> zp = z, zm = z;
      zp[static_cast<std::size_t>(k)] += delta;
      zm[static_cast<std::size_t>(k)] -= delta;
      const double fp = psi_map(spec, u0, dec, zp, cfg).phi;
      const double fm = psi_map(spec, u0, dec, zm, cfg).phi;
      const double fd = (fp - fm) / (2.0 * delta);
      worst = std::max(worst, std::fabs(fd - at.grad_phi[static_cast<std::size_t>(k)]));
    }
  }
  return worst;
}

/// Finite-difference Hessian of the reduced functional at 0. Only available
/// where the reduced functional is twice differentiable (kappa > 0, or p = 2
/// where kappa is irrelevant); must reproduce the V-block of Q_{u0}.
inline std::vector<std::vector<double>> reduced_hessian_at_zero(const EnergySpec& spec,
                                                                const DiscreteField& u0,
                                                                const Decomposition& dec,
                                                                const SolverConfig& cfg = {}) {
  if (spec.kappa() == 0.0 && spec.p() != 2.0)
    throw RegimeExcluded("reduced Hessian requires kappa > 0 (or p = 2)");
  const int dv = dec.dim_v();
  std::vector<std::vector<double>> H(static_cast<std::size_t>(dv),
                                     std::vector<double>(static_cast<std::size_t>(dv), 0.0));
  if (dv == 0) return H;
  const double smax = detail::basis_scale(dec, spec.p());
  const double delta = 1e-3 * dec.rho / smax;

  auto phi_at = [&](const std::vector<double>& z) { return psi_map(spec, u0, dec, z, cfg).phi; };
  std::vector<double> zero(static_cast<std::size_t>(dv), 0.0);
  const double phi0 = phi_at(zero);

  for (int i = 0; i < dv; ++i) {
    std::vector<double> zp = zero, zm = zero;
    zp[static_cast<std::size_t>(i)] += delta;
    zm[static_cast<std::size_t>(i)] -= delta;
    H[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
        (phi_at(zp) - 2.0 * phi0 + phi_at(zm)) / (delta * delta);
  }
  for (int i = 0; i < dv; ++i)
    for (int j = i + 1; j < dv; ++j) {
      std::vector<double> zpp = zero, zpm = zero, zmp = zero, zmm = zero;
      zpp[static_cast<std::size_t>(i)] += delta;
      zpp[static_cast<std::size_t>(j)] += delta;
      zpm[static_cast<std::size_t>(i)] += delta;
      zpm[static_cast<std::size_t>(j)] -= delta;
      zmp[static_cast<std::size_t>(i)] -= delta;
      zmp[static_cast<std::size_t>(j)] += delta;
      zmm[static_cast<std::size_t>(i)] -= delta;
      zmm[static_cast<std::size_t>(j)] -= delta;
      const double v =
          (phi_at(zpp) - phi_at(zpm) - phi_at(zmp) + phi_at(zmm)) / (4.0 * delta * delta);
      H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      H[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  return H;
}

enum class OriginClass { local_min, local_max, saddle, degenerate };

inline const char* to_string(OriginClass c) {
  switch (c) {
    case OriginClass::local_min: return "localMin";
    case OriginClass::local_max: return "localMax";
    case OriginClass::saddle: return "saddle";
    case OriginClass::degenerate: return "degenerate";
  }
  return "?";
}

/// Sample phi on a polar grid inside the rho-ball and classify the origin by
/// the signs of phi(v) - phi(0). dim V = 0 is a minimum along W outright.
inline OriginClass classify_origin(const EnergySpec& spec, const DiscreteField& u0,
                                   const Decomposition& dec, int directions = 16, int radii = 8,
                                   const SolverConfig& cfg = {}) {
  const int dv = dec.dim_v();
  if (dv > 2) throw DimTooHigh("classify_origin supports dim V <= 2");
  if (dv == 0) return OriginClass::local_min;
  if (directions < 2 || radii < 1) throw BadConfig("classify_origin grid too small");

  const double phi0 = psi_map(spec, u0, dec, std::vector<double>(static_cast<std::size_t>(dv), 0.0), cfg).phi;
  const double degenerate_band = 1e-12 * (1.0 + std::fabs(phi0));

  std::vector<std::vector<double>> dirs;
  if (dv == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
  } else {
    for (int k = 0; k < directions; ++k) {
      const double a = 2.0 * std::numbers::pi * k / directions;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
  }

  bool above = false, below = false;
  for (const auto& d : dirs) {
    const double s = norms(v_field(dec, d), spec.p()).w1p_semi;
    for (int j = 1; j <= radii; ++j) {
      const double radius = dec.rho * j / radii;
      std::vector<double> z = d;
      for (double& x : z) x *= radius / std::max(s, 1e-30);
      const double phi = psi_map(spec, u0, dec, z, cfg).phi;
      if (std::fabs(phi - phi0) <= degenerate_band) return OriginClass::degenerate;
      if (phi > phi0)
        above = true;
      else
        below = true;
    }
  }
  if (above && below) return OriginClass::saddle;
  return above ? OriginClass::local_min : OriginClass::local_max;
}

}  // namespace azlab
