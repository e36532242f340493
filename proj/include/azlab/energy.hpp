#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "azlab/errors.hpp"

namespace azlab {

/// Principal-part kernel psi(xi) = (1/p) * [(kappa^2 + xi^2)^(p/2) - kappa^p].
/// kappa = 0 is the p-Laplace kernel |xi|^p / p, kappa = 1 the p-area kernel.
struct PrincipalPart {
  double p = 2.0;
  double kappa = 0.0;

  PrincipalPart() = default;
  PrincipalPart(double p_, double kappa_) : p(p_), kappa(kappa_) {
    if (!(p > 1.0)) throw BadConfig("principal part requires p > 1");
    if (!(kappa >= 0.0)) throw BadConfig("principal part requires kappa >= 0");
  }

  bool degenerate_at_zero_slope() const { return kappa == 0.0 && p < 2.0; }
};

inline double psi_value(const PrincipalPart& pp, double xi) {
  const double k2 = pp.kappa * pp.kappa;
  return (std::pow(k2 + xi * xi, 0.5 * pp.p) - std::pow(pp.kappa, pp.p)) / pp.p;
}

// Flux psi'(xi) = (kappa^2 + xi^2)^((p-2)/2) * xi; odd and strictly increasing.
inline double psi_grad(const PrincipalPart& pp, double xi) {
  if (pp.kappa == 0.0) {
    if (xi == 0.0) return 0.0;
    return std::pow(std::fabs(xi), pp.p - 2.0) * xi;
  }
  const double k2 = pp.kappa * pp.kappa;
  return std::pow(k2 + xi * xi, 0.5 * (pp.p - 2.0)) * xi;
}

// Curvature psi''(xi) = (kappa^2 + xi^2)^((p-4)/2) * (kappa^2 + (p-1) xi^2).
// Undefined at xi = 0 when kappa = 0 and p < 2 (see DegeneratePoint).
inline double psi_hess(const PrincipalPart& pp, double xi) {
  if (pp.kappa == 0.0) {
    if (xi == 0.0) {
      if (pp.p < 2.0)
        throw DegeneratePoint("psi'' undefined at slope 0 for kappa = 0, p < 2");
      if (pp.p == 2.0) return 1.0;
      return 0.0;  // p > 2: (p-1)|xi|^{p-2} -> 0
    }
    return (pp.p - 1.0) * std::pow(std::fabs(xi), pp.p - 2.0);
  }
  const double k2 = pp.kappa * pp.kappa;
  return std::pow(k2 + xi * xi, 0.5 * (pp.p - 4.0)) * (k2 + (pp.p - 1.0) * xi * xi);
}

enum class GrowthFamily { smooth_power, pure_power, custom };

struct CustomG {
  std::function<double(double)> g;       // g(s)
  std::function<double(double)> gprime;  // g'(s)
  std::function<double(double)> G;       // antiderivative, G(0) = 0
};

/// Lower-order term g with antiderivative G. The two closed families are the
/// ones whose growth hypotheses are certified in the ranges below; everything
/// else goes through the custom hook.
///   smooth_power: g(s) = lambda (1+s^2)^((p-2)/2) s + mu (1+s^2)^((q-2)/2) s,
///                 0 < q < p <= 2
///   pure_power:   g(s) = lambda |s|^(p-2) s + mu |s|^(q-2) s, 2 <= q < p
struct Nonlinearity {
  GrowthFamily family = GrowthFamily::custom;
  double p = 2.0;       // growth exponent the family is calibrated to
  double lambda = 0.0;  // asymptotic slope of hypothesis (a)
  double mu = 0.0;
  double q = 2.0;
  CustomG hook;         // custom family only
  std::string label;    // printable description
};

inline Nonlinearity smooth_power(double p, double lambda, double mu, double q) {
  if (!(q > 0.0 && q < p && p <= 2.0))
    throw BadConfig("smooth_power family requires 0 < q < p <= 2");
  Nonlinearity nl;
  nl.family = GrowthFamily::smooth_power;
  nl.p = p;
  nl.lambda = lambda;
  nl.mu = mu;
  nl.q = q;
  nl.label = "smoothPower";
  return nl;
}

inline Nonlinearity pure_power(double p, double lambda, double mu, double q) {
  if (!(q >= 2.0 && q < p)) throw BadConfig("pure_power family requires 2 <= q < p");
  Nonlinearity nl;
  nl.family = GrowthFamily::pure_power;
  nl.p = p;
  nl.lambda = lambda;
  nl.mu = mu;
  nl.q = q;
  nl.label = "purePower";
  return nl;
}

inline Nonlinearity custom_nonlinearity(double p, CustomG hook, std::string label = "custom") {
  Nonlinearity nl;
  nl.family = GrowthFamily::custom;
  nl.p = p;
  nl.hook = std::move(hook);
  nl.label = std::move(label);
  return nl;
}

/// g(s) = lambda*s + mu*s/(1+s^2): asymptotically linear with a bounded
/// perturbation; the q->0 endpoint of the smooth family, hence wired through
/// the custom hook. G(s) = lambda*s^2/2 + (mu/2)*log(1+s^2).
inline Nonlinearity linear_bounded(double p, double lambda, double mu) {
  CustomG hook;
  hook.g = [lambda, mu](double s) { return lambda * s + mu * s / (1.0 + s * s); };
  hook.gprime = [lambda, mu](double s) {
    const double d = 1.0 + s * s;
    return lambda + mu * (1.0 - s * s) / (d * d);
  };
  hook.G = [lambda, mu](double s) {
    return 0.5 * lambda * s * s + 0.5 * mu * std::log1p(s * s);
  };
  Nonlinearity nl = custom_nonlinearity(p, std::move(hook), "linearBounded");
  nl.lambda = lambda;
  nl.mu = mu;
  return nl;
}

enum class GEvalOrder { value, derivative, antiderivative };

namespace detail {

inline double smooth_power_eval(const Nonlinearity& nl, double s, GEvalOrder order) {
  const double d = 1.0 + s * s;
  switch (order) {
    case GEvalOrder::value:
      return nl.lambda * std::pow(d, 0.5 * (nl.p - 2.0)) * s +
             nl.mu * std::pow(d, 0.5 * (nl.q - 2.0)) * s;
    case GEvalOrder::derivative:
      return nl.lambda * std::pow(d, 0.5 * (nl.p - 4.0)) * (1.0 + (nl.p - 1.0) * s * s) +
             nl.mu * std::pow(d, 0.5 * (nl.q - 4.0)) * (1.0 + (nl.q - 1.0) * s * s);
    case GEvalOrder::antiderivative:
      return nl.lambda / nl.p * (std::pow(d, 0.5 * nl.p) - 1.0) +
             nl.mu / nl.q * (std::pow(d, 0.5 * nl.q) - 1.0);
  }
  return 0.0;
}

inline double pure_power_eval(const Nonlinearity& nl, double s, GEvalOrder order) {
  const double a = std::fabs(s);
  switch (order) {
    case GEvalOrder::value:
      if (s == 0.0) return 0.0;
      return nl.lambda * std::pow(a, nl.p - 2.0) * s + nl.mu * std::pow(a, nl.q - 2.0) * s;
    case GEvalOrder::derivative: {
      // q = 2 contributes mu at s = 0; exponents p-2 > 0 always (p > q >= 2).
      const double first = (s == 0.0) ? 0.0 : nl.lambda * (nl.p - 1.0) * std::pow(a, nl.p - 2.0);
      double second;
      if (s == 0.0)
        second = (nl.q == 2.0) ? nl.mu : 0.0;
      else
        second = nl.mu * (nl.q - 1.0) * std::pow(a, nl.q - 2.0);
      return first + second;
    }
    case GEvalOrder::antiderivative:
      return nl.lambda / nl.p * std::pow(a, nl.p) + nl.mu / nl.q * std::pow(a, nl.q);
  }
  return 0.0;
}

}  // namespace detail

inline double g_eval(const Nonlinearity& nl, double s, GEvalOrder order) {
  switch (nl.family) {
    case GrowthFamily::smooth_power:
      return detail::smooth_power_eval(nl, s, order);
    case GrowthFamily::pure_power:
      return detail::pure_power_eval(nl, s, order);
    case GrowthFamily::custom:
      switch (order) {
        case GEvalOrder::value:
          return nl.hook.g ? nl.hook.g(s) : 0.0;
        case GEvalOrder::derivative:
          return nl.hook.gprime ? nl.hook.gprime(s) : 0.0;
        case GEvalOrder::antiderivative:
          return nl.hook.G ? nl.hook.G(s) : 0.0;
      }
  }
  return 0.0;
}

inline double g_value(const Nonlinearity& nl, double s) { return g_eval(nl, s, GEvalOrder::value); }
inline double g_prime(const Nonlinearity& nl, double s) { return g_eval(nl, s, GEvalOrder::derivative); }
inline double g_antideriv(const Nonlinearity& nl, double s) { return g_eval(nl, s, GEvalOrder::antiderivative); }

enum class BClass { b_minus, b_plus, neither, inconclusive };

inline const char* to_string(BClass b) {
  switch (b) {
    case BClass::b_minus: return "bMinus";
    case BClass::b_plus: return "bPlus";
    case BClass::neither: return "neither";
    case BClass::inconclusive: return "inconclusive";
  }
  return "?";
}

/// What the growth classifiers certify about g. check_growth_a fills the
/// slope fields, classify_b the bClass/admissible pair.
struct HypothesisVerdict {
  double slope_at_infinity = std::numeric_limits<double>::quiet_NaN();
  double slope_at_zero = std::numeric_limits<double>::quiet_NaN();
  bool growth_conclusive = false;
  BClass b_class = BClass::inconclusive;
  bool admissible = false;
};

/// Hypothesis (a): g(0) = 0 and g(s)/(|s|^{p-2}s) -> lambda. Closed families
/// report lambda exactly; custom g is probed on s = +-10^k, k = 2..6, and the
/// ladder must be Cauchy within relative 1e-3.
inline HypothesisVerdict check_growth_a(const Nonlinearity& nl, double p) {
  HypothesisVerdict v;
  v.slope_at_zero = g_prime(nl, 0.0);
  if (nl.family == GrowthFamily::smooth_power || nl.family == GrowthFamily::pure_power) {
    v.slope_at_infinity = nl.lambda;
    v.growth_conclusive = true;
    return v;
  }
  const double rel_tol = 1e-3;
  double last[2] = {0.0, 0.0};
  bool ok = true;
  for (int sign = 0; sign < 2 && ok; ++sign) {
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int k = 2; k <= 6; ++k) {
      const double s = (sign == 0 ? 1.0 : -1.0) * std::pow(10.0, k);
      const double denom = std::pow(std::fabs(s), p - 2.0) * s;
      const double r = g_value(nl, s) / denom;
      if (!std::isfinite(r)) { ok = false; break; }
      if (k > 2 && std::fabs(r - prev) > rel_tol * std::max(1.0, std::fabs(r))) {
        ok = false;
        break;
      }
      prev = r;
    }
    last[sign] = prev;
  }
  if (ok && std::fabs(last[0] - last[1]) <= rel_tol * std::max(1.0, std::fabs(last[0]))) {
    v.slope_at_infinity = 0.5 * (last[0] + last[1]);
    v.growth_conclusive = true;
  }
  return v;
}

/// Hypothesis (b+/-): the sign of the divergence of H(s) = p G(s) - g(s) s.
/// Probes s = +-10^k, k = 1..6; the tail (last three probes) must be strictly
/// monotone past +-10^3 in both directions to certify a class. A bounded,
/// settled tail is "neither"; anything else is inconclusive. The admissible
/// flag records the (b+) side restriction: 1 < p <= 2 with any kappa, or
/// p > 2 with kappa = 0.
inline HypothesisVerdict classify_b(const Nonlinearity& nl, double p, double kappa) {
  HypothesisVerdict v;
  v.admissible = (p <= 2.0) || (p > 2.0 && kappa == 0.0);

  enum class Trend { diverge_plus, diverge_minus, bounded, unclear };
  const double bar = 1e3;
  Trend trends[2];
  for (int sign = 0; sign < 2; ++sign) {
    double h[6];
    for (int k = 1; k <= 6; ++k) {
      const double s = (sign == 0 ? 1.0 : -1.0) * std::pow(10.0, k);
      h[k - 1] = p * g_antideriv(nl, s) - g_value(nl, s) * s;
    }
    const double v4 = h[3], v5 = h[4], v6 = h[5];
    if (std::isfinite(v4) && std::isfinite(v5) && std::isfinite(v6) && v4 < v5 && v5 < v6 &&
        v5 > bar && v6 > bar)
      trends[sign] = Trend::diverge_plus;
    else if (std::isfinite(v4) && std::isfinite(v5) && std::isfinite(v6) && v4 > v5 && v5 > v6 &&
             v5 < -bar && v6 < -bar)
      trends[sign] = Trend::diverge_minus;
    else if (std::isfinite(v6) && std::fabs(v6) <= bar &&
             std::fabs(v6 - v5) <= 1e-3 * std::max(1.0, std::fabs(v6)))
      trends[sign] = Trend::bounded;
    else
      trends[sign] = Trend::unclear;
  }
  if (trends[0] == Trend::diverge_plus && trends[1] == Trend::diverge_plus)
    v.b_class = BClass::b_plus;
  else if (trends[0] == Trend::diverge_minus && trends[1] == Trend::diverge_minus)
    v.b_class = BClass::b_minus;
  else if (trends[0] == Trend::bounded && trends[1] == Trend::bounded)
    v.b_class = BClass::neither;
  else
    v.b_class = BClass::inconclusive;
  return v;
}

}  // namespace azlab
