#pragma once

// Comparison of the two right bounds a_theta and b_theta over the
// (||alpha||, ||alpha'||) plane: the threshold curves k1..k3, the closed
// forms k4+/-, the curve k5, the exceptional set Delta_ex bounded by
// Gamma_ex = graph(k4-) u graph(k4+) u graph(k5), and a lower bound for the
// left endpoint mu of the k4 domain.

#include <cmath>
#include <stdexcept>

#include "dynspec/enclosure.hpp"

namespace dynspec {

enum class KCurve { K1, K2, K3, K4Minus, K4Plus, K5 };

// Right endpoint of the k5 domain (abscissa of C3).
inline double gamma_ex_right_end(double lt, double li) {
  return 0.5 * std::sqrt(lt) + std::sqrt(li - 0.75 * lt);
}

// Height of Delta_ex (ordinate of C2).
inline double delta_ex_height(double lt, double li) {
  return std::sqrt(li * lt) - lt;
}

namespace detail {

inline double k4_radicand(double t, double lt, double li) {
  const double hd = 0.5 * (li - lt);
  const double root1 = std::sqrt(hd * hd + lt * t * t);
  const double u = 0.5 * (li - lt - t * t);
  return u * u + 0.25 * t * t * lt -
         t * std::sqrt(lt) * (root1 - 0.5 * t * t);
}

// The closed forms come from squaring the implicit equation
//   sqrt(((li-lt)/2)^2 + lt t^2) + k = t^2/2 + sqrt(((li-lt-t^2)/2)^2 + sqrt(lt) t k),
// which introduces spurious candidates for small t. A branch value is a
// genuine point of Gamma_ex only if it satisfies the unsquared equation and
// is a valid norm (k >= 0).
inline bool k4_solves_implicit(double t, double k, double lt, double li) {
  if (k < -1e-12) return false;
  const double hd = 0.5 * (li - lt);
  const double lhs = std::sqrt(hd * hd + lt * t * t) + k;
  const double u = 0.5 * (li - lt - t * t);
  const double inner = u * u + std::sqrt(lt) * t * k;
  if (inner < 0.0) return false;
  const double rhs = 0.5 * t * t + std::sqrt(inner);
  return std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs));
}

inline double k4_branch(double t, double lt, double li, int sign) {
  if (!(t >= 0.0 && t * t <= li))
    throw std::domain_error("k_curve: k4 needs t in [0, sqrt(lam1_inf)]");
  const double rad = k4_radicand(t, lt, li);
  if (rad < 0.0)
    throw std::domain_error("k_curve: k4 radicand is negative (t below mu)");
  const double hd = 0.5 * (li - lt);
  const double base = 0.5 * t * t + 0.5 * t * std::sqrt(lt) -
                      std::sqrt(hd * hd + lt * t * t);
  const double k = base + sign * std::sqrt(rad);
  if (!k4_solves_implicit(t, k, lt, li))
    throw std::domain_error("k_curve: t below mu (k4 branch not on Gamma_ex)");
  return k;
}

}  // namespace detail

inline double k_curve(KCurve which, double t, double lam1_theta,
                      double lam1_inf) {
  const double lt = lam1_theta, li = lam1_inf;
  switch (which) {
    case KCurve::K1:
      if (!(t >= 0.0 && t * t <= li))
        throw std::domain_error("k_curve: k1 needs t in [0, sqrt(lam1_inf)]");
      return 0.5 * (li + lt) - std::sqrt(0.25 * (li - lt) * (li - lt) + lt * t * t);
    case KCurve::K2:
      // k2 := 0 on (sqrt(li), sqrt(li+lt)] by convention.
      if (!(t > 0.0 && t * t <= li + lt))
        throw std::domain_error(
            "k_curve: k2 needs t in (0, sqrt(lam1_inf+lam1_theta)]");
      if (t * t > li) return 0.0;
      return (li - t * t) / t * std::sqrt(lt);
    case KCurve::K3:
      if (!(t > 0.0 && t * t <= li + lt))
        throw std::domain_error(
            "k_curve: k3 needs t in (0, sqrt(lam1_inf+lam1_theta)]");
      return (li - t * t + lt) / t * 2.0 * std::sqrt(lt);
    case KCurve::K4Minus:
      return detail::k4_branch(t, lt, li, -1);
    case KCurve::K4Plus:
      return detail::k4_branch(t, lt, li, +1);
    case KCurve::K5:
      if (!(t >= std::sqrt(li) && t <= gamma_ex_right_end(lt, li)))
        throw std::domain_error("k_curve: t outside the k5 domain");
      return li - lt + t * std::sqrt(lt) - t * t;
  }
  throw std::logic_error("k_curve: unreachable");
}

// Lower bound for the left endpoint mu of the k4 domain: the point where k2
// attains the height of Delta_ex, i.e. the positive root of
//   t^2 + (sqrt(li) - sqrt(lt)) t - li = 0.
inline double mu_lower_bound(double lam1_theta, double lam1_inf) {
  const double d = 0.5 * (std::sqrt(lam1_inf) - std::sqrt(lam1_theta));
  return -d + std::sqrt(d * d + lam1_inf);
}

struct NormPair {
  double t;  // ||alpha||
  double s;  // ||alpha'||
};

enum class Relation { A_SMALLER, EQUAL, B_SMALLER };
enum class ExRegion { OUTSIDE, ON_GAMMA_EX, IN_DELTA_EX, DEGENERATE };

struct ComparisonVerdict {
  double a_theta;
  double b_theta;
  Relation relation;
  bool subcritical_split;  // a_theta < 0 < b_theta
  ExRegion region;
};

// The band test equivalent to a_theta < 0 < b_theta:
// ||alpha||^2 < lam1_inf and k1(||alpha||) < ||alpha'|| < k2(||alpha||).
inline bool subcritical_split_by_curves(NormPair p, double lam1_theta,
                                        double lam1_inf) {
  if (!(p.t > 0.0 && p.t * p.t < lam1_inf)) return false;
  return k_curve(KCurve::K1, p.t, lam1_theta, lam1_inf) < p.s &&
         p.s < k_curve(KCurve::K2, p.t, lam1_theta, lam1_inf);
}

namespace detail {

inline ExRegion ex_region(NormPair p, double lt, double li, double tol) {
  if (!(p.t > 0.0) || !(p.s > 0.0)) return ExRegion::DEGENERATE;
  const double sqrt_li = std::sqrt(li);
  const double right_end = gamma_ex_right_end(lt, li);
  if (p.t > right_end + tol) return ExRegion::OUTSIDE;
  if (p.t <= sqrt_li) {
    double lo, hi;
    try {
      lo = k4_branch(p.t, lt, li, -1);
      hi = k4_branch(p.t, lt, li, +1);
    } catch (const std::domain_error&) {
      return ExRegion::OUTSIDE;  // t below mu: no Gamma_ex arc here
    }
    if (std::abs(p.s - lo) <= tol || std::abs(p.s - hi) <= tol)
      return ExRegion::ON_GAMMA_EX;
    return (p.s > lo && p.s < hi) ? ExRegion::IN_DELTA_EX : ExRegion::OUTSIDE;
  }
  const double t_clip = std::min(p.t, right_end);
  const double k5 = k_curve(KCurve::K5, t_clip, lt, li);
  if (std::abs(p.s - k5) <= tol) return ExRegion::ON_GAMMA_EX;
  return (p.s < k5) ? ExRegion::IN_DELTA_EX : ExRegion::OUTSIDE;
}

}  // namespace detail

inline ComparisonVerdict classify_pair(NormPair p, const ProblemConstants& c) {
  if (!(p.t >= 0.0 && p.s >= 0.0))
    throw std::domain_error("classify_pair: norms must be >= 0");
  ProblemConstants cc = c;
  cc.alpha_norm = p.t;
  cc.alpha_prime_norm = p.s;
  const RightBoundCase rb = right_bound_a(cc);
  const double a = rb.a_theta, b = rb.b_theta;
  const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});

  Relation rel;
  if (std::abs(a - b) <= tol)
    rel = Relation::EQUAL;
  else
    rel = a < b ? Relation::A_SMALLER : Relation::B_SMALLER;

  const ComparisonVerdict v{a, b, rel, a < 0.0 && 0.0 < b,
                            detail::ex_region(p, cc.lam1_theta, cc.lam1_inf,
                                              tol)};
  return v;
}

}  // namespace dynspec
