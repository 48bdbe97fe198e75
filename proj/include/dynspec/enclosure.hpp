#pragma once

// The two closed-form spectral enclosures for the dynamo operator:
//  - Sigma_theta: the ray (-inf, -lam1(theta)] together with {f >= 1}, where
//    f is assembled region-by-region (Z1..Z6) from the resolvent estimates,
//    with boundary curve h_theta and right extremity a_theta (cases i-iii);
//  - the strip/disc set with upper bound s_theta of the self-adjoint
//    companion and right extremity b_theta = s_theta + ||alpha'||.

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dynspec/besselspec.hpp"
#include "dynspec/profiles.hpp"
#include "dynspec/specfun.hpp"

namespace dynspec {

using ComplexPoint = std::complex<double>;

struct ProblemConstants {
  ModeIndex l;
  BoundaryParam theta;
  double lam1_theta;       // smallest eigenvalue of A_theta
  double lam1_inf;         // smallest Dirichlet eigenvalue
  double alpha_norm;       // ||alpha||
  double alpha_prime_norm; // ||alpha'||
};

inline ProblemConstants make_constants(ModeIndex l, BoundaryParam theta,
                                       double alpha_norm,
                                       double alpha_prime_norm) {
  if (!(alpha_norm >= 0.0) || !(alpha_prime_norm >= 0.0))
    throw std::domain_error("make_constants: norms must be >= 0");
  const double z1 = bessel_zero(l.value, 1);
  const double lam1_inf = z1 * z1;
  const double lam1_theta =
      theta.is_infinite() ? lam1_inf : operator_eigenvalue(l, theta, 1);
  return {l, theta, lam1_theta, lam1_inf, alpha_norm, alpha_prime_norm};
}

inline ProblemConstants make_constants(ModeIndex l, BoundaryParam theta,
                                       const AlphaProfile& profile) {
  const ProfileNorms n = profile.norms();
  return make_constants(l, theta, n.alpha_norm, n.alpha_prime_norm);
}

enum class RegionTag { Z0, Z1, Z2, Z3, Z4, Z5, Z6 };

inline bool region_matches(RegionTag tag, ComplexPoint z,
                           const ProblemConstants& c) {
  const double re = z.real(), im = z.imag();
  const double lt = c.lam1_theta, li = c.lam1_inf;
  const double az = std::abs(z);
  const double disc = std::abs(z + ComplexPoint(lt / 2.0, 0.0));
  switch (tag) {
    case RegionTag::Z0:
      return re <= -lt && im == 0.0;
    case RegionTag::Z1:
      return re <= -li && im != 0.0;
    case RegionTag::Z2:
      return -li < re && re <= 0.0 && im != 0.0 && az > lt;
    case RegionTag::Z3:
      return -lt < re && re <= 0.0 && disc > lt / 2.0 && az <= lt;
    case RegionTag::Z4:
      return -lt < re && re <= 0.0 && disc <= lt / 2.0;
    case RegionTag::Z5:
      return re > 0.0 && az <= lt;
    case RegionTag::Z6:
      return re > 0.0 && az > lt;
  }
  return false;
}

inline RegionTag classify_region(ComplexPoint lam, const ProblemConstants& c) {
  for (RegionTag t : {RegionTag::Z0, RegionTag::Z1, RegionTag::Z2, RegionTag::Z3,
                      RegionTag::Z4, RegionTag::Z5, RegionTag::Z6})
    if (region_matches(t, lam, c)) return t;
  throw std::logic_error("classify_region: the regions failed to cover lambda");
}

// f(lambda) per region, continuous across region boundaries.
inline double f_value(ComplexPoint lam, const ProblemConstants& c) {
  const double t = c.alpha_norm, s = c.alpha_prime_norm;
  const double lt = c.lam1_theta, li = c.lam1_inf;
  const double az = std::abs(lam);
  const double aim = std::abs(lam.imag());
  const double d_inf = std::abs(lam + ComplexPoint(li, 0.0));
  const double d_th = std::abs(lam + ComplexPoint(lt, 0.0));
  const double d_az = std::abs(lam + ComplexPoint(az, 0.0));
  switch (classify_region(lam, c)) {
    case RegionTag::Z0:
      throw std::domain_error("f_value: lambda lies on the ray Z0");
    case RegionTag::Z1:
      return (t * t * az / aim + t * s * std::sqrt(az) / d_az) / aim;
    case RegionTag::Z2:
      return (t * t * az / aim + t * s * std::sqrt(az) / d_az) / d_inf;
    case RegionTag::Z3:
      return (t * t * az / aim + t * s * std::sqrt(lt) / d_th) / d_inf;
    case RegionTag::Z4:
      return (t * t * lt / d_th + t * s * std::sqrt(lt) / d_th) / d_inf;
    case RegionTag::Z5:
      return (t * t + t * s * std::sqrt(lt) / d_th) / d_inf;
    case RegionTag::Z6:
      return (t * t + t * s * std::sqrt(az) / d_az) / d_inf;
  }
  throw std::logic_error("f_value: unreachable");
}

inline bool in_sigma(ComplexPoint lam, const ProblemConstants& c) {
  if (region_matches(RegionTag::Z0, lam, c)) return true;
  return f_value(lam, c) >= 1.0;
}

enum class BoundCase { I, II, III };

struct RightBoundCase {
  BoundCase case_tag;
  double a_theta;
  double s_theta;
  double b_theta;
};

namespace detail {

// -(li+lt)/2 + sqrt(((li-lt)/2)^2 + lt*x): the shared quadratic solution
// behind case (i) of a_theta and the first branch of s_theta.
inline double quadratic_bound(double lt, double li, double x) {
  const double half_diff = 0.5 * (li - lt);
  return -0.5 * (li + lt) + std::sqrt(half_diff * half_diff + lt * x);
}

}  // namespace detail

inline double s_bound(const ProblemConstants& c) {
  const double t = c.alpha_norm;
  if (t == 0.0) return -c.lam1_theta;
  if (t * t <= c.lam1_inf)
    return detail::quadratic_bound(c.lam1_theta, c.lam1_inf, t * t);
  return -c.lam1_inf + t * t;
}

inline RightBoundCase right_bound_a(const ProblemConstants& c) {
  const double t = c.alpha_norm, s = c.alpha_prime_norm;
  const double lt = c.lam1_theta, li = c.lam1_inf;
  const double st = s_bound(c);
  const double bt = st + s;

  if (t == 0.0) return {BoundCase::I, -lt, st, bt};  // Sigma collapses to Z0

  const double p_full = t * t + t * s / std::sqrt(lt);
  if (p_full <= li) {
    return {BoundCase::I, detail::quadratic_bound(lt, li, p_full), st, bt};
  }
  const double p_half = t * t + t * s / (2.0 * std::sqrt(lt));
  if (p_half <= li + lt) {
    const double hd = 0.5 * (li - lt - t * t);
    const double a =
        -0.5 * (li + lt - t * t) + std::sqrt(hd * hd + t * s * std::sqrt(lt));
    return {BoundCase::II, a, st, bt};
  }
  // Case (iii): f6 is strictly decreasing on the positive real axis with
  // f6(lam1_theta) > 1, so f6 = 1 has a unique root beyond lam1_theta.
  auto f6_real = [&](double lam) {
    return (t * t + t * s / (2.0 * std::sqrt(lam))) / (lam + li) - 1.0;
  };
  double hi = std::max(2.0 * lt, t * t);
  while (f6_real(hi) >= 0.0) hi *= 2.0;
  RootBracket br = make_bracket(f6_real, lt, hi);
  const double a = find_root(f6_real, br, 1e-13 * hi);
  return {BoundCase::III, a, st, bt};
}

// h_theta(xi): the unique eta >= 0 with f(xi + i eta) = 1. Requires
// ||alpha|| > 0 and xi <= a_theta; f is strictly decreasing in eta > 0.
inline double boundary_h(double xi, const ProblemConstants& c) {
  if (c.alpha_norm <= 0.0)
    throw std::domain_error("boundary_h: requires ||alpha|| > 0");
  const double a = right_bound_a(c).a_theta;
  if (xi > a)
    throw std::domain_error("boundary_h: xi must be <= a_theta");
  // d f / d eta vanishes on the real axis, so within float resolution of
  // a_theta the crossing degenerates; h(a_theta) = 0 by definition.
  if (xi >= a - 1e-11 * std::max(1.0, std::abs(a))) return 0.0;
  auto f_at = [&](double eta) { return f_value({xi, eta}, c); };
  double hi = 1.0;
  int guard = 0;
  while (f_at(hi) >= 1.0) {
    hi *= 2.0;
    if (++guard > 200)
      throw std::runtime_error("boundary_h: eta bracket expansion failed");
  }
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (f_at(mid) >= 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Strip/disc enclosure from the self-adjoint companion:
// {Re <= s_theta, |Im| <= ||alpha'||} U {|lambda - s_theta| <= ||alpha'||}.
inline bool strip_membership(ComplexPoint lam, const ProblemConstants& c) {
  const double st = s_bound(c);
  const double sp = c.alpha_prime_norm;
  if (lam.real() <= st && std::abs(lam.imag()) <= sp) return true;
  return std::abs(lam - ComplexPoint(st, 0.0)) <= sp;
}

// Samples of the upper Sigma_theta boundary (eta = h_theta(xi)) on
// [xi_min, a_theta]; the last point is (a_theta, 0).
inline std::vector<std::pair<double, double>> boundary_polyline(
    const ProblemConstants& c, double xi_min, int n_points) {
  if (n_points < 2)
    throw std::invalid_argument("boundary_polyline: need at least 2 points");
  const double a = right_bound_a(c).a_theta;
  if (!(xi_min < a))
    throw std::domain_error("boundary_polyline: xi_min must be < a_theta");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double xi = xi_min + (a - xi_min) * i / (n_points - 1);
    pts.emplace_back(xi, i + 1 == n_points ? 0.0 : boundary_h(xi, c));
  }
  return pts;
}

// Outline of the strip/disc set: the horizontal edge eta = ||alpha'|| from
// xi_min to s_theta, then the quarter arc of the disc down to (b_theta, 0).
inline std::vector<std::pair<double, double>> strip_outline(
    const ProblemConstants& c, double xi_min, int n_points) {
  if (n_points < 2)
    throw std::invalid_argument("strip_outline: need at least 2 points");
  const double st = s_bound(c);
  const double sp = c.alpha_prime_norm;
  if (!(xi_min < st))
    throw std::domain_error("strip_outline: xi_min must be < s_theta");
  std::vector<std::pair<double, double>> pts;
  const int n_edge = std::max(2, n_points / 2);
  const int n_arc = std::max(2, n_points - n_edge);
  for (int i = 0; i < n_edge; ++i) {
    const double xi = xi_min + (st - xi_min) * i / (n_edge - 1);
    pts.emplace_back(xi, sp);
  }
  const double pi = 3.14159265358979323846;
  for (int i = 1; i < n_arc; ++i) {
    const double phi = 0.5 * pi * (1.0 - static_cast<double>(i) / (n_arc - 1));
    pts.emplace_back(st + sp * std::cos(phi), sp * std::sin(phi));
  }
  return pts;
}

}  // namespace dynspec
