#pragma once

// Yes/no spectral criteria: the anti-dynamo condition, the two-inequality
// stability condition from the strip enclosure, and the local
// non-oscillation conditions around an unperturbed eigenvalue. A violated
// condition never asserts the existence of supercritical or oscillatory
// modes; these are sufficient conditions only.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dynspec/enclosure.hpp"

namespace dynspec {

struct CriterionReport {
  bool satisfied;
  double lhs;
  double rhs;
  double margin;  // rhs - lhs; satisfied <=> margin > 0
};

namespace detail {

inline CriterionReport make_report(double lhs, double rhs) {
  return {rhs - lhs > 0.0, lhs, rhs, rhs - lhs};
}

}  // namespace detail

// ||alpha||^2 + ||alpha|| ||alpha'|| / sqrt(lam1(theta)) < lam1(inf).
// With theta = l this is the anti-dynamo theorem: no spectrum in the closed
// right half-plane.
inline CriterionReport anti_dynamo(const ProblemConstants& c) {
  const double lhs = c.alpha_norm * c.alpha_norm +
                     c.alpha_norm * c.alpha_prime_norm / std::sqrt(c.lam1_theta);
  return detail::make_report(lhs, c.lam1_inf);
}

// ||alpha|| < sqrt(lam1_inf) and ||alpha'|| < -s_theta. Both inequalities
// must hold; the report carries the binding one.
inline CriterionReport stable2(const ProblemConstants& c) {
  const double m1 = std::sqrt(c.lam1_inf) - c.alpha_norm;
  const double hd = 0.5 * (c.lam1_inf - c.lam1_theta);
  const double rhs2 = 0.5 * (c.lam1_inf + c.lam1_theta) -
                      std::sqrt(hd * hd + c.lam1_theta * c.alpha_norm * c.alpha_norm);
  const double m2 = rhs2 - c.alpha_prime_norm;
  if (m1 <= m2)
    return {m1 > 0.0 && m2 > 0.0, c.alpha_norm, std::sqrt(c.lam1_inf), m1};
  return {m1 > 0.0 && m2 > 0.0, c.alpha_prime_norm, rhs2, m2};
}

// Condition (schp) around lam0 in the unperturbed diagonal spectrum
// {-lam_k(theta)} u {-lam_k(inf)}: satisfied implies (theta finite) exactly
// one simple real eigenvalue of the dynamo operator inside the circle of
// radius delta0 = half the gap to the nearest other unperturbed eigenvalue.
// spectrum_diag must contain lam0 and every unperturbed eigenvalue within
// 3|lam0| of it, so that delta0 is certified.
inline CriterionReport local_nonoscillation(
    double lam0, const ProblemConstants& c,
    std::span<const double> spectrum_diag) {
  if (spectrum_diag.size() < 2)
    throw std::invalid_argument(
        "local_nonoscillation: spectrum window has fewer than 2 points");
  const double scale = std::max(1.0, std::abs(lam0));
  double nearest = std::numeric_limits<double>::infinity();
  bool found = false;
  double window_min = std::numeric_limits<double>::infinity();
  for (double x : spectrum_diag) {
    window_min = std::min(window_min, x);
    const double d = std::abs(x - lam0);
    if (d <= 1e-9 * scale) {
      found = true;
      continue;
    }
    nearest = std::min(nearest, d);
  }
  if (!found)
    throw std::invalid_argument(
        "local_nonoscillation: lam0 is not in the provided spectrum window");
  if (!(window_min <= lam0 - 3.0 * std::abs(lam0)))
    throw std::invalid_argument(
        "local_nonoscillation: spectrum window too short to certify delta0 "
        "(must extend to 3|lam0| below lam0)");
  const double delta0 = 0.5 * nearest;
  const double denom = std::abs(lam0) + 2.0 * delta0;
  const double lhs = c.alpha_norm * c.alpha_norm +
                     c.alpha_norm * c.alpha_prime_norm / std::sqrt(denom);
  const double rhs = delta0 * delta0 / denom;
  return detail::make_report(lhs, rhs);
}

// The merged unperturbed spectrum {-lam_k(theta)} u {-lam_k(inf)}, extended
// until it reaches `floor` (a non-positive bound), sorted descending.
inline std::vector<double> diagonal_spectrum(ModeIndex l, BoundaryParam theta,
                                             double floor) {
  std::vector<double> pts;
  for (int k = 1;; ++k) {
    const double li = -operator_eigenvalue(l, BoundaryParam::infinite(), k);
    pts.push_back(li);
    if (!theta.is_infinite())
      pts.push_back(-operator_eigenvalue(l, theta, k));
    if (li <= floor) break;
    if (k > 4096)
      throw std::runtime_error("diagonal_spectrum: window cap exceeded");
  }
  std::sort(pts.begin(), pts.end(), std::greater<>());
  return pts;
}

// Non-oscillation at the largest unperturbed eigenvalue: lam0 = -lam1(theta),
// delta0 = (lam1_inf - lam1_theta)/2.
inline CriterionReport meet_criterion(const ProblemConstants& c) {
  const double lhs = c.alpha_norm * c.alpha_norm +
                     c.alpha_norm * c.alpha_prime_norm / std::sqrt(c.lam1_inf);
  const double d = c.lam1_inf - c.lam1_theta;
  return detail::make_report(lhs, d * d / (4.0 * c.lam1_inf));
}

// ||alpha'|| < delta0 around an eigenvalue lam0 of the self-adjoint
// companion with multiplicity m0: then m0 eigenvalues of the dynamo operator
// lie inside the circle, and for m0 = 1 that eigenvalue is real.
inline CriterionReport question_nonsplit(double lam0, int multiplicity,
                                         std::span<const double> s_spectrum,
                                         double alpha_prime_norm) {
  if (multiplicity < 1)
    throw std::invalid_argument("question_nonsplit: multiplicity must be >= 1");
  if (static_cast<int>(s_spectrum.size()) <= multiplicity)
    throw std::invalid_argument(
        "question_nonsplit: spectrum window too small for the multiplicity");
  std::vector<double> dist;
  dist.reserve(s_spectrum.size());
  for (double x : s_spectrum) dist.push_back(std::abs(x - lam0));
  std::sort(dist.begin(), dist.end());
  const double scale = std::max(1.0, std::abs(lam0));
  if (dist.front() > 1e-9 * scale)
    throw std::invalid_argument(
        "question_nonsplit: lam0 is not in the provided S-spectrum");
  // Excise the m0 copies of lam0 itself; the next distance defines delta0.
  const double delta0 = 0.5 * dist[static_cast<std::size_t>(multiplicity)];
  return detail::make_report(alpha_prime_norm, delta0);
}

}  // namespace dynspec
