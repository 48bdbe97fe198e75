#pragma once

// Constant alpha: the idealized (Dirichlet) problem has the explicit
// spectrum {-lam_n(inf) +- alpha0 sqrt(lam_n(inf))}; the physical problem
// gives eigenvalues implicitly as zeros of a four-Bessel determinant, kept
// real-valued here by working with spherical Bessel functions of k_-(lambda),
// which may be negative.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dynspec/besselspec.hpp"
#include "dynspec/specfun.hpp"

namespace dynspec {

// All 2*n_max values -lam_n(inf) +- alpha0 sqrt(lam_n(inf)), n = 1..n_max,
// sorted descending. For alpha0 = 0 every -lam_n(inf) appears twice.
inline std::vector<double> idealized_spectrum(ModeIndex l, double alpha0,
                                              int n_max) {
  if (n_max < 1)
    throw std::invalid_argument("idealized_spectrum: n_max must be >= 1");
  std::vector<double> values;
  values.reserve(2 * static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const double z = bessel_zero(l.value, n);
    const double lam = z * z;
    values.push_back(-lam + alpha0 * z);
    values.push_back(-lam - alpha0 * z);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

struct KPair {
  double k_plus;
  double k_minus;
};

// Roots of k^2 - alpha0 k + lam = 0: k_+- = alpha0/2 +- sqrt(alpha0^2/4 - lam).
inline KPair kpair(double alpha0, double lam) {
  const double disc = 0.25 * alpha0 * alpha0 - lam;
  if (disc < 0.0)
    throw std::domain_error("kpair: lam must be <= alpha0^2/4");
  const double root = std::sqrt(disc);
  return {0.5 * alpha0 + root, 0.5 * alpha0 - root};
}

// D(lambda) = j_{l-1}(k+) j_l(k-) - j_l(k+) j_{l-1}(k-). Its zeros coincide
// with those of the half-integer-order Bessel determinant for lambda != 0 (the two
// differ by a factor proportional to sqrt(k+ k-) = sqrt(lambda)).
inline double physical_determinant(ModeIndex l, double alpha0, double lam) {
  const KPair k = kpair(alpha0, lam);
  return spherical_bessel(l.value - 1, k.k_plus) *
             spherical_bessel(l.value, k.k_minus) -
         spherical_bessel(l.value, k.k_plus) *
             spherical_bessel(l.value - 1, k.k_minus);
}

// The merged unperturbed spectrum {-lam_k(l)} u {-lam_k(inf)} down to
// lam_min, sorted descending. This is the alpha0 = 0 physical spectrum.
inline std::vector<double> merged_bessel_spectrum(ModeIndex l, double lam_min) {
  std::vector<double> pts;
  for (int k = 1;; ++k) {
    const double zl = bessel_zero(l.value - 1, k);  // zeros of J_{l-1/2}
    const double zi = bessel_zero(l.value, k);      // zeros of J_{l+1/2}
    pts.push_back(-zl * zl);
    pts.push_back(-zi * zi);
    if (-zi * zi < lam_min) break;
    if (k > 4096)
      throw std::runtime_error("merged_bessel_spectrum: window cap exceeded");
  }
  std::sort(pts.begin(), pts.end(), std::greater<>());
  return pts;
}

// The `count` largest roots of the determinant in [lam_min, alpha0^2/4),
// located by a uniform sign scan whose step is an eighth of the smallest
// unperturbed gap, then polished with find_root. lambda = 0 is excluded
// from reporting (there the determinant equivalence degenerates).
inline std::vector<double> physical_spectrum(ModeIndex l, double alpha0,
                                             int count, double lam_min) {
  if (count < 1)
    throw std::invalid_argument("physical_spectrum: count must be >= 1");
  const double lam_max = 0.25 * alpha0 * alpha0;
  if (!(lam_min < lam_max))
    throw std::invalid_argument(
        "physical_spectrum: lam_min must be < alpha0^2/4");

  if (alpha0 == 0.0) {
    std::vector<double> merged = merged_bessel_spectrum(l, lam_min);
    while (!merged.empty() && merged.back() < lam_min) merged.pop_back();
    if (static_cast<int>(merged.size()) < count)
      throw std::invalid_argument(
          "physical_spectrum: window too small for the requested count");
    merged.resize(count);
    return merged;
  }

  const std::vector<double> anchor = merged_bessel_spectrum(l, lam_min * 2.0 - 1.0);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < anchor.size(); ++i)
    min_gap = std::min(min_gap, anchor[i - 1] - anchor[i]);
  const double step = min_gap / 8.0;

  auto det = [&](double lam) { return physical_determinant(l, alpha0, lam); };
  std::vector<double> roots;
  double x = lam_min;
  double fx = det(x);
  const double hi_cap = lam_max - 1e-12 * std::max(1.0, lam_max);
  while (x < hi_cap) {
    const double x2 = std::min(x + step, hi_cap);
    const double fx2 = det(x2);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (fx * fx2 < 0.0) {
      RootBracket br(x, x2, fx, fx2);
      roots.push_back(find_root(det, br, 1e-12 * std::max(1.0, std::abs(x2))));
    }
    x = x2;
    fx = fx2;
    if (x2 >= hi_cap) break;
  }
  // lambda = 0 is checked separately via the alpha0 -> 0 limit, not reported.
  std::erase_if(roots, [&](double r) {
    return std::abs(r) < 1e-9 * std::max(1.0, lam_max);
  });
  if (static_cast<int>(roots.size()) < count)
    throw std::invalid_argument(
        "physical_spectrum: window too small for the requested count");
  std::sort(roots.begin(), roots.end(), std::greater<>());
  roots.resize(count);
  return roots;
}

}  // namespace dynspec
