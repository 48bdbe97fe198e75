#pragma once

// Spherical Bessel functions j_n on the real line (including negative
// argument), their first derivatives, Riccati-Bessel values, positive zeros,
// and a bracketed root finder. All functions here are pure.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace dynspec {

struct RootBracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;

  RootBracket(double lo_, double hi_, double flo_, double fhi_)
      : lo(lo_), hi(hi_), f_lo(flo_), f_hi(fhi_) {
    if (!(lo < hi))
      throw std::invalid_argument("RootBracket: lo must be < hi");
    if (!(f_lo * f_hi < 0.0))
      throw std::invalid_argument("RootBracket: no sign change on [lo, hi]");
  }
};

template <class F>
RootBracket make_bracket(F&& f, double lo, double hi) {
  return RootBracket(lo, hi, f(lo), f(hi));
}

namespace detail {

// Taylor series around x = 0; for |x| < 0.5 a handful of terms reach
// double precision without any cancellation.
inline double sph_bessel_series(int n, double x) {
  double dfact = 1.0;  // (2n+1)!!
  for (int k = 3; k <= 2 * n + 1; k += 2) dfact *= k;
  double xn = 1.0;
  for (int i = 0; i < n; ++i) xn *= x;
  const double x2 = x * x;
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k <= 60; ++k) {
    term *= -0.5 * x2 / (k * (2.0 * (n + k) + 1.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return xn / dfact * sum;
}

inline double sph_bessel_positive(int n, double x) {
  if (x < 0.5) return sph_bessel_series(n, x);

  const double j0 = std::sin(x) / x;
  if (n == 0) return j0;
  const double j1 = j0 / x - std::cos(x) / x;
  if (n == 1) return j1;
  if (n == 2) return (3.0 / x) * j1 - j0;

  if (x >= n) {
    // Upward recurrence is stable for x >= n.
    double jm = j0, jc = j1;
    for (int k = 1; k < n; ++k) {
      double jn = ((2.0 * k + 1.0) / x) * jc - jm;
      jm = jc;
      jc = jn;
    }
    return jc;
  }

  // Miller downward recurrence, normalized against j0 or j1
  // (whichever is farther from a zero).
  const int m_start = n + 16 + static_cast<int>(std::ceil(x));
  double jp = 0.0;
  double jc = std::numeric_limits<double>::min() * 1e16;
  double jn_val = 0.0;
  double j1c = 0.0, j0c = 0.0;
  for (int k = m_start; k >= 1; --k) {
    double jm = ((2.0 * k + 1.0) / x) * jc - jp;
    jp = jc;
    jc = jm;
    if (k - 1 == n) jn_val = jc;
    if (k - 1 == 1) j1c = jc;
    if (k - 1 == 0) j0c = jc;
    // Rescale to avoid overflow while recursing down.
    if (std::abs(jc) > 1e250) {
      jc *= 1e-250;
      jp *= 1e-250;
      jn_val *= 1e-250;
      j1c *= 1e-250;
      j0c *= 1e-250;
    }
  }
  const double scale =
      (std::abs(j0) >= std::abs(j1)) ? j0 / j0c : j1 / j1c;
  return jn_val * scale;
}

}  // namespace detail

inline double spherical_bessel(int n, double x) {
  if (n < 0) throw std::domain_error("spherical_bessel: order must be >= 0");
  if (!std::isfinite(x))
    throw std::domain_error("spherical_bessel: x must be finite");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double ax = std::abs(x);
  double v = detail::sph_bessel_positive(n, ax);
  if (x < 0.0 && (n & 1)) v = -v;  // j_n(-x) = (-1)^n j_n(x)
  return v;
}

inline double spherical_bessel_derivative(int n, double x) {
  if (n < 0)
    throw std::domain_error("spherical_bessel_derivative: order must be >= 0");
  if (x == 0.0)
    throw std::domain_error("spherical_bessel_derivative: x must be nonzero");
  // j_n' = j_{n-1} - ((n+1)/x) j_n, with j_{-1}(x) = cos(x)/x.
  const double jnm1 =
      (n == 0) ? std::cos(x) / x : spherical_bessel(n - 1, x);
  return jnm1 - ((n + 1.0) / x) * spherical_bessel(n, x);
}

inline double riccati_bessel(int l, double r, double lam) {
  if (!(lam > 0.0))
    throw std::domain_error("riccati_bessel: lam must be positive");
  if (!(r > 0.0 && r <= 1.0))
    throw std::domain_error("riccati_bessel: r must lie in (0, 1]");
  const double x = r * std::sqrt(lam);
  return x * spherical_bessel(l, x);
}

// Brent's method: bisection-safeguarded inverse quadratic interpolation.
// Terminates once the bracket width drops below tol.
template <class F>
double find_root(F&& f, const RootBracket& bracket, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be > 0");
  double a = bracket.lo, b = bracket.hi;
  double fa = bracket.f_lo, fb = bracket.f_hi;
  double c = a, fc = fa;
  double d = b - a, e = d;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::abs(d) > tol1)
      b += d;
    else
      b += (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

// k-th positive zero of j_n. Scans upward from below the first zero counting
// sign changes (step pi/8; consecutive zeros are never closer than pi), then
// polishes with find_root.
inline double bessel_zero(int n, int k) {
  if (n < 0) throw std::domain_error("bessel_zero: order must be >= 0");
  if (k < 1) throw std::domain_error("bessel_zero: k must be >= 1");
  const double pi = 3.14159265358979323846;
  const double step = pi / 8.0;
  double x = std::max(0.25, 0.5 * n);  // j_n > 0 below its first zero
  double fx = spherical_bessel(n, x);
  int found = 0;
  const double x_cap = (k + 0.5 * n + 6.0) * pi + 20.0;
  while (x < x_cap) {
    const double x2 = x + step;
    const double fx2 = spherical_bessel(n, x2);
    if (fx * fx2 < 0.0) {
      ++found;
      if (found == k) {
        RootBracket br(x, x2, fx, fx2);
        return find_root([n](double t) { return spherical_bessel(n, t); }, br,
                         1e-12);
      }
    }
    x = x2;
    fx = fx2;
  }
  throw std::runtime_error("bessel_zero: scan exceeded search interval for n=" +
                           std::to_string(n) + ", k=" + std::to_string(k));
}

}  // namespace dynspec
