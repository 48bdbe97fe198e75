#pragma once

// Eigenvalues lambda_k(theta) of the Bessel operators A_theta on (0,1] with
// boundary condition x'(1) + theta x(1) = 0 (theta = infinity: x(1) = 0).
// Dirichlet and theta = l eigenvalues come straight from Bessel zeros; a
// general finite theta is located as the root of the Weyl-Titchmarsh
// function m_inf between consecutive Dirichlet eigenvalues.

#include <cmath>
#include <stdexcept>

#include "dynspec/specfun.hpp"

namespace dynspec {

struct ModeIndex {
  int value;
  explicit ModeIndex(int l) : value(l) {
    if (l < 1) throw std::domain_error("ModeIndex: l must be >= 1");
  }
};

class BoundaryParam {
 public:
  static BoundaryParam finite(double v) {
    if (!(v >= 0.0))
      throw std::domain_error("BoundaryParam: finite theta must be >= 0");
    return BoundaryParam(false, v);
  }
  static BoundaryParam infinite() { return BoundaryParam(true, 0.0); }

  bool is_infinite() const { return infinite_; }
  double value() const {
    if (infinite_)
      throw std::logic_error("BoundaryParam: no finite value for theta = inf");
    return value_;
  }

 private:
  BoundaryParam(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

// m_inf(lambda) = -sqrt(lambda) J'_{l+1/2}(sqrt(lambda)) / J_{l+1/2}(sqrt(lambda)) - 1/2.
// In spherical form this equals -sqrt(lambda) j_l'/j_l - 1, and with the
// derivative identity j_l' = j_{l-1} - ((l+1)/x) j_l it reduces to
// l - x j_{l-1}(x)/j_l(x), which is what we evaluate.
inline double weyl_m(ModeIndex l, double lam) {
  if (!(lam > 0.0)) throw std::domain_error("weyl_m: lam must be positive");
  const double x = std::sqrt(lam);
  const double jl = spherical_bessel(l.value, x);
  if (jl == 0.0)
    throw std::domain_error("weyl_m: lambda is a pole (Dirichlet eigenvalue)");
  return l.value - x * spherical_bessel(l.value - 1, x) / jl;
}

inline double operator_eigenvalue(ModeIndex l, BoundaryParam theta, int k) {
  if (k < 1) throw std::domain_error("operator_eigenvalue: k must be >= 1");
  if (theta.is_infinite()) {
    const double z = bessel_zero(l.value, k);
    return z * z;
  }
  const double th = theta.value();
  const double zk = bessel_zero(l.value, k);
  const double lam_hi = zk * zk;
  double lam_lo = 0.0;
  if (k > 1) {
    const double zkm1 = bessel_zero(l.value, k - 1);
    lam_lo = zkm1 * zkm1;
  }
  // m_inf increases from -inf (or -(l+1) on the first interval) to +inf on
  // (lambda_{k-1}(inf), lambda_k(inf)), so the level set m_inf = theta has
  // exactly one point there.
  const double eps = 1e-9 * lam_hi;
  auto g = [&](double lam) { return weyl_m(l, lam) - th; };
  RootBracket br = make_bracket(g, lam_lo + eps, lam_hi - eps);
  return find_root(g, br, 1e-11 * lam_hi);
}

}  // namespace dynspec
