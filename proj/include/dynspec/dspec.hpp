#pragma once

// Finite-difference discretization of the dynamo block operator and of its
// self-adjoint companion, dense eigenvalue computation, the N-vs-2N
// convergence protocol, Stefani parameter sweeps with event detection, and
// per-eigenvalue verification against the closed-form enclosures.
//
// Grid: uniform nodes r_i = i h, i = 1..N, h = 1/N. The singular endpoint
// r = 0 is excluded (solutions vanish there). The Robin condition
// y'(1) + theta y(1) = 0 is eliminated through a ghost node, and the
// resulting boundary row is brought to symmetric form by the half-weight
// row scaling (a diagonal similarity, so eigenvalues are untouched). All
// blocks below live in that scaled frame.

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "dynspec/enclosure.hpp"
#include "dynspec/linalg.hpp"
#include "dynspec/profiles.hpp"

namespace dynspec {

struct MatchingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grid {
  int N;
  double h;
  explicit Grid(int n) : N(n), h(1.0 / n) {
    if (n < 16) throw std::invalid_argument("Grid: N must be >= 16");
  }
  double node(int i) const { return i * h; }
};

struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;
};

namespace detail {

// Symmetric tridiagonal stencil of -d^2/dr^2 + l(l+1)/r^2 on the grid.
// Size N for finite theta (Robin row included), N-1 for Dirichlet.
inline Tridiag bessel_tridiag(ModeIndex l, BoundaryParam theta, const Grid& g) {
  const double h = g.h;
  const double inv_h2 = 1.0 / (h * h);
  const double ll1 = l.value * (l.value + 1.0);
  const int n = theta.is_infinite() ? g.N - 1 : g.N;
  Tridiag t;
  t.diag.resize(n);
  t.off.assign(n - 1, -inv_h2);
  for (int i = 0; i < n; ++i) {
    const double r = g.node(i + 1);
    t.diag[i] = 2.0 * inv_h2 + ll1 / (r * r);
  }
  if (!theta.is_infinite()) {
    t.diag[n - 1] = (2.0 + 2.0 * h * theta.value()) * inv_h2 + ll1;
    t.off[n - 2] = -std::sqrt(2.0) * inv_h2;
  }
  return t;
}

inline Matrix dense_from_tridiag(const Tridiag& t) {
  const int n = static_cast<int>(t.diag.size());
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = t.diag[i];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = t.off[i];
  }
  return m;
}

// Central-difference rows of d/dr at nodes 1..N-1 acting on the first-block
// coordinates (y(0) = 0 on the left; for finite theta the column at r = 1
// carries the sqrt(2) of the scaled frame, for Dirichlet y(1) = 0).
inline Matrix derivative_rows(BoundaryParam theta, const Grid& g) {
  const int n2 = g.N - 1;
  const int n1 = theta.is_infinite() ? g.N - 1 : g.N;
  const double inv_2h = 0.5 * g.N;
  Matrix d = Matrix::Zero(n2, n1);
  for (int i = 0; i < n2; ++i) {
    if (i > 0) d(i, i - 1) = -inv_2h;
    if (i + 1 < n1) {
      d(i, i + 1) =
          (!theta.is_infinite() && i + 1 == n1 - 1) ? std::sqrt(2.0) * inv_2h
                                                    : inv_2h;
    }
  }
  return d;
}

}  // namespace detail

// Dense symmetric discretization of A_theta (size N, or N-1 for Dirichlet).
inline Matrix discretize_bessel(ModeIndex l, BoundaryParam theta, int N) {
  return detail::dense_from_tridiag(detail::bessel_tridiag(l, theta, Grid(N)));
}

// Eigenvalues of the discretized A_theta, ascending.
inline std::vector<double> discretize_bessel_values(ModeIndex l,
                                                    BoundaryParam theta,
                                                    int N) {
  const Tridiag t = detail::bessel_tridiag(l, theta, Grid(N));
  return lapack_dstevd(t.diag, t.off);
}

struct DynamoMatrix {
  Matrix m;
  Grid grid;
  ProblemConstants constants;
  int n1;  // size of the theta block
};

inline DynamoMatrix assemble_dynamo(ModeIndex l, BoundaryParam theta,
                                    const AlphaProfile& profile, int N) {
  const Grid g(N);
  const Tridiag at = detail::bessel_tridiag(l, theta, g);
  const Tridiag ad = detail::bessel_tridiag(l, BoundaryParam::infinite(), g);
  const int n1 = static_cast<int>(at.diag.size());
  const int n2 = N - 1;
  const Matrix a_theta = detail::dense_from_tridiag(at);
  const Matrix d_rows = detail::derivative_rows(theta, g);

  Matrix m = Matrix::Zero(n1 + n2, n1 + n2);
  m.topLeftCorner(n1, n1) = -a_theta;
  for (int j = 0; j < n2; ++j) {
    const double r = g.node(j + 1);
    m(j, n1 + j) = profile(r);  // alpha coupling; the Robin row sees y2(1) = 0
  }
  // A_{theta,alpha} = alpha A_theta - alpha' D restricted to the Dirichlet rows.
  Matrix g21 = a_theta.topRows(n2);
  for (int i = 0; i < n2; ++i) {
    const double r = g.node(i + 1);
    g21.row(i) = profile(r) * g21.row(i) - profile.derivative(r) * d_rows.row(i);
  }
  m.block(n1, 0, n2, n1) = g21;
  m.bottomRightCorner(n2, n2) = -detail::dense_from_tridiag(ad);

  return {std::move(m), g, make_constants(l, theta, profile), n1};
}

struct SelfAdjointMatrix {
  Matrix m;
  Grid grid;
  ProblemConstants constants;
  int n1;
  Matrix a_sqrt;      // A_theta^{1/2}
  Matrix a_inv_sqrt;  // A_theta^{-1/2}
};

inline SelfAdjointMatrix assemble_selfadjoint(ModeIndex l, BoundaryParam theta,
                                              const AlphaProfile& profile,
                                              int N) {
  const Grid g(N);
  const Tridiag at = detail::bessel_tridiag(l, theta, g);
  const Tridiag ad = detail::bessel_tridiag(l, BoundaryParam::infinite(), g);
  const int n1 = static_cast<int>(at.diag.size());
  const int n2 = N - 1;

  Matrix q;
  std::vector<double> w = lapack_dstevd(at.diag, at.off, &q);
  Eigen::VectorXd sq(n1), isq(n1);
  for (int i = 0; i < n1; ++i) {
    if (!(w[i] > 0.0))
      throw std::runtime_error(
          "assemble_selfadjoint: discretized A_theta is not positive");
    sq(i) = std::sqrt(w[i]);
    isq(i) = 1.0 / sq(i);
  }
  Matrix a_sqrt = q * sq.asDiagonal() * q.transpose();
  Matrix a_inv_sqrt = q * isq.asDiagonal() * q.transpose();

  Matrix m = Matrix::Zero(n1 + n2, n1 + n2);
  m.topLeftCorner(n1, n1) = -detail::dense_from_tridiag(at);
  Matrix s12 = a_sqrt.leftCols(n2);
  for (int j = 0; j < n2; ++j) s12.col(j) *= profile(g.node(j + 1));
  m.topRightCorner(n1, n2) = s12;
  m.bottomLeftCorner(n2, n1) = s12.transpose();
  m.bottomRightCorner(n2, n2) = -detail::dense_from_tridiag(ad);

  return {std::move(m),      g,  make_constants(l, theta, profile),
          n1,                std::move(a_sqrt), std::move(a_inv_sqrt)};
}

// The bounded residual block T = -alpha' D A_theta^{-1/2} of the transformed
// operator; S + T is exactly similar to the assembled dynamo matrix.
inline Matrix residual_block(const SelfAdjointMatrix& s,
                             const AlphaProfile& profile) {
  const int n2 = s.grid.N - 1;
  Matrix t = detail::derivative_rows(s.constants.theta, s.grid) * s.a_inv_sqrt;
  for (int i = 0; i < n2; ++i)
    t.row(i) *= -profile.derivative(s.grid.node(i + 1));
  return t;
}

inline Matrix transformed_dynamo(const SelfAdjointMatrix& s,
                                 const AlphaProfile& profile) {
  Matrix b = s.m;
  b.block(s.n1, 0, s.grid.N - 1, s.n1) += residual_block(s, profile);
  return b;
}

struct RawSpectrum {
  std::vector<std::complex<double>> values;  // sorted by Re desc, then Im desc
  std::vector<double> leading_residuals;     // ||Mv - lam v||/||v||, leading 10
};

// Full dense nonsymmetric spectrum. With vectors, the 10 leading
// eigenpairs are residual-checked against 1e-8 * ||M||_inf.
inline RawSpectrum eig_general(const Matrix& m, bool with_vectors = true) {
  GeneralEig eig = lapack_dgeev(m, with_vectors);
  const int n = static_cast<int>(eig.values.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (eig.values[a].real() != eig.values[b].real())
      return eig.values[a].real() > eig.values[b].real();
    return eig.values[a].imag() > eig.values[b].imag();
  });
  RawSpectrum out;
  out.values.reserve(n);
  for (int i : order) out.values.push_back(eig.values[i]);
  if (with_vectors) {
    const double norm_m = m.cwiseAbs().rowwise().sum().maxCoeff();
    const int lead = std::min(10, n);
    for (int i = 0; i < lead; ++i) {
      const int j = order[i];
      const Eigen::VectorXcd v = eig.vector(j);
      const double res =
          (m.cast<std::complex<double>>() * v - eig.values[j] * v).norm() /
          v.norm();
      out.leading_residuals.push_back(res);
      if (!(res < 1e-8 * norm_m))
        throw NonConvergenceError(
            "eig_general: leading eigenpair residual exceeds 1e-8 * ||M||");
    }
  }
  return out;
}

// All real eigenvalues of a symmetric matrix, ascending, with a sampled
// orthogonality check of the implied transform.
inline std::vector<double> eig_symmetric(const Matrix& m) {
  Matrix q;
  std::vector<double> w = lapack_dsyevd(m, &q);
  const int n = static_cast<int>(w.size());
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int i = pick(rng), j = pick(rng);
    const double dot = q.col(i).dot(q.col(j));
    const double expect = i == j ? 1.0 : 0.0;
    if (!(std::abs(dot - expect) < 1e-10))
      throw NonConvergenceError("eig_symmetric: orthogonality residual too large");
  }
  return w;
}

struct EigenvalueRecord {
  std::complex<double> value;
  double convergence_err;  // |lam_N - lam_2N|; NaN when unmatched
  bool converged;
};

struct SpectrumResult {
  std::vector<EigenvalueRecord> eigenvalues;  // fine-grid values, Re desc
  int grid_fine;
  int grid_coarse;
  int matched;  // leading records carrying a convergence estimate
};

namespace detail {

// Greedy nearest-neighbour matching of the `top_count` leading fine-grid
// eigenvalues against the coarse list. Ambiguous pairings (second-nearest
// closer than twice the nearest) raise MatchingError, except when both
// candidates are within 1e-6 * scale, where either choice gives the same
// convergence estimate (conjugate pairs straddling the axis, numerically
// split multiple eigenvalues).
inline SpectrumResult match_spectra(const RawSpectrum& coarse,
                                    const RawSpectrum& fine, int grid_coarse,
                                    int grid_fine, int top_count, double tol) {
  SpectrumResult out;
  out.grid_fine = grid_fine;
  out.grid_coarse = grid_coarse;
  const int n_fine = static_cast<int>(fine.values.size());
  const int lead = std::min(top_count, n_fine);
  std::vector<bool> used(coarse.values.size(), false);
  out.eigenvalues.reserve(n_fine);
  for (int i = 0; i < lead; ++i) {
    const std::complex<double> lam = fine.values[i];
    int best = -1;
    double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
    for (std::size_t j = 0; j < coarse.values.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(coarse.values[j] - lam);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        best = static_cast<int>(j);
      } else if (d < d2) {
        d2 = d;
      }
    }
    if (best < 0)
      throw MatchingError("spectrum: coarse list exhausted during matching");
    const double scale = std::max(1.0, std::abs(lam));
    if (d2 < 2.0 * d1 && d2 > 1e-6 * scale)
      throw MatchingError(
          "spectrum: ambiguous eigenvalue pairing between grids (gap ratio < 2)");
    used[best] = true;
    out.eigenvalues.push_back({lam, d1, d1 < tol * scale});
  }
  for (int i = lead; i < n_fine; ++i)
    out.eigenvalues.push_back(
        {fine.values[i], std::numeric_limits<double>::quiet_NaN(), false});
  out.matched = lead;
  return out;
}

}  // namespace detail

// Runs the eigensolver on grids N and 2N, reports the 2N values and, for the
// `top_count` leading ones, the convergence estimate |lam_N - lam_2N|.
inline SpectrumResult spectrum(ModeIndex l, BoundaryParam theta,
                               const AlphaProfile& profile, int N,
                               int top_count, double tol = 1e-3,
                               bool check_residuals = true) {
  if (N < 32) throw std::invalid_argument("spectrum: N must be >= 32");
  const RawSpectrum coarse =
      eig_general(assemble_dynamo(l, theta, profile, N).m, check_residuals);
  const RawSpectrum fine =
      eig_general(assemble_dynamo(l, theta, profile, 2 * N).m, check_residuals);
  return detail::match_spectra(coarse, fine, N, 2 * N, top_count, tol);
}

// Number of positive eigenvalues of -A_inf + alpha^2 (Schur-complement count
// of the positive spectrum of the self-adjoint companion).
inline int positive_count(ModeIndex l, const AlphaProfile& profile, int N) {
  if (N < 32) throw std::invalid_argument("positive_count: N must be >= 32");
  const Grid g(N);
  Tridiag t = detail::bessel_tridiag(l, BoundaryParam::infinite(), g);
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double a = profile(g.node(static_cast<int>(i) + 1));
    t.diag[i] = -t.diag[i] + a * a;
  }
  for (double& x : t.off) x = -x;
  const std::vector<double> w = lapack_dstevd(t.diag, t.off);
  return static_cast<int>(
      std::count_if(w.begin(), w.end(), [](double x) { return x > 0.0; }));
}

// Ascending eigenvalues of -A_inf + alpha^2 on the grid (used by the
// variational comparison (vp) and by positive_count's cross-check).
inline std::vector<double> shifted_dirichlet_values(ModeIndex l,
                                                    const AlphaProfile& profile,
                                                    int N) {
  const Grid g(N);
  Tridiag t = detail::bessel_tridiag(l, BoundaryParam::infinite(), g);
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double a = profile(g.node(static_cast<int>(i) + 1));
    t.diag[i] = -t.diag[i] + a * a;
  }
  for (double& x : t.off) x = -x;
  return lapack_dstevd(t.diag, t.off);
}

struct EnclosureFlags {
  std::complex<double> value;
  double tau;
  bool in_sigma;
  bool strip;
  bool disc;
  bool combined;
  bool pass() const { return in_sigma && strip && disc && combined; }
};

struct VerifyReport {
  std::vector<EnclosureFlags> flags;  // converged eigenvalues only
  RightBoundCase bounds;
  bool all_pass;
};

namespace detail {

// dist(lam, Sigma_theta) <= tau, probed by exact membership of the center
// and of points on the tau-circle (Sigma is closed; f grows toward the left
// and toward the real axis, so the circle sampling is adequate).
inline bool sigma_within(ComplexPoint lam, double tau,
                         const ProblemConstants& c) {
  if (in_sigma(lam, c)) return true;
  // ray proximity
  if (lam.real() <= -c.lam1_theta + tau && std::abs(lam.imag()) <= tau)
    return true;
  constexpr int kProbes = 64;
  for (int k = 0; k < kProbes; ++k) {
    const double phi = 2.0 * 3.14159265358979323846 * k / kProbes;
    const ComplexPoint p = lam + tau * ComplexPoint(std::cos(phi), std::sin(phi));
    if (region_matches(RegionTag::Z0, p, c)) return true;
    if (f_value(p, c) >= 1.0) return true;
  }
  return false;
}

}  // namespace detail

inline VerifyReport verify_enclosure(const SpectrumResult& result,
                                     const ProblemConstants& c,
                                     std::span<const double> s_spectrum) {
  VerifyReport rep{{}, right_bound_a(c), true};
  const double sp = c.alpha_prime_norm;
  for (const auto& rec : result.eigenvalues) {
    if (!rec.converged) continue;
    const double tau = std::max(rec.convergence_err, 1e-6);
    EnclosureFlags f{};
    f.value = rec.value;
    f.tau = tau;
    f.in_sigma = detail::sigma_within(rec.value, tau, c);
    f.strip = std::abs(rec.value.imag()) <= sp + tau &&
              rec.value.real() <= rep.bounds.b_theta + tau;
    double dist = std::numeric_limits<double>::infinity();
    for (double s : s_spectrum)
      dist = std::min(dist, std::abs(rec.value - std::complex<double>(s, 0)));
    f.disc = dist <= sp + tau;
    f.combined = rec.value.real() <=
                 std::min(rep.bounds.a_theta, rep.bounds.b_theta) + tau;
    rep.all_pass = rep.all_pass && f.pass();
    rep.flags.push_back(f);
  }
  return rep;
}

enum class SweepEventKind { Merge, Cross, Realize };

struct SweepEvent {
  SweepEventKind kind;
  double c_lo;
  double c_hi;
  double c_refined;
};

struct SweepPoint {
  double C;
  SpectrumResult spec;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<SweepEvent> events;
};

namespace detail {

inline std::complex<double> leading_eigenvalue(ModeIndex l, BoundaryParam theta,
                                               double C, int n_fine) {
  const RawSpectrum raw = eig_general(
      assemble_dynamo(l, theta, AlphaProfile::stefani(C), n_fine).m, false);
  return raw.values.front();
}

inline bool oscillatory(std::complex<double> lam) {
  return std::abs(lam.imag()) > 1e-4 * std::max(1.0, std::abs(lam));
}

// Bisect a boolean indicator of C down to width 1e-3.
template <class Pred>
SweepEvent refine_event(SweepEventKind kind, double c_lo, double c_hi,
                        Pred&& flips_at_hi) {
  double lo = c_lo, hi = c_hi;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (flips_at_hi(mid) ? hi : lo) = mid;
  }
  return {kind, c_lo, c_hi, 0.5 * (lo + hi)};
}

}  // namespace detail

// Spectra along a sweep of Stefani amplitudes C (fine grid N, convergence
// against N/2) plus MERGE / CROSS / REALIZE events, bisection-refined on
// single fine-grid indicators. jobs > 1 evaluates the C values in parallel.
inline SweepResult sweep_stefani(ModeIndex l, BoundaryParam theta,
                                 const std::vector<double>& c_values, int N,
                                 int top_count, int jobs = 1) {
  if (N % 2 != 0 || N < 64)
    throw std::invalid_argument("sweep_stefani: N must be even and >= 64");
  if (!std::is_sorted(c_values.begin(), c_values.end()))
    throw std::invalid_argument("sweep_stefani: C values must be ascending");

  auto eval_point = [&](double C) -> SpectrumResult {
    try {
      return spectrum(l, theta, AlphaProfile::stefani(C), N / 2, top_count,
                      1e-3, false);
    } catch (const MatchingError&) {
      // Near an eigenvalue collision the two grids cannot be paired; keep
      // the fine-grid values with no convergence estimate.
      const RawSpectrum fine = eig_general(
          assemble_dynamo(l, theta, AlphaProfile::stefani(C), N).m, false);
      SpectrumResult r;
      r.grid_fine = N;
      r.grid_coarse = N / 2;
      r.matched = 0;
      for (const auto& v : fine.values)
        r.eigenvalues.push_back(
            {v, std::numeric_limits<double>::quiet_NaN(), false});
      return r;
    }
  };

  SweepResult out;
  out.points.resize(c_values.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < c_values.size(); ++i)
      out.points[i] = {c_values[i], eval_point(c_values[i])};
  } else {
    std::size_t next = 0;
    std::mutex mtx;
    auto worker = [&]() {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mtx);
          if (next >= c_values.size()) return;
          i = next++;
        }
        out.points[i] = {c_values[i], eval_point(c_values[i])};
      }
    };
    std::vector<std::future<void>> pool;
    for (int t = 0; t < jobs; ++t)
      pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  }

  auto lead = [&](std::size_t i) { return out.points[i].spec.eigenvalues.front().value; };
  auto osc_at = [&](double C) {
    return detail::oscillatory(detail::leading_eigenvalue(l, theta, C, N));
  };
  auto pos_at = [&](double C) {
    return detail::leading_eigenvalue(l, theta, C, N).real() > 0.0;
  };

  bool prev_osc = detail::oscillatory(lead(0));
  bool prev_pos = lead(0).real() > 0.0;
  for (std::size_t i = 1; i < c_values.size(); ++i) {
    const bool osc = detail::oscillatory(lead(i));
    const bool pos = lead(i).real() > 0.0;
    if (osc && !prev_osc)
      out.events.push_back(detail::refine_event(
          SweepEventKind::Merge, c_values[i - 1], c_values[i], osc_at));
    if (!osc && prev_osc)
      out.events.push_back(detail::refine_event(
          SweepEventKind::Realize, c_values[i - 1], c_values[i],
          [&](double C) { return !osc_at(C); }));
    if (pos != prev_pos)
      out.events.push_back(detail::refine_event(
          SweepEventKind::Cross, c_values[i - 1], c_values[i],
          [&](double C) { return pos_at(C) == pos; }));
    prev_osc = osc;
    prev_pos = pos;
  }
  return out;
}

}  // namespace dynspec
