#pragma once

// Thin LAPACK wrappers over Eigen containers (column-major, zero-copy).
// Dense nonsymmetric eigenvalues go through dgeev, symmetric through dsyevd,
// symmetric tridiagonal through dstevd.

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

namespace dynspec {

using Matrix = Eigen::MatrixXd;

struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeneralEig {
  std::vector<std::complex<double>> values;  // unordered, as LAPACK returns
  Matrix right_vectors;  // dgeev packed layout (real/imag column pairs)
  bool has_vectors = false;

  // Right eigenvector for value index j, unpacking conjugate pairs.
  Eigen::VectorXcd vector(int j) const {
    if (!has_vectors)
      throw std::logic_error("GeneralEig: eigenvectors were not requested");
    const int n = static_cast<int>(right_vectors.rows());
    Eigen::VectorXcd v(n);
    if (values[j].imag() == 0.0) {
      for (int i = 0; i < n; ++i) v(i) = right_vectors(i, j);
    } else {
      // dgeev stores the pair in two consecutive real columns; the first of
      // the pair has positive imaginary part.
      const bool first = values[j].imag() > 0.0;
      const int jr = first ? j : j - 1;
      const double sign = first ? 1.0 : -1.0;
      for (int i = 0; i < n; ++i)
        v(i) = std::complex<double>(right_vectors(i, jr),
                                    sign * right_vectors(i, jr + 1));
    }
    return v;
  }
};

inline GeneralEig lapack_dgeev(Matrix a, bool with_vectors) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("lapack_dgeev: matrix not square");
  std::vector<double> wr(n), wi(n);
  GeneralEig out;
  out.has_vectors = with_vectors;
  if (with_vectors) out.right_vectors.resize(n, n);
  const int info = LAPACKE_dgeev(
      LAPACK_COL_MAJOR, 'N', with_vectors ? 'V' : 'N', n, a.data(), n,
      wr.data(), wi.data(), nullptr, 1,
      with_vectors ? out.right_vectors.data() : nullptr, with_vectors ? n : 1);
  if (info < 0)
    throw std::invalid_argument("lapack_dgeev: bad argument " +
                                std::to_string(-info));
  if (info > 0)
    throw NonConvergenceError("lapack_dgeev: QR iteration failed to converge");
  out.values.reserve(n);
  for (int i = 0; i < n; ++i) out.values.emplace_back(wr[i], wi[i]);
  return out;
}

// Eigenvalues of a symmetric matrix, ascending. If `vectors` is non-null the
// orthonormal eigenvectors are returned there (column i <-> value i).
inline std::vector<double> lapack_dsyevd(Matrix a, Matrix* vectors = nullptr) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n)
    throw std::invalid_argument("lapack_dsyevd: matrix not square");
  std::vector<double> w(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L',
                                  n, a.data(), n, w.data());
  if (info < 0)
    throw std::invalid_argument("lapack_dsyevd: bad argument " +
                                std::to_string(-info));
  if (info > 0)
    throw NonConvergenceError("lapack_dsyevd: failed to converge");
  if (vectors) *vectors = std::move(a);
  return w;
}

// Eigenvalues of a symmetric tridiagonal matrix, ascending.
inline std::vector<double> lapack_dstevd(std::vector<double> diag,
                                         std::vector<double> off,
                                         Matrix* vectors = nullptr) {
  const int n = static_cast<int>(diag.size());
  if (static_cast<int>(off.size()) != n - 1)
    throw std::invalid_argument("lapack_dstevd: off-diagonal size mismatch");
  Matrix z;
  if (vectors) z.resize(n, n);
  const int info =
      LAPACKE_dstevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', n, diag.data(),
                     off.data(), vectors ? z.data() : nullptr, vectors ? n : 1);
  if (info < 0)
    throw std::invalid_argument("lapack_dstevd: bad argument " +
                                std::to_string(-info));
  if (info > 0)
    throw NonConvergenceError("lapack_dstevd: failed to converge");
  if (vectors) *vectors = std::move(z);
  return diag;
}

}  // namespace dynspec
