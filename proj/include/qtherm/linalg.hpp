#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include "qtherm/errors.hpp"

// Dense complex-matrix kernel for small Hilbert spaces (d <= ~64):
// Hermitian eigendecomposition, spectral matrix functions, tensor products,
// partial traces and commutators. All functions are pure; inputs are never
// modified. Composite indices are ordered first-factor-most-significant
// throughout.

namespace qtherm {

template <typename Scalar>
using DenseMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = DenseMatrix<double>;
using CVector = DenseVector<double>;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultHermitianTol = 1e-12;
inline constexpr double kDefaultZeroClamp = 1e-14;

/// Largest entry magnitude, zero for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// ||a - a^dag||_max; the distance from exact Hermiticity.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("hermiticity_defect: matrix is not square");
  }
  return max_abs(a.derived() - a.derived().adjoint().eval());
}

namespace detail {

inline void require_square_same_dim(Index ar, Index ac, Index br, Index bc,
                                    const char* who) {
  if (ar != ac || br != bc || ar != br) {
    std::ostringstream os;
    os << who << ": dimension mismatch (" << ar << "x" << ac << " vs " << br
       << "x" << bc << ")";
    throw DimensionMismatch(os.str());
  }
}

}  // namespace detail

/// ab - ba. Traceless by construction up to roundoff.
template <typename DerivedA, typename DerivedB>
DenseMatrix<typename Eigen::NumTraits<typename DerivedA::Scalar>::Real>
commutator(const Eigen::MatrixBase<DerivedA>& a,
           const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_square_same_dim(a.rows(), a.cols(), b.rows(), b.cols(),
                                  "commutator");
  return a.derived() * b.derived() - b.derived() * a.derived();
}

/// ab + ba.
template <typename DerivedA, typename DerivedB>
DenseMatrix<typename Eigen::NumTraits<typename DerivedA::Scalar>::Real>
anticommutator(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_square_same_dim(a.rows(), a.cols(), b.rows(), b.cols(),
                                  "anticommutator");
  return a.derived() * b.derived() + b.derived() * a.derived();
}

/// Kronecker product with the first factor most significant: the result
/// entry at (i*rows(b)+k, j*cols(b)+l) equals a(i,j)*b(k,l).
template <typename DerivedA, typename DerivedB>
DenseMatrix<typename Eigen::NumTraits<typename DerivedA::Scalar>::Real>
tensor_product(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b) {
  using Out =
      DenseMatrix<typename Eigen::NumTraits<typename DerivedA::Scalar>::Real>;
  Out out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.derived();
    }
  }
  return out;
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// orthonormal eigenvector columns, a = V diag(lambda) V^dag.
struct HermitianEigenSystem {
  RealVector eigenvalues;
  Matrix eigenvectors;

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
  }
};

/// Diagonalize a Hermitian matrix. The input is symmetrized before the
/// solve; a Hermiticity defect above `hermiticity_tol` is an error.
inline HermitianEigenSystem eig_hermitian(
    const Matrix& a, double hermiticity_tol = kDefaultHermitianTol) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("eig_hermitian: matrix is not square");
  }
  const double defect = hermiticity_defect(a);
  if (defect > hermiticity_tol) {
    std::ostringstream os;
    os << "eig_hermitian: Hermiticity defect " << defect << " exceeds "
       << hermiticity_tol;
    throw NotHermitian(os.str());
  }
  Matrix sym = 0.5 * (a + a.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("eig_hermitian: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Spectral function of a Hermitian matrix: V f(lambda) V^dag.
inline Matrix hermitian_matrix_function(
    const Matrix& a, const std::function<double(double)>& f,
    double hermiticity_tol = kDefaultHermitianTol) {
  HermitianEigenSystem es = eig_hermitian(a, hermiticity_tol);
  RealVector mapped(es.eigenvalues.size());
  for (Index i = 0; i < mapped.size(); ++i) {
    mapped[i] = f(es.eigenvalues[i]);
  }
  return es.eigenvectors * mapped.asDiagonal() * es.eigenvectors.adjoint();
}

/// Matrix exponential of a Hermitian matrix.
inline Matrix exp_hermitian(const Matrix& a,
                            double hermiticity_tol = kDefaultHermitianTol) {
  return hermitian_matrix_function(
      a, [](double x) { return std::exp(x); }, hermiticity_tol);
}

/// Matrix logarithm of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues within `zero_clamp` of zero are mapped to log(zero_clamp):
/// they belong to (numerically) empty directions, and every downstream
/// entropy-like quantity multiplies the logarithm by the same near-zero
/// eigenvalue, realizing the 0*log(0) -> 0 convention. An eigenvalue below
/// -zero_clamp means the input is not a state and raises DomainError.
inline Matrix log_psd(const Matrix& a, double zero_clamp = kDefaultZeroClamp,
                      double hermiticity_tol = kDefaultHermitianTol) {
  HermitianEigenSystem es = eig_hermitian(a, hermiticity_tol);
  RealVector mapped(es.eigenvalues.size());
  for (Index i = 0; i < mapped.size(); ++i) {
    const double lam = es.eigenvalues[i];
    if (lam < -zero_clamp) {
      std::ostringstream os;
      os << "log_psd: eigenvalue " << lam << " below -" << zero_clamp
         << " (matrix not positive semidefinite)";
      throw DomainError(os.str());
    }
    mapped[i] = std::log(std::max(lam, zero_clamp));
  }
  return es.eigenvectors * mapped.asDiagonal() * es.eigenvectors.adjoint();
}

/// Trace out every subsystem not listed in `keep`.
///
/// `dims` lists the subsystem dimensions (first factor most significant);
/// their product must equal the matrix dimension. `keep` holds the indices
/// of subsystems to retain, and the result lives on their tensor product in
/// the original relative order. The trace is preserved exactly up to
/// floating-point summation.
inline Matrix partial_trace(const Matrix& rho, const std::vector<Index>& dims,
                            const std::vector<int>& keep) {
  if (rho.rows() != rho.cols()) {
    throw DimensionMismatch("partial_trace: matrix is not square");
  }
  Index total = 1;
  for (Index d : dims) {
    if (d <= 0) throw DimensionMismatch("partial_trace: nonpositive dim");
    total *= d;
  }
  if (total != rho.rows()) {
    std::ostringstream os;
    os << "partial_trace: product of dims " << total
       << " does not match matrix dimension " << rho.rows();
    throw DimensionMismatch(os.str());
  }
  const int n = static_cast<int>(dims.size());
  std::vector<char> kept(n, 0);
  for (int k : keep) {
    if (k < 0 || k >= n) throw BadSplit("partial_trace: keep index out of range");
    if (kept[k]) throw BadSplit("partial_trace: repeated keep index");
    kept[k] = 1;
  }
  if (keep.empty()) throw BadSplit("partial_trace: keep set is empty");

  Index kept_dim = 1, traced_dim = 1;
  for (int s = 0; s < n; ++s) {
    (kept[s] ? kept_dim : traced_dim) *= dims[s];
  }

  // Map each full index onto its (kept, traced) sub-index pair once, then
  // accumulate rho over matching traced parts.
  std::vector<Index> kept_part(total), traced_part(total);
  for (Index full = 0; full < total; ++full) {
    Index rem = full, kp = 0, tp = 0;
    for (int s = 0; s < n; ++s) {
      Index stride = 1;
      for (int r = s + 1; r < n; ++r) stride *= dims[r];
      const Index digit = rem / stride;
      rem %= stride;
      if (kept[s]) {
        kp = kp * dims[s] + digit;
      } else {
        tp = tp * dims[s] + digit;
      }
    }
    kept_part[full] = kp;
    traced_part[full] = tp;
  }

  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (Index col = 0; col < total; ++col) {
    for (Index row = 0; row < total; ++row) {
      if (traced_part[row] == traced_part[col]) {
        out(kept_part[row], kept_part[col]) += rho(row, col);
      }
    }
  }
  return out;
}

}  // namespace qtherm
