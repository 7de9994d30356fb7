#pragma once

// Regularized and pseudoinverse least-squares kernels.
//
// ridge:  X = (A^H A + delta I)^{-1} A^H B      (delta > 0)
// pinv:   X = A^+ B via truncated SVD              (delta = 0)

#include <complex>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace pirpnn {

enum class RidgeMethod {
  Auto,      ///< Cholesky when well conditioned, augmented QR otherwise
  Cholesky,  ///< normal equations on the smaller Gram matrix
  Qr,        ///< Householder QR of the delta-augmented matrix
  Svd,       ///< filtered SVD, sigma / (sigma^2 + delta)
};

struct RidgeSpec {
  double delta = 0.0;
  /// Relative truncation threshold for the SVD path. Negative selects
  /// max(p, q) * machine epsilon.
  double svd_cutoff = -1.0;
  RidgeMethod method = RidgeMethod::Auto;
  /// Auto uses Cholesky only if (||A||_F^2 + delta) / delta stays below this.
  double cholesky_max_condition = 1e8;

  void validate() const;
  double cutoff_for(Eigen::Index p, Eigen::Index q) const;
};

/// Factorization handle for one matrix A, reusable for many right-hand sides.
/// Immutable after construction.
template <typename Scalar>
class RidgeSolver {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  RidgeSolver(const Matrix& a, const RidgeSpec& spec);

  /// q x r solution for a p x r right-hand side.
  Matrix solve(const Matrix& b) const;
  /// Explicit q x p solution operator (solve applied to the identity).
  Matrix operator_matrix() const;

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  RidgeMethod method() const { return method_; }
  /// Singular values kept by the SVD path (empty for other paths).
  Eigen::Index rank() const { return rank_; }

 private:
  struct CholeskyPrimal { Eigen::LLT<Matrix> llt; };
  struct CholeskyDual { Eigen::LLT<Matrix> llt; };
  struct QrPrimal { Eigen::HouseholderQR<Matrix> qr; };
  struct QrDual { Eigen::HouseholderQR<Matrix> qr; };
  struct Svd {
    Matrix u;
    Eigen::Matrix<Real, Eigen::Dynamic, 1> filter;
    Matrix v;
  };

  Matrix a_;
  RidgeSpec spec_;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  Eigen::Index rank_ = 0;
  RidgeMethod method_ = RidgeMethod::Auto;
  std::variant<CholeskyPrimal, CholeskyDual, QrPrimal, QrDual, Svd> fact_;
};

extern template class RidgeSolver<double>;
extern template class RidgeSolver<std::complex<double>>;

Eigen::MatrixXd ridge_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const RidgeSpec& spec);
Eigen::MatrixXcd ridge_solve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                             const RidgeSpec& spec);

/// A^+ B, dropping singular values below svd_cutoff * sigma_max.
Eigen::MatrixXd pinv_apply(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           double svd_cutoff = -1.0);
Eigen::MatrixXcd pinv_apply(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                            double svd_cutoff = -1.0);

/// Same contract as ridge_solve for a sparse A, without densifying it.
/// delta > 0: sparse QR of [A; sqrt(delta) I].
/// delta = 0: complete orthogonal decomposition built from two rank-revealing
/// sparse QR factorizations, giving the minimum-norm least-squares solution.
Eigen::MatrixXd sparse_rank_revealing_solve(const Eigen::SparseMatrix<double>& a,
                                            const Eigen::MatrixXd& b, const RidgeSpec& spec);

}  // namespace pirpnn
