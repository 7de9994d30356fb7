#include "pirpnn/lstsq.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "pirpnn/errors.hpp"

namespace pirpnn {

void RidgeSpec::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ArgumentError("ridge delta must be finite and >= 0");
  if (!(svd_cutoff < 1.0)) throw ArgumentError("svd_cutoff must be < 1");
}

double RidgeSpec::cutoff_for(Eigen::Index p, Eigen::Index q) const {
  if (svd_cutoff >= 0.0) return svd_cutoff;
  return static_cast<double>(std::max(p, q)) * std::numeric_limits<double>::epsilon();
}

template <typename Scalar>
RidgeSolver<Scalar>::RidgeSolver(const Matrix& a, const RidgeSpec& spec)
    : a_(a), spec_(spec), rows_(a.rows()), cols_(a.cols()) {
  spec.validate();
  if (rows_ == 0 || cols_ == 0) throw ArgumentError("ridge_solve: empty matrix");

  const double delta = spec.delta;
  RidgeMethod method = spec.method;
  if (delta == 0.0) {
    method = RidgeMethod::Svd;
  } else if (method == RidgeMethod::Auto) {
    const double fro2 = a.squaredNorm();
    method = (fro2 + delta) / delta <= spec.cholesky_max_condition ? RidgeMethod::Cholesky
                                                                   : RidgeMethod::Qr;
  }
  method_ = method;

  const bool primal = rows_ >= cols_;
  switch (method) {
    case RidgeMethod::Cholesky: {
      if (primal) {
        Matrix gram = a.adjoint() * a;
        gram.diagonal().array() += Scalar(delta);
        CholeskyPrimal f{Eigen::LLT<Matrix>(gram)};
        if (f.llt.info() != Eigen::Success) throw RankDeficiencyError("ridge Cholesky failed");
        fact_ = std::move(f);
      } else {
        Matrix gram = a * a.adjoint();
        gram.diagonal().array() += Scalar(delta);
        CholeskyDual f{Eigen::LLT<Matrix>(gram)};
        if (f.llt.info() != Eigen::Success) throw RankDeficiencyError("ridge Cholesky failed");
        fact_ = std::move(f);
      }
      break;
    }
    case RidgeMethod::Qr: {
      const Scalar root(std::sqrt(delta));
      if (primal) {
        Matrix aug(rows_ + cols_, cols_);
        aug.topRows(rows_) = a;
        aug.bottomRows(cols_) = Matrix::Identity(cols_, cols_) * root;
        fact_ = QrPrimal{Eigen::HouseholderQR<Matrix>(aug)};
      } else {
        Matrix aug(cols_ + rows_, rows_);
        aug.topRows(cols_) = a.adjoint();
        aug.bottomRows(rows_) = Matrix::Identity(rows_, rows_) * root;
        fact_ = QrDual{Eigen::HouseholderQR<Matrix>(aug)};
      }
      break;
    }
    case RidgeMethod::Svd:
    case RidgeMethod::Auto: {
      Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sigma = svd.singularValues();
      const Real smax = sigma.size() > 0 ? sigma[0] : Real(0);
      Svd f{svd.matrixU(), Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(sigma.size()), svd.matrixV()};
      if (delta > 0.0) {
        for (Eigen::Index k = 0; k < sigma.size(); ++k) {
          f.filter[k] = sigma[k] / (sigma[k] * sigma[k] + delta);
          if (sigma[k] > 0) ++rank_;
        }
      } else {
        const Real cut = spec.cutoff_for(rows_, cols_) * smax;
        for (Eigen::Index k = 0; k < sigma.size(); ++k) {
          if (sigma[k] > 0 && sigma[k] >= cut) {
            f.filter[k] = Real(1) / sigma[k];
            ++rank_;
          }
        }
        if (rank_ == 0) throw RankDeficiencyError("pseudoinverse: every singular value is below the cutoff");
      }
      fact_ = std::move(f);
      method_ = RidgeMethod::Svd;
      break;
    }
  }
}

template <typename Scalar>
typename RidgeSolver<Scalar>::Matrix RidgeSolver<Scalar>::solve(const Matrix& b) const {
  if (b.rows() != rows_) {
    throw ArgumentError("ridge_solve: right-hand side has " + std::to_string(b.rows()) +
                        " rows, expected " + std::to_string(rows_));
  }
  if (const auto* f = std::get_if<CholeskyPrimal>(&fact_)) {
    return f->llt.solve(a_.adjoint() * b);
  }
  if (const auto* f = std::get_if<CholeskyDual>(&fact_)) {
    return a_.adjoint() * f->llt.solve(b);
  }
  if (const auto* f = std::get_if<QrPrimal>(&fact_)) {
    Matrix rhs = Matrix::Zero(rows_ + cols_, b.cols());
    rhs.topRows(rows_) = b;
    rhs.applyOnTheLeft(f->qr.householderQ().adjoint());
    return f->qr.matrixQR().topLeftCorner(cols_, cols_).template triangularView<Eigen::Upper>().solve(
        rhs.topRows(cols_));
  }
  if (const auto* f = std::get_if<QrDual>(&fact_)) {
    // [A^H; sqrt(delta) I] = Q R  =>  A^H (A A^H + delta I)^{-1} = Q_top R^{-H}
    Matrix y = f->qr.matrixQR()
                   .topLeftCorner(rows_, rows_)
                   .template triangularView<Eigen::Upper>()
                   .adjoint()
                   .solve(b);
    Matrix padded = Matrix::Zero(cols_ + rows_, b.cols());
    padded.topRows(rows_) = y;
    padded.applyOnTheLeft(f->qr.householderQ());
    return padded.topRows(cols_);
  }
  const auto& f = std::get<Svd>(fact_);
  Matrix tmp = f.u.adjoint() * b;
  tmp = f.filter.template cast<Scalar>().asDiagonal() * tmp;
  return f.v * tmp;
}

template <typename Scalar>
typename RidgeSolver<Scalar>::Matrix RidgeSolver<Scalar>::operator_matrix() const {
  return solve(Matrix::Identity(rows_, rows_));
}

template class RidgeSolver<double>;
template class RidgeSolver<std::complex<double>>;

Eigen::MatrixXd ridge_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const RidgeSpec& spec) {
  if (a.rows() != b.rows()) throw ArgumentError("ridge_solve: dimension mismatch");
  return RidgeSolver<double>(a, spec).solve(b);
}

Eigen::MatrixXcd ridge_solve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const RidgeSpec& spec) {
  if (a.rows() != b.rows()) throw ArgumentError("ridge_solve: dimension mismatch");
  return RidgeSolver<std::complex<double>>(a, spec).solve(b);
}

Eigen::MatrixXd pinv_apply(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double svd_cutoff) {
  RidgeSpec spec;
  spec.svd_cutoff = svd_cutoff;
  return ridge_solve(a, b, spec);
}

Eigen::MatrixXcd pinv_apply(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double svd_cutoff) {
  RidgeSpec spec;
  spec.svd_cutoff = svd_cutoff;
  return ridge_solve(a, b, spec);
}

}  // namespace pirpnn
