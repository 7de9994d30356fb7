#include <cmath>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseQR>

#include "pirpnn/errors.hpp"
#include "pirpnn/lstsq.hpp"

namespace pirpnn {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using SparseQr = Eigen::SparseQR<SpMat, Eigen::COLAMDOrdering<int>>;

void factor(SparseQr& qr, SpMat m, double cutoff) {
  m.makeCompressed();
  if (cutoff > 0.0) {
    double max_col = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) max_col = std::max(max_col, m.col(k).norm());
    qr.setPivotThreshold(cutoff * max_col);
  }
  qr.compute(m);
  if (qr.info() != Eigen::Success) throw RankDeficiencyError("sparse QR factorization failed");
}

// Upper-trapezoidal leading `rank` rows of R (rank x cols), as a sparse matrix.
SpMat leading_rows(const SparseQr& qr, Eigen::Index rank) {
  SpMat r = qr.matrixR();
  return r.topRows(rank);
}

// Minimum-norm solution for a tall (rows >= cols) matrix:
//   A P = Q1 [T; 0],  T^T P2 = Q2 [R2; 0]
//   x = P Q2 [R2^{-T} P2^T (Q1^T b)_{0:r}; 0]
Eigen::MatrixXd cod_tall(const SpMat& a, const Eigen::MatrixXd& b, double cutoff) {
  SparseQr qr1;
  factor(qr1, a, cutoff);
  const Eigen::Index rank = qr1.rank();
  if (rank == 0) throw RankDeficiencyError("sparse pseudoinverse: matrix has numerical rank 0");

  Eigen::MatrixXd c = qr1.matrixQ().transpose() * b;
  c.conservativeResize(rank, Eigen::NoChange);

  SpMat t_transpose = SpMat(leading_rows(qr1, rank).transpose());
  SparseQr qr2;
  factor(qr2, t_transpose, 0.0);
  if (qr2.rank() < rank) throw RankDeficiencyError("sparse pseudoinverse: second QR stage lost rank");

  // T^T = Q2 [R2; 0] P2^T  =>  T = P2 R2^T Q2_top^T
  Eigen::MatrixXd rhs = qr2.colsPermutation().transpose() * c;
  SpMat r2 = qr2.matrixR().topLeftCorner(rank, rank);
  Eigen::MatrixXd y_top = SpMat(r2.transpose()).triangularView<Eigen::Lower>().solve(rhs);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(a.cols(), b.cols());
  y.topRows(rank) = y_top;
  Eigen::MatrixXd z = qr2.matrixQ() * y;
  return qr1.colsPermutation() * z;
}

// Minimum-norm solution for a wide matrix via the transpose:
//   A^T P = Q1 [T; 0]  =>  A = P T^T Q1_top^T
//   x = Q1 [argmin ||T^T v - P^T b||; 0]
Eigen::MatrixXd cod_wide(const SpMat& a, const Eigen::MatrixXd& b, double cutoff) {
  SparseQr qr1;
  factor(qr1, SpMat(a.transpose()), cutoff);
  const Eigen::Index rank = qr1.rank();
  if (rank == 0) throw RankDeficiencyError("sparse pseudoinverse: matrix has numerical rank 0");

  SpMat t_transpose = SpMat(leading_rows(qr1, rank).transpose());
  SparseQr qr2;
  factor(qr2, t_transpose, 0.0);
  Eigen::MatrixXd pb = qr1.colsPermutation().transpose() * b;
  Eigen::MatrixXd v = qr2.solve(pb);

  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(a.cols(), b.cols());
  padded.topRows(rank) = v;
  return qr1.matrixQ() * padded;
}

}  // namespace

Eigen::MatrixXd sparse_rank_revealing_solve(const SpMat& a, const Eigen::MatrixXd& b,
                                            const RidgeSpec& spec) {
  spec.validate();
  if (a.rows() != b.rows()) throw ArgumentError("sparse_rank_revealing_solve: dimension mismatch");
  if (a.rows() == 0 || a.cols() == 0) throw ArgumentError("sparse_rank_revealing_solve: empty matrix");

  if (spec.delta > 0.0) {
    const double root = std::sqrt(spec.delta);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(a.nonZeros() + a.cols()));
    for (int k = 0; k < a.outerSize(); ++k) {
      for (SpMat::InnerIterator it(a, k); it; ++it) trips.emplace_back(it.row(), it.col(), it.value());
    }
    for (Eigen::Index k = 0; k < a.cols(); ++k) trips.emplace_back(a.rows() + k, k, root);
    SpMat aug(a.rows() + a.cols(), a.cols());
    aug.setFromTriplets(trips.begin(), trips.end());
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(aug.rows(), b.cols());
    rhs.topRows(a.rows()) = b;
    SparseQr qr;
    factor(qr, aug, 0.0);
    return qr.solve(rhs);
  }

  const double cutoff = spec.cutoff_for(a.rows(), a.cols());
  return a.rows() >= a.cols() ? cod_tall(a, b, cutoff) : cod_wide(a, b, cutoff);
}

}  // namespace pirpnn
