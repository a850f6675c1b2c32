#include "mh/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace mh {

void require_square(const Matrix& M, const char* context) {
  if (M.rows() < 1 || M.rows() != M.cols()) {
    throw DimMismatch(std::string(context) + ": matrix must be square and nonempty");
  }
  if (!M.allFinite()) {
    throw Error(std::string(context) + ": matrix has non-finite entries");
  }
}

void require_same_dim(const Matrix& A, const Matrix& B, const char* context) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw DimMismatch(std::string(context) + ": dimension mismatch");
  }
}

bool is_hermitian(const Matrix& M, double rel_tol) {
  return (M - M.adjoint()).norm() <= rel_tol * M.norm();
}

Complex hs_inner(const Matrix& A, const Matrix& B) {
  return (A.adjoint() * B).trace();
}

double hs_norm(const Matrix& A) { return A.norm(); }

double op_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

SpectralDecomposition eig_hermitian(const Matrix& M) {
  require_square(M, "eig_hermitian");
  if (!is_hermitian(M)) {
    throw NotHermitian("eig_hermitian: input is not Hermitian within tolerance");
  }
  const Matrix sym = (M + M.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("eig_hermitian: eigensolver did not converge");
  }
  SpectralDecomposition eig{solver.eigenvalues(), solver.eigenvectors()};

  const auto d = static_cast<double>(M.rows());
  const Matrix identity = Matrix::Identity(M.rows(), M.cols());
  const double unitary_resid = (eig.basis.adjoint() * eig.basis - identity).norm();
  if (unitary_resid > tol::unitary_per_dim * d) {
    throw Error("eig_hermitian: basis failed the orthonormality residual");
  }
  const double scale = std::max(1.0, sym.norm());
  const Matrix recon = eig.basis * eig.values.asDiagonal() * eig.basis.adjoint();
  if ((recon - sym).norm() > tol::recon_per_dim * d * scale) {
    throw Error("eig_hermitian: reconstruction residual too large");
  }
  return eig;
}

Matrix power_from_spectrum(const SpectralDecomposition& eig, Complex z,
                           bool on_support, double cutoff) {
  const auto dim = eig.basis.rows();
  const double lambda_max = eig.values.size() ? eig.values.maxCoeff() : 0.0;
  if (cutoff < 0.0) cutoff = tol::support_cut * std::max(lambda_max, 0.0);

  Eigen::Index retained = 0;
  Matrix out = Matrix::Zero(dim, dim);
  Eigen::VectorXcd powered = Eigen::VectorXcd::Zero(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values(i);
    if (lambda <= cutoff) continue;
    powered(i) = std::exp(z * std::log(lambda));
    ++retained;
  }
  if (z.real() < 0.0 && retained < dim && !on_support) {
    throw SingularNegativePower(
        "negative-real-part power of a singular positive matrix; pass the "
        "support flag to restrict to the support");
  }
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) <= cutoff) continue;
    out.noalias() += powered(i) * (eig.basis.col(i) * eig.basis.col(i).adjoint());
  }
  return out;
}

Matrix fractional_power(const Matrix& P, Complex z, bool on_support) {
  const SpectralDecomposition eig = eig_hermitian(P);  // throws NotHermitian
  const double scale =
      std::max(std::abs(eig.values.minCoeff()), std::abs(eig.values.maxCoeff()));
  if (eig.values.minCoeff() < -tol::psd * scale) {
    throw NotPSD("fractional_power: input is not positive semidefinite");
  }
  return power_from_spectrum(eig, z, on_support);
}

PsdWitness psd_check(const Matrix& M, double tolerance) {
  const SpectralDecomposition eig = eig_hermitian(M);  // throws NotHermitian
  const double min_eig = eig.values.minCoeff();
  return PsdWitness{min_eig >= -tolerance, min_eig};
}

MatrixNorms norms_and_trace(const Matrix& M) {
  require_square(M, "norms_and_trace");
  return MatrixNorms{op_norm(M), hs_norm(M), M.trace()};
}

}  // namespace mh
