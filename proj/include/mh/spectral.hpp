#pragma once

#include "mh/types.hpp"

namespace mh {

// Eigendecomposition of a Hermitian matrix. values are ascending, basis has
// orthonormal columns, and basis * diag(values) * basis^* reconstructs the
// input within tol::recon_per_dim * dim.
struct SpectralDecomposition {
  Eigen::VectorXd values;
  Matrix basis;
};

struct PsdWitness {
  bool is_psd = false;
  double min_eig = 0.0;
};

struct MatrixNorms {
  double operator_norm = 0.0;
  double hs_norm = 0.0;
  Complex trace{0.0, 0.0};
};

void require_square(const Matrix& M, const char* context);
void require_same_dim(const Matrix& A, const Matrix& B, const char* context);
bool is_hermitian(const Matrix& M, double rel_tol = tol::herm);

// Hilbert-Schmidt inner product Tr(A* B), linear in the second entry.
Complex hs_inner(const Matrix& A, const Matrix& B);
double hs_norm(const Matrix& A);
double op_norm(const Matrix& A);

SpectralDecomposition eig_hermitian(const Matrix& M);

// lambda -> exp(z ln lambda) over the part of the spectrum above the support
// cutoff; eigenvalues <= cutoff are dropped. For Re z < 0 a dropped eigenvalue
// means the inverse does not exist on all of C^d: that is an error unless the
// caller explicitly asks for the support-restricted power.
// A negative cutoff selects the default tol::support_cut * lambda_max; an
// explicit cutoff lets owners of exact spectral data (for example densities
// stored as powers of a better-conditioned matrix) keep their full support.
Matrix power_from_spectrum(const SpectralDecomposition& eig, Complex z,
                           bool on_support = false, double cutoff = -1.0);

Matrix fractional_power(const Matrix& P, Complex z, bool on_support = false);

// min eigenvalue as witness; is_psd iff min_eig >= -tolerance (absolute).
PsdWitness psd_check(const Matrix& M, double tolerance);

MatrixNorms norms_and_trace(const Matrix& M);

}  // namespace mh
