#pragma once

#include <random>

#include "mh/spectral.hpp"
#include "mh/standard_form.hpp"

// Test-side matrix factories and oracles. These deliberately use std::mt19937
// and plain arithmetic (never the library's generators) so expected values
// come from an independent route.
namespace testutil {

using mh::Complex;
using mh::Matrix;

inline Matrix random_complex(int d, std::mt19937_64& gen) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = Complex(dist(gen), dist(gen));
  return M;
}

inline Matrix random_hermitian(int d, std::mt19937_64& gen) {
  const Matrix G = random_complex(d, gen);
  return (G + G.adjoint()) / 2.0;
}

inline Matrix random_psd(int d, std::mt19937_64& gen) {
  const Matrix G = random_complex(d, gen);
  return G * G.adjoint() / static_cast<double>(d);
}

inline Matrix random_unit_vector(int d, std::mt19937_64& gen) {
  Matrix xi = random_complex(d, gen);
  return xi / xi.norm();
}

// rho = diag(2/3, 1/3): the two-level worked example, beta E = ln 2.
inline mh::GibbsEnsemble two_level_example() {
  Matrix H = Matrix::Zero(2, 2);
  H(1, 1) = std::log(2.0);
  return mh::make_gibbs(H, 1.0);
}

inline Matrix pauli_x() {
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

inline Matrix matrix_unit(int d, int i, int j) {
  Matrix e = Matrix::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

// Schatten p-norm from singular values; oracle for the Araki-Masuda norms:
// |zeta|_p = S_p(zeta * rho^{1/p - 1/2}).
inline double schatten_norm(const Matrix& M, double p) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  if (!std::isfinite(p)) return sv.size() ? sv(0) : 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) sum += std::pow(sv(i), p);
  return std::pow(sum, 1.0 / p);
}

inline double am_norm_oracle(const mh::GibbsEnsemble& ens, const Matrix& zeta,
                             double p) {
  const double expo = std::isfinite(p) ? 1.0 / p - 0.5 : -0.5;
  return schatten_norm(zeta * ens.rho_power(Complex(expo, 0.0)), p);
}

// Trace closed form of the KMS p-norm: Tr((rho^{1/2p} A rho^{1/2p})^p)^{1/p}.
// Validated for d = 2 diagonal rho by exact arithmetic in the tests before
// being used as an oracle elsewhere.
inline double kms_norm_trace_oracle(const mh::GibbsEnsemble& ens, const Matrix& A,
                                    int p) {
  const Matrix half = ens.rho_power(Complex(0.5 / p, 0.0));
  const Matrix sandwich = half * A * half;
  Eigen::SelfAdjointEigenSolver<Matrix> es((sandwich + sandwich.adjoint()) / 2.0);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    sum += p % 2 == 0 ? std::pow(std::abs(lam), p) : std::pow(std::max(lam, 0.0), p);
  }
  return std::pow(sum, 1.0 / p);
}

}  // namespace testutil
