#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mh {

using Complex = std::complex<double>;

// d x d complex double matrix. Plays two roles: algebra element (observable)
// and GNS vector under the Hilbert-Schmidt inner product Tr(xi* eta).
using Matrix = Eigen::MatrixXcd;

// Tolerance budget shared across the toolkit. Residuals are compared against
// these after scaling by the natural size of the inputs.
namespace tol {
inline constexpr double herm = 1e-10;             // Hermiticity gate, relative
inline constexpr double psd = 1e-10;              // positivity gate, relative
inline constexpr double recon_per_dim = 1e-11;    // eigendecomposition reconstruction, x dim
inline constexpr double unitary_per_dim = 1e-11;  // basis orthonormality, x dim
inline constexpr double support_cut = 1e-12;      // eigenvalues below cut * lambda_max count as zero
inline constexpr double faithfulness_floor = 1e-13;  // smallest admissible rho eigenvalue
inline constexpr double modular = 1e-9;           // modular/chain identity residuals
inline constexpr double kms = 1e-9;               // KMS boundary residuals
inline constexpr double ineq = 1e-9;              // inequality margin slack, relative
inline constexpr double imag_residue = 1e-9;      // max imaginary part of a nominally real value
inline constexpr double margin_floor = 1e-300;    // denominator floor for relative margins
}  // namespace tol

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define MH_ERROR_CLASS(NAME)                                        \
  class NAME : public Error {                                       \
   public:                                                          \
    explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
  }

MH_ERROR_CLASS(NotHermitian);
MH_ERROR_CLASS(NotPSD);
MH_ERROR_CLASS(SingularNegativePower);
MH_ERROR_CLASS(DimMismatch);
MH_ERROR_CLASS(FaithfulnessViolated);
MH_ERROR_CLASS(EmptySample);
MH_ERROR_CLASS(BudgetViolation);
MH_ERROR_CLASS(OddP);
MH_ERROR_CLASS(BadExponent);
MH_ERROR_CLASS(ExponentMismatch);
MH_ERROR_CLASS(InvalidSplit);
MH_ERROR_CLASS(ZeroRealPart);
MH_ERROR_CLASS(InfeasibleFloor);
MH_ERROR_CLASS(SizeTooLarge);
MH_ERROR_CLASS(SingularState);
MH_ERROR_CLASS(ImaginaryResidue);
MH_ERROR_CLASS(ConfigError);

#undef MH_ERROR_CLASS

}  // namespace mh
