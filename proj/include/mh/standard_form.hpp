#pragma once

#include <vector>

#include "mh/insertion.hpp"
#include "mh/record.hpp"
#include "mh/spectral.hpp"

namespace mh {

// Gibbs state rho = exp(-beta H) / Z on the d x d matrix algebra, realized in
// standard form on the Hilbert-Schmidt space with cyclic vector
// Omega = rho^{1/2}. Immutable after construction; the spectral data of H and
// rho are cached so modular powers are cheap. The modular operator acts as
// xi -> rho xi rho^{-1} and is never materialized as a d^2 x d^2 matrix.
class GibbsEnsemble {
 public:
  GibbsEnsemble(const Matrix& hamiltonian, double beta);

  int dim() const { return dim_; }
  double beta() const { return beta_; }
  double log_partition() const { return log_partition_; }
  const Matrix& hamiltonian() const { return hamiltonian_; }
  const Matrix& rho() const { return rho_; }
  const Matrix& omega() const { return omega_; }  // rho^{1/2}
  const SpectralDecomposition& hamiltonian_eig() const { return ham_eig_; }
  const SpectralDecomposition& rho_eig() const { return rho_eig_; }

  // rho^z from the cached spectrum (rho is full support by construction).
  Matrix rho_power(Complex z) const;

  // exp(i z H) from the cached spectrum.
  Matrix evolve_factor(Complex z) const;

 private:
  int dim_;
  double beta_;
  double log_partition_;
  Matrix hamiltonian_;
  Matrix rho_;
  Matrix omega_;
  SpectralDecomposition ham_eig_;
  SpectralDecomposition rho_eig_;
};

GibbsEnsemble make_gibbs(const Matrix& hamiltonian, double beta);

// Positive normal functional phi(X) = Tr(density X); density need not be
// normalized or full support.
class StateFunctional {
 public:
  explicit StateFunctional(Matrix density);

  // Builds the functional from trusted spectral data (values >= 0 ascending,
  // orthonormal basis). The values are taken as exact, so the support keeps
  // eigenvalues that would fall below the generic cutoff of the materialized
  // density; needed when the density is a high power of a matrix whose
  // conditioning is fine but whose power spreads past double range.
  static StateFunctional from_spectrum(SpectralDecomposition eig);

  const Matrix& density() const { return density_; }
  const SpectralDecomposition& eig() const { return eig_; }
  double mass() const { return mass_; }  // phi(1)
  Complex value(const Matrix& X) const;
  bool full_support() const { return full_support_; }
  double support_cutoff() const { return support_cutoff_; }

 private:
  StateFunctional() = default;

  Matrix density_;
  SpectralDecomposition eig_;
  double mass_ = 0.0;
  bool full_support_ = false;
  double support_cutoff_ = 0.0;
};

// GNS embedding A -> A Omega.
Matrix embed(const GibbsEnsemble& ens, const Matrix& A);

// Delta^z xi = rho^z xi rho^{-z}.
Matrix modular_power_apply(const GibbsEnsemble& ens, Complex z, const Matrix& xi);

// Delta_{phi,Omega}^z xi = phi^z xi rho^{-z}, powers of phi on its support.
Matrix relative_modular_power_apply(const GibbsEnsemble& ens,
                                    const StateFunctional& phi, Complex z,
                                    const Matrix& xi, bool on_support = false);

// J xi = xi^*; anti-linear involution.
Matrix modular_conjugation_apply(const Matrix& xi);

// tau_z(A) = exp(izH) A exp(-izH); entire in z at finite dimension.
Matrix heisenberg(const GibbsEnsemble& ens, Complex z, const Matrix& A);

// F_{A,B}(z) = Tr(rho A tau_z(B)).
Complex kms_function(const GibbsEnsemble& ens, const Matrix& A, const Matrix& B,
                     Complex z);

// Residual of F_{A,B}(t + i beta) against Tr(rho tau_t(B) A).
VerificationRecord kms_boundary_check(const GibbsEnsemble& ens, const Matrix& A,
                                      const Matrix& B, double t);

struct ConeWitness {
  bool member = false;
  double witness_min_eig = 0.0;
};

// xi lies in the cone P^alpha iff rho^{-alpha} xi rho^{alpha - 1/2} is PSD.
ConeWitness cone_membership(const GibbsEnsemble& ens, const Matrix& xi,
                            double alpha);

// Standard-form axioms on sample operators: S = J Delta^{1/2}, J involution,
// J Omega = Omega, commutant action, cone preservation, center conjugation.
VerificationRecord tomita_check(const GibbsEnsemble& ens,
                                const std::vector<Matrix>& sample_ops);

// Adjoint identity for operator chains
//   T = X_0 Dphi_1^{z_1} X_1 ... Dphi_n^{z_n} X_n,
//   T* = X_n^* Dphi_n^{conj z_n} ... X_1^* Dphi_1^{conj z_1} X_0^*,
// tested through <T* eta, xi> = <eta, T xi> on sample vectors.
VerificationRecord formal_adjoint_check(const GibbsEnsemble& ens,
                                        const std::vector<Matrix>& X_list,
                                        const std::vector<StateFunctional>& phi_list,
                                        const InsertionTuple& z,
                                        const std::vector<Matrix>& sample_xi);

}  // namespace mh
