#include "mh/standard_form.hpp"

#include <algorithm>
#include <cmath>

namespace mh {

namespace {

VerificationRecord residual_record(double residual, double allowed,
                                   RecordMeta meta) {
  return make_record(Complex(residual, 0.0), allowed, std::move(meta));
}

}  // namespace

GibbsEnsemble::GibbsEnsemble(const Matrix& hamiltonian, double beta)
    : dim_(static_cast<int>(hamiltonian.rows())),
      beta_(beta),
      hamiltonian_(hamiltonian) {
  require_square(hamiltonian, "GibbsEnsemble");
  if (!(beta > 0.0)) {
    throw ConfigError("GibbsEnsemble: beta must be positive");
  }
  ham_eig_ = eig_hermitian(hamiltonian);  // throws NotHermitian

  // log Z by shifting out the largest exponent before summing.
  const Eigen::ArrayXd exponents = -beta * ham_eig_.values.array();
  const double shift = exponents.maxCoeff();
  log_partition_ = shift + std::log((exponents - shift).exp().sum());

  const Eigen::ArrayXd rho_values = (exponents - log_partition_).exp();
  if (rho_values.minCoeff() < tol::faithfulness_floor) {
    throw FaithfulnessViolated(
        "GibbsEnsemble: rho has an eigenvalue below the faithfulness floor; "
        "Omega would not be separating numerically");
  }
  rho_ = ham_eig_.basis * rho_values.matrix().asDiagonal() * ham_eig_.basis.adjoint();
  omega_ = ham_eig_.basis * rho_values.sqrt().matrix().asDiagonal() *
           ham_eig_.basis.adjoint();

  // rho's spectrum in ascending order: H's is ascending, so exp(-beta .) flips it.
  rho_eig_.values = rho_values.matrix().reverse();
  rho_eig_.basis = ham_eig_.basis.rowwise().reverse();
}

Matrix GibbsEnsemble::rho_power(Complex z) const {
  Eigen::VectorXcd powered(dim_);
  for (int i = 0; i < dim_; ++i) {
    powered(i) = std::exp(z * std::log(rho_eig_.values(i)));
  }
  return rho_eig_.basis * powered.asDiagonal() * rho_eig_.basis.adjoint();
}

Matrix GibbsEnsemble::evolve_factor(Complex z) const {
  const Complex iz(0.0, 1.0);
  Eigen::VectorXcd phases(dim_);
  for (int i = 0; i < dim_; ++i) {
    phases(i) = std::exp(iz * z * ham_eig_.values(i));
  }
  return ham_eig_.basis * phases.asDiagonal() * ham_eig_.basis.adjoint();
}

GibbsEnsemble make_gibbs(const Matrix& hamiltonian, double beta) {
  return GibbsEnsemble(hamiltonian, beta);
}

StateFunctional::StateFunctional(Matrix density) : density_(std::move(density)) {
  require_square(density_, "StateFunctional");
  eig_ = eig_hermitian(density_);  // throws NotHermitian
  const double scale =
      std::max(std::abs(eig_.values.minCoeff()), std::abs(eig_.values.maxCoeff()));
  if (eig_.values.minCoeff() < -tol::psd * scale) {
    throw NotPSD("StateFunctional: density is not positive semidefinite");
  }
  mass_ = std::max(0.0, density_.trace().real());
  support_cutoff_ = tol::support_cut * std::max(eig_.values.maxCoeff(), 0.0);
  full_support_ = eig_.values.minCoeff() > support_cutoff_;
}

StateFunctional StateFunctional::from_spectrum(SpectralDecomposition eig) {
  if (eig.values.size() != eig.basis.rows() || eig.basis.rows() != eig.basis.cols()) {
    throw DimMismatch("StateFunctional::from_spectrum: inconsistent spectral data");
  }
  if (eig.values.size() && eig.values.minCoeff() < 0.0) {
    throw NotPSD("StateFunctional::from_spectrum: negative eigenvalue");
  }
  StateFunctional phi;
  phi.density_ = eig.basis * eig.values.asDiagonal() * eig.basis.adjoint();
  phi.density_ = (phi.density_ + phi.density_.adjoint()) / 2.0;
  phi.mass_ = eig.values.sum();
  phi.support_cutoff_ = 0.0;  // trusted values: only exact zeros are off-support
  phi.full_support_ = eig.values.size() && eig.values.minCoeff() > 0.0;
  phi.eig_ = std::move(eig);
  return phi;
}

Complex StateFunctional::value(const Matrix& X) const {
  require_same_dim(density_, X, "StateFunctional::value");
  return (density_ * X).trace();
}

Matrix embed(const GibbsEnsemble& ens, const Matrix& A) {
  require_same_dim(ens.rho(), A, "embed");
  return A * ens.omega();
}

Matrix modular_power_apply(const GibbsEnsemble& ens, Complex z, const Matrix& xi) {
  require_same_dim(ens.rho(), xi, "modular_power_apply");
  return ens.rho_power(z) * xi * ens.rho_power(-z);
}

Matrix relative_modular_power_apply(const GibbsEnsemble& ens,
                                    const StateFunctional& phi, Complex z,
                                    const Matrix& xi, bool on_support) {
  require_same_dim(ens.rho(), xi, "relative_modular_power_apply");
  require_same_dim(ens.rho(), phi.density(), "relative_modular_power_apply");
  const Matrix left = power_from_spectrum(phi.eig(), z, on_support, phi.support_cutoff());
  return left * xi * ens.rho_power(-z);
}

Matrix modular_conjugation_apply(const Matrix& xi) { return xi.adjoint(); }

Matrix heisenberg(const GibbsEnsemble& ens, Complex z, const Matrix& A) {
  require_same_dim(ens.rho(), A, "heisenberg");
  return ens.evolve_factor(z) * A * ens.evolve_factor(-z);
}

Complex kms_function(const GibbsEnsemble& ens, const Matrix& A, const Matrix& B,
                     Complex z) {
  require_same_dim(ens.rho(), A, "kms_function");
  require_same_dim(ens.rho(), B, "kms_function");
  return (ens.rho() * A * heisenberg(ens, z, B)).trace();
}

VerificationRecord kms_boundary_check(const GibbsEnsemble& ens, const Matrix& A,
                                      const Matrix& B, double t) {
  const Complex analytic =
      kms_function(ens, A, B, Complex(t, ens.beta()));
  const Complex swapped = (ens.rho() * heisenberg(ens, Complex(t, 0.0), B) * A).trace();
  const double residual = std::abs(analytic - swapped);
  const double scale = std::max(1.0, op_norm(A) * op_norm(B));

  RecordMeta meta;
  meta.check = "kms";
  meta.dim = ens.dim();
  meta.beta = ens.beta();
  return residual_record(residual, tol::kms * scale, std::move(meta));
}

ConeWitness cone_membership(const GibbsEnsemble& ens, const Matrix& xi,
                            double alpha) {
  require_same_dim(ens.rho(), xi, "cone_membership");
  if (alpha < 0.0 || alpha > 0.5) {
    throw BadExponent("cone_membership: alpha must lie in [0, 1/2]");
  }
  const Matrix congruence =
      ens.rho_power(Complex(-alpha, 0.0)) * xi * ens.rho_power(Complex(alpha - 0.5, 0.0));
  // A non-Hermitian congruence cannot be PSD; report the symmetrized witness
  // instead of failing.
  if (!is_hermitian(congruence) && congruence.norm() > 0.0) {
    const Matrix sym = (congruence + congruence.adjoint()) / 2.0;
    return ConeWitness{false, eig_hermitian(sym).values.minCoeff()};
  }
  const double scale = std::max(1.0, op_norm(congruence));
  const PsdWitness w = psd_check(congruence, tol::psd * scale);
  return ConeWitness{w.is_psd, w.min_eig};
}

VerificationRecord tomita_check(const GibbsEnsemble& ens,
                                const std::vector<Matrix>& sample_ops) {
  if (sample_ops.empty()) {
    throw EmptySample("tomita_check: need at least one sample operator");
  }
  for (const Matrix& A : sample_ops) {
    require_same_dim(ens.rho(), A, "tomita_check");
  }

  double worst = 0.0;
  const Matrix& omega = ens.omega();

  // (a) S(A Omega) = A^* Omega through the polar decomposition J Delta^{1/2}.
  for (const Matrix& A : sample_ops) {
    const Matrix lhs =
        modular_conjugation_apply(modular_power_apply(ens, Complex(0.5, 0.0), embed(ens, A)));
    const double scale = std::max(1.0, op_norm(A));
    worst = std::max(worst, hs_norm(lhs - embed(ens, A.adjoint())) / scale);
  }

  // (b) J is an involution, (c) J Omega = Omega.
  for (const Matrix& A : sample_ops) {
    const Matrix xi = embed(ens, A);
    const double scale = std::max(1.0, hs_norm(xi));
    worst = std::max(worst,
                     hs_norm(modular_conjugation_apply(modular_conjugation_apply(xi)) - xi) / scale);
  }
  worst = std::max(worst, hs_norm(modular_conjugation_apply(omega) - omega));

  // (d) commutant: J A^* J acts as right multiplication and commutes with the
  // left action of B on sample vectors.
  for (const Matrix& A : sample_ops) {
    for (const Matrix& B : sample_ops) {
      const Matrix xi = embed(ens, B);
      const Matrix left_then_right = (B * xi) * A;
      const Matrix right_then_left = B * (xi * A);
      const double scale = std::max(1.0, op_norm(A) * op_norm(B) * hs_norm(xi));
      worst = std::max(worst, hs_norm(left_then_right - right_then_left) / scale);
    }
  }

  // (e) A J A J maps the standard cone into itself: A xi A^* stays PSD for
  // PSD xi. Cone samples are B B^* for sample operators B.
  for (const Matrix& A : sample_ops) {
    for (const Matrix& B : sample_ops) {
      const Matrix cone_vec = B * B.adjoint();
      const Matrix mapped = A * cone_vec * A.adjoint();
      const double scale = std::max(1.0, op_norm(mapped));
      const PsdWitness w = psd_check((mapped + mapped.adjoint()) / 2.0, tol::psd * scale);
      worst = std::max(worst, std::max(0.0, -w.min_eig) / scale);
    }
  }

  // (f) center elements: the algebra is a factor, so only scalars qualify;
  // J c J must act as multiplication by conj(c).
  {
    const Complex c(0.7, -1.3);
    const Matrix xi = embed(ens, sample_ops.front());
    const Matrix via_j = modular_conjugation_apply(c * modular_conjugation_apply(xi));
    worst = std::max(worst, hs_norm(via_j - std::conj(c) * xi) / std::max(1.0, hs_norm(xi)));
  }

  RecordMeta meta;
  meta.check = "tomita";
  meta.dim = ens.dim();
  meta.beta = ens.beta();
  meta.n = static_cast<int>(sample_ops.size());
  return residual_record(worst, tol::modular, std::move(meta));
}

VerificationRecord formal_adjoint_check(const GibbsEnsemble& ens,
                                        const std::vector<Matrix>& X_list,
                                        const std::vector<StateFunctional>& phi_list,
                                        const InsertionTuple& z,
                                        const std::vector<Matrix>& sample_xi) {
  const int n = z.n();
  if (static_cast<int>(X_list.size()) != n + 1 ||
      static_cast<int>(phi_list.size()) != n) {
    throw DimMismatch("formal_adjoint_check: need n+1 operators and n functionals");
  }
  if (sample_xi.empty()) {
    throw EmptySample("formal_adjoint_check: need sample vectors");
  }
  z.validate();

  const auto apply_chain = [&](const Matrix& xi) {
    Matrix v = X_list[n] * xi;
    for (int j = n; j >= 1; --j) {
      v = relative_modular_power_apply(ens, phi_list[j - 1], z.z[j - 1], v, true);
      v = X_list[j - 1] * v;
    }
    return v;
  };
  const auto apply_adjoint = [&](const Matrix& xi) {
    Matrix v = X_list[0].adjoint() * xi;
    for (int j = 1; j <= n; ++j) {
      v = relative_modular_power_apply(ens, phi_list[j - 1], std::conj(z.z[j - 1]), v, true);
      v = X_list[j].adjoint() * v;
    }
    return v;
  };

  double worst = 0.0;
  for (const Matrix& eta : sample_xi) {
    const Matrix t_adj_eta = apply_adjoint(eta);
    for (const Matrix& xi : sample_xi) {
      const Matrix t_xi = apply_chain(xi);
      const double scale = std::max(1.0, hs_norm(eta) * hs_norm(t_xi));
      worst = std::max(worst, std::abs(hs_inner(t_adj_eta, xi) - hs_inner(eta, t_xi)) / scale);
    }
  }

  RecordMeta meta;
  meta.check = "formal_adjoint";
  meta.dim = ens.dim();
  meta.beta = ens.beta();
  meta.n = n;
  meta.z = z.z;
  return residual_record(worst, tol::modular, std::move(meta));
}

}  // namespace mh
