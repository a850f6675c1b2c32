#include "mh/nclp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "mh/rng.hpp"

namespace mh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_hermitian_observable(const Matrix& A, const char* who) {
  require_square(A, who);
  if (!is_hermitian(A)) {
    throw NotPSD(std::string(who) + ": observable must be Hermitian");
  }
}

void require_psd_observable(const SpectralDecomposition& eig, const char* who) {
  const double scale =
      std::max(std::abs(eig.values.minCoeff()), std::abs(eig.values.maxCoeff()));
  if (eig.values.minCoeff() < -tol::psd * scale) {
    throw NotPSD(std::string(who) + ": observable must be positive semidefinite");
  }
}

bool psd_within_tol(const SpectralDecomposition& eig) {
  const double scale =
      std::max(std::abs(eig.values.minCoeff()), std::abs(eig.values.maxCoeff()));
  return eig.values.minCoeff() >= -tol::psd * scale;
}

double real_part_checked(Complex value, double imag_tol, const char* who) {
  if (std::abs(value.imag()) > imag_tol * std::max(1.0, std::abs(value.real()))) {
    std::ostringstream os;
    os << who << ": imaginary residue " << value.imag()
       << " exceeds the policy threshold";
    throw ImaginaryResidue(os.str());
  }
  return value.real();
}

}  // namespace

double opt_slack_for_dim(int dim) { return dim <= 3 ? 0.02 : 0.05; }

double kms_norm(const GibbsEnsemble& ens, const Matrix& A, int p) {
  if (p < 1) throw BadExponent("kms_norm: p must be a positive integer");
  require_hermitian_observable(A, "kms_norm");
  require_same_dim(ens.rho(), A, "kms_norm");
  const SpectralDecomposition a_eig = eig_hermitian(A);
  if (p % 2 != 0) {
    require_psd_observable(a_eig, "kms_norm (odd p)");
  }

  const Complex inv_p(1.0 / p, 0.0);
  Matrix v = ens.omega();
  for (int k = 0; k < p; ++k) {
    v = A * v;
    v = modular_power_apply(ens, inv_p, v);
  }
  const Complex chain = hs_inner(ens.omega(), v);
  const double value = real_part_checked(chain, 1e-10, "kms_norm");
  return std::pow(std::max(0.0, value), 1.0 / p);
}

double kms_norm_analytic(const GibbsEnsemble& ens, const Matrix& A, int p) {
  if (p < 1) throw BadExponent("kms_norm_analytic: p must be a positive integer");
  require_hermitian_observable(A, "kms_norm_analytic");
  require_same_dim(ens.rho(), A, "kms_norm_analytic");
  const SpectralDecomposition a_eig = eig_hermitian(A);
  if (p % 2 != 0) {
    require_psd_observable(a_eig, "kms_norm_analytic (odd p)");
  }

  Matrix product = Matrix::Identity(ens.dim(), ens.dim());
  for (int k = 1; k <= p; ++k) {
    const Complex imag_time(0.0, ens.beta() * (2.0 * k - 1.0) / (2.0 * p));
    product = product * heisenberg(ens, imag_time, A);
  }
  const Complex value = (ens.rho() * product).trace();
  const double re = real_part_checked(value, tol::imag_residue, "kms_norm_analytic");
  return std::pow(std::max(0.0, re), 1.0 / p);
}

Complex kms_norm_analytic_literal(const GibbsEnsemble& ens, const Matrix& A, int p) {
  if (p < 1) throw BadExponent("kms_norm_analytic_literal: p must be positive");
  require_hermitian_observable(A, "kms_norm_analytic_literal");
  Matrix product = Matrix::Identity(ens.dim(), ens.dim());
  for (int k = 1; k <= p; ++k) {
    const Complex imag_time(0.0, ens.beta() * (2.0 * k - 1.0) / (2.0 * p));
    product = product * heisenberg(ens, imag_time, A);
  }
  product = product * heisenberg(ens, Complex(0.0, ens.beta()), A);
  return (ens.rho() * product).trace();
}

namespace {

// Objective data for the Araki-Masuda estimator. With nu = xi xi* the
// objective is f(nu) = Tr(nu^s W), W = (zeta rho^{-alpha})(zeta rho^{-alpha})*,
// s = 1 - 2/p. For s in [0, 1) this is concave on the density-matrix simplex;
// for s < 0 it is convex with a barrier at rank drops, which is what enforces
// the support constraint of the inf formula.
struct AmObjective {
  Matrix W;
  double s;
  bool sup_case;

  // Returns the objective and the Euclidean gradient with respect to xi.
  // The gradient of Tr(nu^s W) in nu is G = U (k o (U* W U)) U* with k the
  // divided-difference table of x -> x^s; chain rule through nu = xi xi*
  // gives 2 G xi.
  std::pair<double, Matrix> eval(const Matrix& xi) const {
    const auto d = xi.rows();
    const Matrix nu = xi * xi.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(nu);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    const Matrix& U = es.eigenvectors();
    const double lmax = lam.maxCoeff();
    const double cutoff = tol::support_cut * lmax;

    const Matrix Wt = U.adjoint() * W * U;
    double f = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (lam(i) > cutoff) {
        f += std::pow(lam(i), s) * Wt(i, i).real();
      } else if (s < 0.0 && Wt(i, i).real() > 1e-14 * std::max(1.0, W.norm())) {
        return {kInf, Matrix::Zero(d, d)};  // support violated
      }
    }

    const double clamp_floor = std::max(cutoff, 1e-300);
    Eigen::MatrixXd k(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const double li = std::max(lam(i), clamp_floor);
        const double lj = std::max(lam(j), clamp_floor);
        if (std::abs(li - lj) > 1e-12 * std::max(lmax, clamp_floor)) {
          k(i, j) = (std::pow(li, s) - std::pow(lj, s)) / (li - lj);
        } else {
          k(i, j) = s * std::pow(0.5 * (li + lj), s - 1.0);
        }
      }
    }
    const Matrix G = U * k.cwiseProduct(Wt.real()).cast<Complex>() * U.adjoint()
                     + U * (k.cwiseProduct(Wt.imag()) * Complex(0.0, 1.0)) * U.adjoint();
    return {f, 2.0 * (G * xi)};
  }
};

}  // namespace

NormEstimate am_norm(const GibbsEnsemble& ens, const Matrix& zeta, double p,
                     const OptConfig& cfg, const std::optional<Matrix>& support) {
  if (!(p >= 1.0)) throw BadExponent("am_norm: p must be >= 1");
  require_same_dim(ens.rho(), zeta, "am_norm");
  if (cfg.restarts < 1 || cfg.max_iters < 1 || !(cfg.grad_tol > 0.0)) {
    throw ConfigError("am_norm: bad optimizer configuration");
  }
  const auto d = ens.dim();

  if (p == 2.0) {
    // H and L_2 coincide: the norm is the HS norm, attained at any
    // full-support unit vector.
    NormEstimate est;
    est.value = hs_norm(zeta);
    est.converged = true;
    est.best_xi = Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d));
    est.bound_kind = BoundKind::lower;
    return est;
  }

  const bool sup_case = p > 2.0;
  const double alpha = 0.5 - 1.0 / p;  // 1/inf == 0
  if (!sup_case) {
    const Matrix range = support_projection(zeta);
    const bool full_rank = std::abs(range.trace().real() - d) < 0.5;
    if (!full_rank) {
      if (!support.has_value()) {
        throw SingularState(
            "am_norm: rank-deficient zeta at p < 2 needs an explicit support "
            "projection");
      }
      if (((*support) * zeta - zeta).norm() > 1e-10 * std::max(1.0, zeta.norm())) {
        throw ConfigError("am_norm: support projection does not dominate zeta");
      }
    }
  }

  const Matrix Z = zeta * ens.rho_power(Complex(-alpha, 0.0));
  AmObjective obj{Z * Z.adjoint(), 1.0 - 2.0 / p, sup_case};

  double best_f = sup_case ? -kInf : kInf;
  int best_restart = -1;
  bool best_converged = false;
  Matrix best_xi = Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d));

  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(mix(cfg.seed, static_cast<std::uint64_t>(r)));
    Matrix xi(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) xi(i, j) = rng.cgauss();
    xi /= xi.norm();

    auto [f, grad] = obj.eval(xi);
    bool converged = false;
    double step = cfg.step_init;
    for (int it = 0; it < cfg.max_iters; ++it) {
      Matrix tangent = grad - Complex(hs_inner(xi, grad).real(), 0.0) * xi;
      if (!std::isfinite(f)) break;
      if (tangent.norm() <= cfg.grad_tol * std::max(1.0, std::abs(f))) {
        converged = true;
        break;
      }
      if (!sup_case) tangent = -tangent;
      bool improved = false;
      double trial_step = step;
      for (int halving = 0; halving < 50; ++halving) {
        Matrix cand = xi + trial_step * tangent;
        cand /= cand.norm();
        auto [fc, gc] = obj.eval(cand);
        const bool better = sup_case ? fc > f : fc < f;
        if (better && std::isfinite(fc)) {
          xi = cand;
          f = fc;
          grad = gc;
          step = trial_step * 2.0;  // let the step re-grow after a success
          improved = true;
          break;
        }
        trial_step /= 2.0;
      }
      if (!improved) {
        converged = true;  // no ascent direction at line-search resolution
        break;
      }
    }

    const bool better_restart =
        best_restart < 0 || (sup_case ? f > best_f : f < best_f);
    if (std::isfinite(f) && better_restart) {
      best_f = f;
      best_restart = r;
      best_converged = converged;
      best_xi = xi;
    }
  }

  NormEstimate est;
  est.value = std::sqrt(std::max(0.0, best_f));
  est.converged = best_converged;
  est.best_xi = best_xi;
  est.bound_kind = sup_case ? BoundKind::lower : BoundKind::upper;
  return est;
}

Matrix support_projection(const Matrix& xi) {
  require_square(xi, "support_projection");
  if (xi.norm() == 0.0) return Matrix::Zero(xi.rows(), xi.cols());
  Eigen::JacobiSVD<Matrix> svd(xi, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = tol::support_cut * sv(0);
  Matrix proj = Matrix::Zero(xi.rows(), xi.cols());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      proj.noalias() += svd.matrixU().col(i) * svd.matrixU().col(i).adjoint();
    }
  }
  return proj;
}

PolarParts polar_parts(const Matrix& xi) {
  require_square(xi, "polar_parts");
  Eigen::JacobiSVD<Matrix> svd(xi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? tol::support_cut * sv(0) : 0.0;

  PolarParts parts;
  parts.absval = svd.matrixV() * sv.asDiagonal() * svd.matrixV().adjoint();
  parts.u = Matrix::Zero(xi.rows(), xi.cols());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      parts.u.noalias() += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
    }
  }
  if ((parts.u * parts.absval - xi).norm() > 1e-10 * std::max(1.0, xi.norm())) {
    throw Error("polar_parts: polar reconstruction residual too large");
  }
  return parts;
}

StateFunctional phi_from_cone_vector(const GibbsEnsemble& ens, const Matrix& A,
                                     int p) {
  if (p < 2) throw BadExponent("phi_from_cone_vector: need 1/p <= 1/2");
  require_hermitian_observable(A, "phi_from_cone_vector");
  require_same_dim(ens.rho(), A, "phi_from_cone_vector");
  const SpectralDecomposition a_eig = eig_hermitian(A);
  const bool a_psd = psd_within_tol(a_eig);
  if (!a_psd && p % 2 != 0) {
    throw NotPSD("phi_from_cone_vector: Hermitian input needs even p");
  }

  const Matrix half = ens.rho_power(Complex(0.5 / p, 0.0));
  const Matrix sandwich = half * A * half;
  const SpectralDecomposition s_eig = eig_hermitian(sandwich);

  // The density is the p-th power of the sandwich, whose spectrum can spread
  // far past double range even for mildly conditioned inputs. Keep the exact
  // powered spectrum, with support decided at the sandwich level, instead of
  // rediagonalizing the materialized power.
  const double cutoff = tol::support_cut * s_eig.values.cwiseAbs().maxCoeff();
  std::vector<std::pair<double, Eigen::Index>> powered;
  powered.reserve(s_eig.values.size());
  for (Eigen::Index i = 0; i < s_eig.values.size(); ++i) {
    const double lam = s_eig.values(i);
    powered.emplace_back(std::abs(lam) > cutoff ? std::pow(lam, p) : 0.0, i);
  }
  std::sort(powered.begin(), powered.end());
  SpectralDecomposition phi_eig;
  phi_eig.values.resize(s_eig.values.size());
  phi_eig.basis.resize(s_eig.basis.rows(), s_eig.basis.cols());
  for (Eigen::Index i = 0; i < s_eig.values.size(); ++i) {
    phi_eig.values(i) = powered[i].first;  // even p keeps this >= 0
    phi_eig.basis.col(i) = s_eig.basis.col(powered[i].second);
  }
  StateFunctional phi = StateFunctional::from_spectrum(std::move(phi_eig));

  // Built-in consistency checks of the construction.
  const Matrix cone_vec = modular_power_apply(ens, Complex(0.5 / p, 0.0), embed(ens, A));
  if (a_psd) {
    const Matrix via_phi =
        relative_modular_power_apply(ens, phi, Complex(1.0 / p, 0.0), ens.omega(), true);
    if ((via_phi - cone_vec).norm() > 1e-9 * std::max(1.0, cone_vec.norm())) {
      throw Error("phi_from_cone_vector: cone-vector identity residual too large");
    }
  }
  // Round trip: (zeta rho^{1/p - 1/2})^p must reproduce the density. The base
  // collapses to the sandwich, so it is Hermitian up to roundoff.
  const Matrix recon_base = cone_vec * ens.rho_power(Complex(1.0 / p - 0.5, 0.0));
  const SpectralDecomposition r_eig =
      eig_hermitian((recon_base + recon_base.adjoint()) / 2.0);
  Eigen::VectorXd recon_pw(r_eig.values.size());
  for (Eigen::Index i = 0; i < r_eig.values.size(); ++i) {
    recon_pw(i) = std::pow(r_eig.values(i), p);
  }
  const Matrix recon = r_eig.basis * recon_pw.asDiagonal() * r_eig.basis.adjoint();
  if ((recon - phi.density()).norm() > 1e-9 * std::max(1.0, phi.density().norm())) {
    throw Error("phi_from_cone_vector: density round-trip residual too large");
  }
  return phi;
}

VerificationRecord lemma41_check(const GibbsEnsemble& ens, const Matrix& A, int p) {
  const StateFunctional phi = phi_from_cone_vector(ens, A, p);

  const Matrix cone_vec = modular_power_apply(ens, Complex(0.5 / p, 0.0), embed(ens, A));
  const Matrix via_phi =
      relative_modular_power_apply(ens, phi, Complex(1.0 / p, 0.0), ens.omega(), true);
  const double scale = std::max(1.0, cone_vec.norm());
  const double identity_resid = (via_phi - cone_vec).norm() / scale;

  const Matrix recon_base = cone_vec * ens.rho_power(Complex(1.0 / p - 0.5, 0.0));
  const SpectralDecomposition r_eig =
      eig_hermitian((recon_base + recon_base.adjoint()) / 2.0);
  Eigen::VectorXd pw(r_eig.values.size());
  for (Eigen::Index i = 0; i < r_eig.values.size(); ++i) {
    pw(i) = std::pow(r_eig.values(i), p);
  }
  const Matrix recon = r_eig.basis * pw.asDiagonal() * r_eig.basis.adjoint();
  const double roundtrip_resid =
      (recon - phi.density()).norm() / std::max(1.0, phi.density().norm());

  RecordMeta meta;
  meta.check = "lemma41";
  meta.dim = ens.dim();
  meta.beta = ens.beta();
  meta.p = {p};
  std::ostringstream os;
  os << "identity_resid=" << identity_resid << " roundtrip_resid=" << roundtrip_resid
     << " phi_mass=" << phi.mass();
  meta.note = os.str();
  return make_record(Complex(std::max(identity_resid, roundtrip_resid), 0.0),
                     tol::modular, std::move(meta));
}

VerificationRecord chain_identity_check(const GibbsEnsemble& ens,
                                        const std::vector<Matrix>& A_list,
                                        const std::vector<int>& p_list) {
  if (A_list.empty() || A_list.size() != p_list.size()) {
    throw DimMismatch("chain_identity_check: A_list and p_list must match");
  }
  double budget = 0.0;
  for (int p : p_list) {
    if (p < 2) throw BadExponent("chain_identity_check: each p_j must be >= 2");
    budget += 1.0 / p;
  }
  if (std::abs(budget - 0.5) > 1e-12) {
    throw BudgetViolation("chain_identity_check: sum of 1/p_j must equal 1/2");
  }

  const int n = static_cast<int>(A_list.size());
  Matrix left = ens.omega();
  for (int j = 0; j < n; ++j) {
    const StateFunctional phi = phi_from_cone_vector(ens, A_list[j], p_list[j]);
    left = relative_modular_power_apply(ens, phi, Complex(1.0 / p_list[j], 0.0),
                                        left, true);
  }

  Matrix right = ens.omega();
  for (int j = 0; j < n; ++j) {
    const Complex half_power(0.5 / p_list[j], 0.0);
    right = modular_power_apply(ens, half_power, right);
    right = A_list[j] * right;
    right = modular_power_apply(ens, half_power, right);
  }

  const double scale = std::max({1.0, left.norm(), right.norm()});
  const double residual = (left - right).norm() / scale;

  RecordMeta meta;
  meta.check = "chain";
  meta.dim = ens.dim();
  meta.beta = ens.beta();
  meta.n = n;
  meta.p = p_list;
  return make_record(Complex(residual, 0.0), tol::modular, std::move(meta));
}

VerificationRecord lemma42_check(const GibbsEnsemble& ens, const Matrix& A, int p,
                                 const OptConfig& cfg) {
  if (p < 2 || p % 2 != 0) {
    throw OddP("lemma42_check: p must be an even integer >= 2");
  }
  const StateFunctional phi = phi_from_cone_vector(ens, A, p);
  const double a = std::pow(phi.mass(), 1.0 / p);

  // p-fold correlation with constant insertions Delta^{1/p}.
  Matrix v = ens.omega();
  const Complex inv_p(1.0 / p, 0.0);
  for (int k = 0; k < p; ++k) {
    v = A * v;
    if (k + 1 < p) v = modular_power_apply(ens, inv_p, v);
  }
  // <Omega, A Delta^{1/p} ... A Omega>: p factors of A, p-1 insertions.
  const Complex corr = hs_inner(ens.omega(), v);
  const double b =
      std::pow(std::max(0.0, real_part_checked(corr, tol::imag_residue, "lemma42_check")),
               1.0 / p);

  const Matrix cone_vec = modular_power_apply(ens, Complex(0.5 / p, 0.0), embed(ens, A));
  const NormEstimate est = am_norm(ens, cone_vec, static_cast<double>(p), cfg);
  const double c = est.value;

  const double scale = std::max(1.0, a);
  const double slack = opt_slack_for_dim(ens.dim());
  const double exact_gap = std::abs(a - b);
  const double opt_gap = std::abs(c - a);

  // Record the binding comparison; both must hold for a pass.
  const double exact_margin = 1e-9 * scale - exact_gap;
  const double opt_margin = slack * scale - opt_gap;
  const bool exact_binds = exact_margin <= opt_margin;

  RecordMeta meta;
  meta.check = "lemma42";
  meta.dim = ens.dim();
  meta.beta = ens.beta();
  meta.p = {p};
  std::ostringstream os;
  os << "phi_mass_root=" << a << " correlation_root=" << b << " am_estimate=" << c
     << " converged=" << est.converged;
  meta.note = os.str();
  VerificationRecord rec =
      make_record(Complex(exact_binds ? exact_gap : opt_gap, 0.0),
                  exact_binds ? 1e-9 * scale : slack * scale, std::move(meta));
  rec.pass = exact_gap <= 1e-9 * scale * (1.0 + tol::ineq) &&
             opt_gap <= slack * scale * (1.0 + tol::ineq);
  return rec;
}

VerificationRecord lp_holder_contraction_check(const GibbsEnsemble& ens,
                                               const Matrix& x,
                                               const std::vector<Matrix>& A_list,
                                               const std::vector<int>& p_list,
                                               const OptConfig& cfg) {
  if (A_list.size() < 2 || p_list.size() < 2) {
    throw DimMismatch("lp_holder_contraction_check: need two cone factors");
  }
  const int p = p_list[0];
  const int pprime = p_list[1];
  if (p < 2 || pprime < 2) {
    throw BadExponent("lp_holder_contraction_check: cone exponents must be >= 2");
  }
  const double r_inv = 1.0 / p + 1.0 / pprime;
  double r = 1.0 / r_inv;
  if (p_list.size() >= 3) {
    if (std::abs(1.0 / p_list[2] - r_inv) > 1e-12) {
      throw ExponentMismatch("lp_holder_contraction_check: 1/p + 1/p' != 1/r");
    }
    r = static_cast<double>(p_list[2]);
  }
  const double slack = opt_slack_for_dim(ens.dim());

  const StateFunctional phi1 = phi_from_cone_vector(ens, A_list[0], p);
  const StateFunctional phi2 = phi_from_cone_vector(ens, A_list[1], pprime);
  const Matrix zeta1 = modular_power_apply(ens, Complex(0.5 / p, 0.0), embed(ens, A_list[0]));
  const Matrix zeta2 =
      modular_power_apply(ens, Complex(0.5 / pprime, 0.0), embed(ens, A_list[1]));

  const double norm1 = am_norm(ens, zeta1, p, cfg).value;
  const double norm2 = am_norm(ens, zeta2, pprime, cfg).value;

  // Contraction: |x zeta_1|_p <= |x|_op |zeta_1|_p.
  const double lhs17 = am_norm(ens, x * zeta1, p, cfg).value;
  const double rhs17 = op_norm(x) * norm1;
  const double margin17 = rhs17 * (1.0 + slack) - lhs17;

  // Vector Hoelder: the L_r product of the cone vectors is the chain vector
  // Delta_{phi1}^{1/p} Delta_{phi2}^{1/p'} Omega.
  Matrix chain = ens.omega();
  chain = relative_modular_power_apply(ens, phi2, Complex(1.0 / pprime, 0.0), chain, true);
  chain = relative_modular_power_apply(ens, phi1, Complex(1.0 / p, 0.0), chain, true);
  const double lhs14 = am_norm(ens, chain, r, cfg).value;
  const double rhs14 = norm1 * norm2;
  const double margin14 = rhs14 * (1.0 + slack) * (1.0 + slack) - lhs14;

  const bool binds17 = margin17 <= margin14;
  RecordMeta meta;
  meta.check = "lp";
  meta.dim = ens.dim();
  meta.beta = ens.beta();
  meta.p = {p, pprime};
  std::ostringstream os;
  os << "contraction_lhs=" << lhs17 << " contraction_rhs=" << rhs17
     << " product_lhs=" << lhs14 << " product_rhs=" << rhs14 << " r=" << r;
  meta.note = os.str();
  VerificationRecord rec = make_record(
      Complex(binds17 ? lhs17 : lhs14, 0.0),
      binds17 ? rhs17 * (1.0 + slack) : rhs14 * (1.0 + slack) * (1.0 + slack),
      std::move(meta));
  rec.pass = margin17 >= -tol::ineq * std::max(rhs17, tol::margin_floor) &&
             margin14 >= -tol::ineq * std::max(rhs14, tol::margin_floor);
  return rec;
}

}  // namespace mh
