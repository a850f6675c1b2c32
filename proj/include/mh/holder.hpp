#pragma once

#include <vector>

#include "mh/insertion.hpp"
#include "mh/nclp.hpp"
#include "mh/record.hpp"
#include "mh/standard_form.hpp"

namespace mh {

// For each j = 0..n, the smallest positive even integer p_j with
// 1/p_j <= min(Re z_{j+1}, Re z_j), under the boundary conventions
// z_0 = z_1 and z_{n+1} = z_n. Throws ZeroRealPart when some Re z_j == 0,
// since no even integer can satisfy the bound there.
std::vector<int> exponent_rule(const InsertionTuple& z);

// The (n+1)-point correlation with modular insertions,
//   <Omega, A_n Delta^{z_n} ( ... A_1 Delta^{z_1} (A_0 Omega) ... )>.
// A redundant closed-form evaluation through a single trace must agree with
// the nested chain to 1e-10 relative, or the call fails loudly.
Complex multi_correlation(const GibbsEnsemble& ens,
                          const std::vector<Matrix>& A_list,
                          const InsertionTuple& z);

// Slack of the wrap-around modular budget under the exponent rule:
//   (1 - sum Re z_j) - 1/(2 p_0) - 1/(2 p_n).
// The proof of the bound spends this leftover modular weight on the two
// boundary blocks; where the slack is negative the stated product bound is
// not a theorem (and is numerically false), so holder_check refuses there.
double holder_budget_slack(const InsertionTuple& z);

// The modular Hoelder bound: |multi_correlation| against the product of KMS
// p_j-norms with exponents from exponent_rule. Positive observables are
// required unless diagnostic mode is chosen, which evaluates Hermitian inputs
// without claiming the bound for them; diagnostic mode also skips the
// budget-slack refusal.
VerificationRecord holder_check(const GibbsEnsemble& ens,
                                const std::vector<Matrix>& A_list,
                                const InsertionTuple& z, bool diagnostic = false);

// Araki's correlation bound: the split insertion chain is cut into two
// Hilbert-space vectors built from conjugated exponents, and
//   |<left, right>| <= prod |X_j| * |Omega|^{2 z_0} * prod phi_j(1)^{Re z_j},
// with z_0 = 1 - sum Re z_j. Refuses to run on an invalid split.
VerificationRecord araki_bound_check(const GibbsEnsemble& ens,
                                     const std::vector<Matrix>& X_list,
                                     const std::vector<StateFunctional>& phi_list,
                                     const InsertionTuple& z, const SplitSpec& split);

// Finite-dimensional weighted trace inequalities for a faithful state omega:
//  (i)  |Tr(A omega^{1/2} B omega^{1/2})| <= |A|_{omega,p} |B|_{omega,q},
//       |A|_{omega,p}^p = Tr((omega^{1/2p} |A| omega^{1/2p})^p), 1/p + 1/q = 1,
//       for PSD A, B (the symmetrized pairing; the unsymmetrized Tr(omega A B)
//       fails the bound already at d = 2 and is recorded diagnostically).
//  (ii) |<A_2 D_{nu_2}^{1/p} A_1 D_{nu_1}^{1/q} A_0>_omega|
//         <= prod |A_j|_op (Tr nu_2)^{1/p} (Tr nu_1)^{1/q},
//       with D_nu^s xi = nu^s xi omega^{-s} composed inside the GNS pairing.
VerificationRecord finite_trace_holder_check(const std::vector<Matrix>& nu_list,
                                             const Matrix& omega_density,
                                             const std::vector<Matrix>& A_list,
                                             double p);

}  // namespace mh
