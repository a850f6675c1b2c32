#pragma once

#include <cstdint>
#include <string>

#include "mh/insertion.hpp"
#include "mh/types.hpp"

namespace mh {

enum class HamiltonianKind { gue, diagonal, ising_chain };

HamiltonianKind hamiltonian_kind_from_string(const std::string& name);
std::string to_string(HamiltonianKind kind);

// gue: (G + G*)/2 with standard complex Gaussian entries, size_param = d.
// diagonal: spectrum uniform in [0, 1], size_param = d.
// ising_chain: transverse-field Ising on size_param sites, open boundary,
//   H = -sum Z_i Z_{i+1} - g sum X_i, dimension 2^size_param <= 16.
Matrix gen_hamiltonian(HamiltonianKind kind, int size_param, std::uint64_t seed,
                       double g = 1.0);

// U diag(s) U* with Haar U from Gaussian QR and spectrum log-uniform in
// [1/conditioning, 1].
Matrix gen_positive(int dim, std::uint64_t seed, double conditioning);

// Insertion tuple sampled strictly inside the budget region: each Re part is
// at least re_floor, the excess above the floors is flat-Dirichlet distributed
// and scaled by a uniform total; Im parts are uniform in [-im_T, im_T].
InsertionTuple gen_insertions(int n, double alpha, double re_floor, double im_T,
                              std::uint64_t seed);

// Plain complex Gaussian matrix, for non-positive sample operators.
Matrix gen_ginibre(int dim, std::uint64_t seed);

}  // namespace mh
