#pragma once

#include <vector>

#include "mh/types.hpp"

namespace mh {

// Complex exponent vector (z_1, ..., z_n) with Re z_j >= 0 and
// sum_j Re z_j <= alpha.
struct InsertionTuple {
  std::vector<Complex> z;
  double alpha = 1.0;

  InsertionTuple() = default;
  InsertionTuple(std::vector<Complex> exponents, double budget = 1.0);

  int n() const { return static_cast<int>(z.size()); }
  double re_sum() const;
  void validate() const;  // throws BudgetViolation
};

// Split of the m-th exponent, z_prime + z_dprime = z_m, used to cut an
// insertion chain into two Hilbert-space vectors. m is 1-based.
struct SplitSpec {
  int m = 1;
  Complex z_prime{0.0, 0.0};
  Complex z_dprime{0.0, 0.0};
};

// Checks: Re z' > 0, Re z'' > 0, z' + z'' = z_m,
//   Re z_1 + ... + Re z_{m-1} + Re z'' <= 1/2,
//   Re z_n + ... + Re z_{m+1} + Re z'  <= 1/2.
// Throws InvalidSplit on violation.
void validate_split(const InsertionTuple& tuple, const SplitSpec& split);

}  // namespace mh
