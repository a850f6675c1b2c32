#include "mh/insertion.hpp"

#include <cmath>

namespace mh {

InsertionTuple::InsertionTuple(std::vector<Complex> exponents, double budget)
    : z(std::move(exponents)), alpha(budget) {
  validate();
}

double InsertionTuple::re_sum() const {
  double s = 0.0;
  for (const Complex& w : z) s += w.real();
  return s;
}

void InsertionTuple::validate() const {
  if (!(alpha > 0.0)) {
    throw BudgetViolation("InsertionTuple: alpha must be positive");
  }
  for (const Complex& w : z) {
    if (!(w.real() >= 0.0)) {
      throw BudgetViolation("InsertionTuple: Re z_j must be nonnegative");
    }
  }
  if (re_sum() > alpha * (1.0 + 1e-12)) {
    throw BudgetViolation("InsertionTuple: sum of Re z_j exceeds the budget");
  }
}

void validate_split(const InsertionTuple& tuple, const SplitSpec& split) {
  tuple.validate();
  const int n = tuple.n();
  if (split.m < 1 || split.m > n) {
    throw InvalidSplit("split index out of range");
  }
  if (!(split.z_prime.real() > 0.0) || !(split.z_dprime.real() > 0.0)) {
    throw InvalidSplit("both split parts need positive real part");
  }
  const Complex zm = tuple.z[split.m - 1];
  if (std::abs(split.z_prime + split.z_dprime - zm) > 1e-12 * std::max(1.0, std::abs(zm))) {
    throw InvalidSplit("split parts must sum to z_m");
  }
  double head = split.z_dprime.real();  // Re z_1 + ... + Re z_{m-1} + Re z''
  for (int j = 0; j < split.m - 1; ++j) head += tuple.z[j].real();
  double tail = split.z_prime.real();  // Re z_n + ... + Re z_{m+1} + Re z'
  for (int j = split.m; j < n; ++j) tail += tuple.z[j].real();
  if (head > 0.5 + 1e-12 || tail > 0.5 + 1e-12) {
    throw InvalidSplit("partial sums around the split exceed 1/2");
  }
}

}  // namespace mh
