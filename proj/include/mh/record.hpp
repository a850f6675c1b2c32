#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mh/types.hpp"

namespace mh {

// Instance descriptor attached to every check result. Fields that do not
// apply to a given check are left at their defaults.
struct RecordMeta {
  std::string check;
  int dim = 0;
  double beta = 0.0;
  int n = 0;
  std::vector<int> p;
  std::vector<Complex> z;
  std::uint64_t seed = 0;
  std::string note;
};

// One inequality (or identity-residual) check: pass iff
// margin >= -tol::ineq * max(rhs, margin_floor).
struct VerificationRecord {
  Complex lhs{0.0, 0.0};
  double rhs = 0.0;
  double margin = 0.0;      // rhs - |lhs|
  double rel_margin = 0.0;  // margin / max(rhs, margin_floor)
  bool pass = false;
  RecordMeta meta;
};

VerificationRecord make_record(Complex lhs, double rhs, RecordMeta meta);

}  // namespace mh
