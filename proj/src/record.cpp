#include "mh/record.hpp"

#include <algorithm>
#include <cmath>

namespace mh {

VerificationRecord make_record(Complex lhs, double rhs, RecordMeta meta) {
  VerificationRecord rec;
  rec.lhs = lhs;
  rec.rhs = rhs;
  rec.margin = rhs - std::abs(lhs);
  rec.rel_margin = rec.margin / std::max(rhs, tol::margin_floor);
  rec.pass = rec.margin >= -tol::ineq * std::max(rhs, tol::margin_floor);
  rec.meta = std::move(meta);
  return rec;
}

}  // namespace mh
