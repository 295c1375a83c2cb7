#pragma once

#include <optional>

namespace bsd2::detail {

// #E(F_p) for y² = x³ + a·x + b (p > 3 prime, nonsingular) by baby-step
// giant-step on random points of E and of its quadratic twist. Empty when
// the candidate set does not narrow to one value within the attempt budget.
std::optional<long> bsgs_point_count(long a, long b, long p);

}  // namespace bsd2::detail
