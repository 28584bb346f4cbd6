#pragma once

#include <optional>
#include <vector>

#include "strataforms/rational.hpp"

namespace strataforms {

using RatMatrix = std::vector<std::vector<Rational>>;
using RatVector = std::vector<Rational>;

// Exact rank by fraction-free (Bareiss) elimination over big integers; rows
// are cleared of denominators first, which preserves rank.
int rank_bareiss(const RatMatrix& a);

// Solves A x = b exactly; free variables are set to zero (the minimum-support
// back-substitution choice). Returns nullopt when inconsistent.
std::optional<RatVector> solve_linear(const RatMatrix& a, const RatVector& b);

// Basis of the (right) nullspace of A, exact.
std::vector<RatVector> nullspace(const RatMatrix& a);

RatVector mat_vec(const RatMatrix& a, const RatVector& x);
RatMatrix transpose(const RatMatrix& a);

}  // namespace strataforms
