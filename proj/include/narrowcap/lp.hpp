#pragma once

#include "narrowcap/linalg.hpp"

namespace narrowcap {

/// Outcome of the small dense simplex below.
struct LpSolution {
    enum class Status { optimal, unbounded };
    Status status = Status::optimal;
    Vec x;
    double value = 0.0;
};

/// Maximize c.x subject to rows[i].x <= rhs[i], x free.
///
/// Restricted on purpose: every rhs must be >= 0 so the slack basis is
/// feasible and no phase-1 is needed. The margin LP this backs always has
/// that form. Bland's rule, so it terminates. The problem is never
/// infeasible under the rhs restriction (x = 0 is a feasible point).
LpSolution lp_maximize(const Vec& c, const std::vector<Vec>& rows, const Vec& rhs);

}  // namespace narrowcap
