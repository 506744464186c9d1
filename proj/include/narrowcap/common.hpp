#pragma once

namespace narrowcap {

// Global absolute tolerance used by invariant checks (default 1e-9).
// The CLI maps the NARROWCAP_TOL environment variable onto this.
double global_tolerance();
void set_global_tolerance(double tol);

}  // namespace narrowcap
