#pragma once

#include <cstdint>

#include "narrowcap/geometry.hpp"
#include "narrowcap/network.hpp"

namespace narrowcap {

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Output of the collapse construction: a depth-2 width-n ReLU network that
/// fixes every M sample and maps all of K to `collapsed_point`, which lies
/// within epsilon of K.
struct CollapseResult {
    Network network;
    Vec collapsed_point;
    double epsilon = 0.0;
};

/// Collapse K to a single point while fixing M, via hyperplane shift,
/// isometry to -e1, cone frame and ReLU, all affine maps inverted back.
/// Preconditions: K and M strictly separable, eps > 0. Propagates
/// NoSeparationError / ConeSearchError.
CollapseResult collapse_to_point(const PointCloud& k, const PointCloud& m, double eps);

/// Same construction with a caller-supplied separating direction (unit v
/// with v.x > v.y for all x in K, y in M). Used where the hyperplane is
/// known analytically instead of searched for.
CollapseResult collapse_with_direction(const PointCloud& k, const PointCloud& m,
                                       const Vec& v_unit, double eps);

/// Exact two-class fit: width <= dim, exactly 3 hidden ReLU layers + final
/// affine (4 affine stages). F = a1 on K1 samples, a2 on K2 samples.
/// The certificate must check out on the clouds.
Network two_class_exact_fit(const PointCloud& k1, const PointCloud& k2,
                            const SectorCertificate& cert, double a1, double a2);

/// Exact multi-class fit by sequential collapse followed by finite
/// interpolation of the collapsed points. Requires dim >= 2 and pairwise
/// hyperplane separability of each component from the union of the rest.
Network multi_class_exact_fit(const std::vector<std::pair<PointCloud, double>>& components,
                              std::uint64_t seed = 0);

/// Width <= 2 ReLU interpolation of arbitrary values on distinct points:
/// generic 1-D projection, then a deep two-channel realization of the
/// piecewise-linear interpolant (coordinate channel clipped at successive
/// breakpoints, accumulator channel kept positive by a constant shift).
Network finite_exact_fit(const PointCloud& points, const Vec& values,
                         std::uint64_t seed = 0);

}  // namespace narrowcap
