#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "narrowcap/linalg.hpp"

namespace narrowcap {

/// Finite sample cloud standing in for a compact set. All containment /
/// separation claims in this library are certified on the samples.
struct PointCloud {
    std::size_t dim = 0;
    std::vector<Vec> points;

    PointCloud() = default;
    PointCloud(std::size_t d, std::vector<Vec> pts);
    static PointCloud single(Vec p);

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    Vec centroid() const;
    void append(const PointCloud& other);
};

/// Witness that v.x > offset on one cloud and v.x < offset on the other,
/// with `margin` the smallest |v.x - offset| over both.
struct HyperplaneCertificate {
    Vec normal;     // unit length
    double offset = 0.0;
    double margin = 0.0;
};

/// Witness for the sector condition: K1 inside the open cone
/// {apex + sum lambda_j v_j, lambda_j > 0}, K2 outside its closure.
/// Frame columns are v_1..v_n.
struct SectorCertificate {
    Vec apex;
    Mat frame;
};

/// Frame produced while realizing the collapse map: columns of `frame` are
/// -u_j - delta*e1 with u_j in span(e2..en); `frame_inverse` is closed-form.
struct ConeFrame {
    double delta = 1.0;
    double scale = 1.0;
    Mat frame;
    Mat frame_inverse;
};

struct SectorCheckReport {
    bool ok = false;
    std::vector<std::size_t> k1_violations;  // indices with some lambda <= 0
    std::vector<std::size_t> k2_violations;  // indices with all lambda > 0
};

struct NoSeparationError : std::runtime_error {
    Vec witness;  // approximate point of hull overlap
    explicit NoSeparationError(std::string msg, Vec w)
        : std::runtime_error(std::move(msg)), witness(std::move(w)) {}
};

struct NoSectorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConeSearchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Orthogonal map sending the given unit vector to -e1 (Householder
/// reflection; the identity when v is already -e1). Isometry is all the
/// collapse construction needs from the "rotation".
Mat householder_to_minus_e1(const Vec& v);

/// Max-margin separating hyperplane: v.x > q on `above`, v.x < q on `below`.
/// Solved as a bounded LP over (v, q, margin) with |v_i| <= 1, then v is
/// renormalized to unit length and q recentered. Throws NoSeparationError
/// when no positive margin exists on the samples.
HyperplaneCertificate find_separating_hyperplane(const PointCloud& above,
                                                 const PointCloud& below);

/// Randomized multi-start search for a sector certificate. Failure means
/// "not found", not "none exists". Deterministic for a fixed seed.
SectorCertificate find_sector_certificate(const PointCloud& k1, const PointCloud& k2,
                                          std::uint64_t seed = 0, int budget = 200);

/// Cone frame with K1 in the negative-first-component cone S- and M1 in S+.
/// Preconditions: every K1 first component < 0, every M1 first component > 0.
ConeFrame build_cone_frame(const PointCloud& k1, const PointCloud& m1);

SectorCheckReport check_sector_containment(const SectorCertificate& cert,
                                           const PointCloud& k1, const PointCloud& k2);

/// True iff the orthogonal projections of M's points shifted by b onto
/// span(basis) are pairwise distinct (min pairwise distance > 1e-9).
bool projection_injectivity_check(const PointCloud& m, const std::vector<Vec>& basis,
                                  const Vec& shift);

}  // namespace narrowcap
