#pragma once

#include <map>
#include <optional>
#include <string>

#include "narrowcap/dataset.hpp"
#include "narrowcap/network.hpp"

namespace narrowcap {

/// Axis-aligned box standing in for a compact M with interior and boundary.
struct BoxRegion {
    Vec lower;
    Vec upper;

    BoxRegion() = default;
    BoxRegion(Vec lo, Vec hi);
    std::size_t dim() const { return lower.size(); }
};

/// Grid check of the boundary-maximum property. `violated` refers to the
/// maximum side (interior_max > boundary_max + tolerance); the minimum side
/// (the -F form of the same statement) is reported alongside from the same
/// sweep. tolerance = lipschitz_bound * grid spacing * sqrt(dim), so a true
/// violation larger than 2*tolerance cannot hide between grid points.
struct MaxPrincipleReport {
    double interior_max = 0.0;
    double boundary_max = 0.0;
    double interior_min = 0.0;
    double boundary_min = 0.0;
    double tolerance = 0.0;
    bool violated = false;      // max side
    bool min_violated = false;  // min side, i.e. -F
    std::optional<Vec> witness;      // interior point beating the boundary max
    std::optional<Vec> min_witness;  // interior point under the boundary min

    bool any_violation() const { return violated || min_violated; }
};

/// Sup-norm error max_j |target_j - F(x_j)| over the dataset. Zero (within
/// tolerance) exactly when the network interpolates the samples.
double uuac(const Network& net, const LabeledDataset& data);

MaxPrincipleReport max_principle_check(const Network& net, const BoxRegion& region,
                                       double grid_step);

/// Activation-pattern census for ReLU networks with n-dimensional output.
struct AffineRegionReport {
    std::vector<std::string> patterns;            // per sample, "01|10" style
    std::map<std::string, std::vector<std::size_t>> groups;
    std::vector<std::size_t> deep_interior;       // samples with image deep inside F(samples)
    bool deep_share_one_pattern = false;
    double deep_threshold = 0.0;                  // 5% of image cloud diameter
};

AffineRegionReport affine_region_check(const Network& net, const PointCloud& samples);

/// The two uniqueness counterexample pairs, with their probe evaluations.
struct UniquenessFixtures {
    Network example1_a;  // ReLU(-ReLU(x) + 1)
    Network example1_b;  // ReLU(-ReLU(x - 1) + 1)
    Network example2_a;  // leaky pair, alpha = 0.5
    Network example2_b;
    Vec example1_probes;  // {0, 1, 2}
    Vec example2_probes;  // {-1, 0, 1}
    std::vector<Vec> example1_values;  // [net][probe]
    std::vector<Vec> example2_values;
};

UniquenessFixtures uniqueness_fixtures();

}  // namespace narrowcap
