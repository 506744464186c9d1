#pragma once

#include <cstdint>

#include "narrowcap/geometry.hpp"
#include "narrowcap/network.hpp"

namespace narrowcap {

/// Fit targets on a finite point set with a width-1 depth-3 cosine network
/// F(x) = (1/delta) cos(W2 cos(alpha W1 x + alpha b1)).
struct CosineFitProblem {
    PointCloud points;
    Vec targets;
    double tolerance = 0.05;    // on |F(x_j) - f(x_j)|
    double delta_scale = 0.0;   // 0 = default min(1, 1/max|target|)

    double effective_delta() const;
};

struct CosineFitResult {
    double alpha = 0.0;    // frequency common to the first layer, in [0,1]
    Mat w1;                // 1 x n
    double b1 = 0.0;
    double w2 = 0.0;
    double achieved_error = 0.0;  // torus residual max_j |cos(w2 z_j) - delta f_j|
    Network network;
};

struct SearchBudgetError : std::runtime_error {
    double best_w2 = 0.0;
    double best_error = 0.0;
    SearchBudgetError(std::string msg, double w2, double err)
        : std::runtime_error(std::move(msg)), best_w2(w2), best_error(err) {}
};

/// Affine 1-D projection with pairwise-distinct, strictly positive images.
std::pair<Mat, double> choose_projection(const PointCloud& points, std::uint64_t seed = 0);

/// Uniform alpha in [0,1] such that z_j = cos(alpha y_j) are pairwise
/// distinct and bounded away from 0. Almost every alpha works; resamples
/// until the finite checks pass.
double choose_alpha(const Vec& y, std::uint64_t seed = 0);

/// Smallest grid point w2 (step tol / (2 max|z|)) with
/// max_j |cos(w2 z_j) - t_j| < tol, scanning [0, budget]. Throws
/// SearchBudgetError carrying the best candidate when the cap is reached.
double fit_torus_shift(const Vec& z, const Vec& targets, double tol, double budget = 1e7);

CosineFitResult cosine_fit(const CosineFitProblem& problem, std::uint64_t seed = 0,
                           double budget = 1e7);

}  // namespace narrowcap
