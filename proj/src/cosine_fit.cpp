#include "narrowcap/cosine_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "narrowcap/common.hpp"
#include "narrowcap/rng.hpp"

namespace narrowcap {

double CosineFitProblem::effective_delta() const {
    if (delta_scale > 0.0) return delta_scale;
    double max_abs = 0.0;
    for (double t : targets) max_abs = std::max(max_abs, std::abs(t));
    return max_abs <= 1.0 ? 1.0 : 1.0 / max_abs;
}

std::pair<Mat, double> choose_projection(const PointCloud& points, std::uint64_t seed) {
    const std::size_t m = points.size();
    const std::size_t n = points.dim;
    if (m == 0) throw std::invalid_argument("choose_projection: empty point set");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (norm2(vsub(points.points[i], points.points[j])) <= 1e-12)
                throw std::invalid_argument("choose_projection: duplicate points");

    Rng rng(seed * 0x9e3779b97f4a7c15ULL + 11);
    for (int trial = 0; trial < 256; ++trial) {
        const Vec w = rng.unit_vector(n);
        Vec t(m);
        for (std::size_t i = 0; i < m; ++i) t[i] = dot(w, points.points[i]);
        double gap = std::numeric_limits<double>::infinity();
        double lo = t[0];
        for (std::size_t i = 0; i < m; ++i) {
            lo = std::min(lo, t[i]);
            for (std::size_t j = i + 1; j < m; ++j)
                gap = std::min(gap, std::abs(t[i] - t[j]));
        }
        if (m > 1 && gap <= global_tolerance()) continue;
        Mat w1(1, n);
        for (std::size_t j = 0; j < n; ++j) w1(0, j) = w[j];
        return {w1, 1.0 - lo};  // y_j = t_j + b1 >= 1 > 0
    }
    throw std::runtime_error("choose_projection: no generic direction found");
}

double choose_alpha(const Vec& y, std::uint64_t seed) {
    if (y.empty()) throw std::invalid_argument("choose_alpha: empty image list");
    Rng rng(seed * 0x2545f4914f6cdd1dULL + 13);
    for (int trial = 0; trial < 4096; ++trial) {
        const double alpha = rng.uniform();
        Vec z(y.size());
        bool ok = true;
        for (std::size_t j = 0; j < y.size(); ++j) {
            z[j] = std::cos(alpha * y[j]);
            if (std::abs(z[j]) <= global_tolerance()) ok = false;
        }
        for (std::size_t i = 0; ok && i < z.size(); ++i)
            for (std::size_t j = i + 1; ok && j < z.size(); ++j)
                if (std::abs(z[i] - z[j]) <= global_tolerance()) ok = false;
        if (ok) return alpha;
    }
    throw std::runtime_error("choose_alpha: resampling failed (images may coincide)");
}

double fit_torus_shift(const Vec& z, const Vec& targets, double tol, double budget) {
    if (z.size() != targets.size())
        throw std::invalid_argument("fit_torus_shift: size mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("fit_torus_shift: tol must be > 0");
    double max_z = 0.0;
    for (double v : z) {
        if (v == 0.0) throw std::invalid_argument("fit_torus_shift: z_j must be nonzero");
        max_z = std::max(max_z, std::abs(v));
    }
    for (double t : targets)
        if (std::abs(t) > 1.0 + 1e-12)
            throw std::invalid_argument("fit_torus_shift: targets must lie in [-1, 1]");

    // The residual is Lipschitz in w2 with constant max|z|, so this step
    // cannot scan past a sub-tol/2 optimum without flagging a grid point.
    const double h = tol / (2.0 * max_z);
    const std::size_t count = z.size();
    double best_err = std::numeric_limits<double>::infinity();
    double best_w = 0.0;
    const double steps = std::ceil(budget / h);
    for (double k = 0.0; k <= steps; k += 1.0) {
        const double w = k * h;
        double err = 0.0;
        for (std::size_t j = 0; j < count; ++j)
            err = std::max(err, std::abs(std::cos(w * z[j]) - targets[j]));
        if (err < tol) return w;
        if (err < best_err) { best_err = err; best_w = w; }
    }
    throw SearchBudgetError("fit_torus_shift: search budget exceeded", best_w, best_err);
}

CosineFitResult cosine_fit(const CosineFitProblem& problem, std::uint64_t seed, double budget) {
    const std::size_t m = problem.points.size();
    const std::size_t n = problem.points.dim;
    if (problem.targets.size() != m)
        throw std::invalid_argument("cosine_fit: targets count != point count");
    if (!(problem.tolerance > 0.0))
        throw std::invalid_argument("cosine_fit: tolerance must be > 0");
    const double delta = problem.effective_delta();
    for (double t : problem.targets)
        if (delta * std::abs(t) > 1.0 + 1e-12)
            throw std::invalid_argument("cosine_fit: delta * |target| must be <= 1");

    auto [w1, b1] = choose_projection(problem.points, seed);
    Vec y(m);
    for (std::size_t j = 0; j < m; ++j)
        y[j] = dot(w1.row(0), problem.points.points[j]) + b1;
    const double alpha = choose_alpha(y, seed);

    Vec z(m), scaled(m);
    for (std::size_t j = 0; j < m; ++j) {
        z[j] = std::cos(alpha * y[j]);
        scaled[j] = delta * problem.targets[j];
    }
    const double w2 = fit_torus_shift(z, scaled, problem.tolerance * delta, budget);

    CosineFitResult result;
    result.alpha = alpha;
    result.w1 = w1;
    result.b1 = b1;
    result.w2 = w2;
    for (std::size_t j = 0; j < m; ++j)
        result.achieved_error =
            std::max(result.achieved_error, std::abs(std::cos(w2 * z[j]) - scaled[j]));

    Mat w1_alpha(1, n);
    for (std::size_t j = 0; j < n; ++j) w1_alpha(0, j) = alpha * w1(0, j);
    Layer first{std::move(w1_alpha), {alpha * b1}, Activation::cosine()};
    Mat w2_m(1, 1);
    w2_m(0, 0) = w2;
    Layer second{std::move(w2_m), {0.0}, Activation::cosine()};
    Mat w_out(1, 1);
    w_out(0, 0) = 1.0 / delta;
    result.network = Network({std::move(first), std::move(second)}, std::move(w_out), {0.0});
    return result;
}

}  // namespace narrowcap
