#include "narrowcap/constructors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "narrowcap/common.hpp"
#include "narrowcap/rng.hpp"

namespace narrowcap {

namespace {

CollapseResult collapse_impl(const PointCloud& k, const PointCloud& m, const Vec& v,
                             double eps) {
    const std::size_t n = k.dim;

    // Nearest K sample to the hyperplane and the full separation gap.
    double k_min = std::numeric_limits<double>::infinity();
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double d = dot(v, k.points[i]);
        if (d < k_min) { k_min = d; nearest = i; }
    }
    double m_max = -std::numeric_limits<double>::infinity();
    for (const auto& p : m.points) m_max = std::max(m_max, dot(v, p));
    const double gap = k_min - m_max;
    if (!(gap > 0.0))
        throw NoSeparationError("collapse: supplied direction does not separate",
                                vscale(0.5, vadd(k.points[nearest], m.points[0])));

    // Shift the hyperplane so the nearest K point sits at distance eps/2;
    // when eps exceeds the gap, shift only to the middle of the gap so the
    // separation survives (the collapsed point is then even closer to K).
    const double half = 0.5 * std::min(eps, gap);
    const Vec a = k.points[nearest];
    const Vec a_tilde = vsub(a, vscale(half, v));

    const Mat q = householder_to_minus_e1(v);
    // y = Q x - Q a_tilde puts K in {y1 < 0} and M in {y1 > 0}.
    const Vec q_shift = matvec(q, a_tilde);
    auto map_cloud = [&](const PointCloud& c) {
        PointCloud out;
        out.dim = n;
        out.points.reserve(c.size());
        for (const auto& p : c.points) out.points.push_back(vsub(matvec(q, p), q_shift));
        return out;
    };
    const PointCloud k_img = map_cloud(k);
    const PointCloud m_img = map_cloud(m);

    const ConeFrame cone = build_cone_frame(k_img, m_img);

    // Hidden layer: z = -B^{-1} Q (x - a_tilde); ReLU kills the K side
    // exactly and passes the M side. The final affine undoes it with the
    // closed form (-B^{-1} Q)^{-1} = -Q B, which is far more accurate than a
    // numerical inverse here: B B^{-1} is exact (the frame scale is a power
    // of two) and the Householder factor is involutive.
    Mat w_hidden = matmul(cone.frame_inverse, q);
    for (auto& val : w_hidden.data) val = -val;
    Vec b_hidden = vscale(-1.0, matvec(w_hidden, a_tilde));

    Mat w_final = matmul(q, cone.frame);
    for (auto& val : w_final.data) val = -val;

    Layer hidden{std::move(w_hidden), std::move(b_hidden), Activation::relu()};
    CollapseResult result;
    result.network = Network({std::move(hidden)}, std::move(w_final), a_tilde);
    result.collapsed_point = a_tilde;
    result.epsilon = eps;
    return result;
}

}  // namespace

CollapseResult collapse_to_point(const PointCloud& k, const PointCloud& m, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("collapse_to_point: eps must be > 0");
    if (k.empty() || m.empty()) throw std::invalid_argument("collapse_to_point: empty cloud");
    const HyperplaneCertificate cert = find_separating_hyperplane(k, m);
    return collapse_impl(k, m, cert.normal, eps);
}

CollapseResult collapse_with_direction(const PointCloud& k, const PointCloud& m,
                                       const Vec& v_unit, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("collapse: eps must be > 0");
    if (std::abs(norm2(v_unit) - 1.0) > 1e-9)
        throw std::invalid_argument("collapse: direction must be a unit vector");
    return collapse_impl(k, m, v_unit, eps);
}

Network two_class_exact_fit(const PointCloud& k1, const PointCloud& k2,
                            const SectorCertificate& cert, double a1, double a2) {
    if (!std::isfinite(a1) || !std::isfinite(a2))
        throw std::invalid_argument("two_class_exact_fit: target values must be finite");
    const SectorCheckReport check = check_sector_containment(cert, k1, k2);
    if (!check.ok)
        throw std::invalid_argument("two_class_exact_fit: certificate does not hold on the samples");
    const std::size_t n = k1.dim;

    // First layer: W1 = -V^{-1}, b1 = -W1 c maps the sector onto the
    // negative orthant, so ReLU sends every K1 sample exactly to 0 while K2
    // lands in the nonnegative orthant away from 0. W1 is only applied one
    // way, so a plain numerical inverse is accurate enough.
    Mat w1 = inverse(cert.frame);
    for (auto& v : w1.data) v = -v;
    Vec b1 = vscale(-1.0, matvec(w1, cert.apex));
    Network f1({Layer{w1, b1, Activation::relu()}}, Mat::identity(n), Vec(n, 0.0));

    PointCloud img2;
    img2.dim = n;
    img2.points.reserve(k2.size());
    double min_sum = std::numeric_limits<double>::infinity();
    for (const auto& p : k2.points) {
        Vec y = f1.forward(p);
        const double s = std::accumulate(y.begin(), y.end(), 0.0);
        min_sum = std::min(min_sum, s);
        img2.points.push_back(std::move(y));
    }
    if (!(min_sum > 0.0))
        throw ConstructionError("two_class_exact_fit: no positive q separates the layer-1 images");

    // Diagonal hyperplane (1,...,1).x = q with q = min_sum / 2 separates
    // {0} from the K2 images. Two collapses give the two distinct vectors.
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    Vec diag(n, inv_sqrt_n);

    const PointCloud zero_cloud = PointCloud::single(Vec(n, 0.0));
    const double gap1 = min_sum * inv_sqrt_n;
    CollapseResult c1 = collapse_with_direction(zero_cloud, img2, vscale(-1.0, diag), gap1);
    const Vec u1 = c1.collapsed_point;

    PointCloud img2_after;
    img2_after.dim = n;
    img2_after.points.reserve(img2.size());
    for (const auto& p : img2.points) img2_after.points.push_back(c1.network.forward(p));

    double min_sum_after = std::numeric_limits<double>::infinity();
    for (const auto& p : img2_after.points)
        min_sum_after = std::min(min_sum_after, std::accumulate(p.begin(), p.end(), 0.0));
    const double u1_sum = std::accumulate(u1.begin(), u1.end(), 0.0);
    const double gap2 = (min_sum_after - u1_sum) * inv_sqrt_n;
    if (!(gap2 > 0.0))
        throw ConstructionError("two_class_exact_fit: collapsed point not separated from images");
    CollapseResult c2 = collapse_with_direction(img2_after, PointCloud::single(u1), diag, gap2);
    const Vec u2_raw = c2.collapsed_point;
    const Vec u1_final = c2.network.forward(u1);

    // Scalar readout solving w.u1 + b = a1, w.u2 + b = a2 along u2 - u1.
    const Vec d = vsub(u2_raw, u1_final);
    const double dd = dot(d, d);
    Vec w_read(n, 0.0);
    if (std::abs(a2 - a1) > 0.0) {
        if (dd <= 0.0)
            throw ConstructionError("two_class_exact_fit: collapsed vectors coincide");
        w_read = vscale((a2 - a1) / dd, d);
    }
    Mat w_read_m(1, n);
    for (std::size_t j = 0; j < n; ++j) w_read_m(0, j) = w_read[j];
    Network readout = Network::affine(std::move(w_read_m), {a1 - dot(w_read, u1_final)});

    Network net = compose(readout, compose(c2.network, compose(c1.network, f1)));
    return net;
}

Network finite_exact_fit(const PointCloud& points, const Vec& values, std::uint64_t seed) {
    const std::size_t m = points.size();
    const std::size_t n = points.dim;
    if (m == 0) throw std::invalid_argument("finite_exact_fit: empty point set");
    if (values.size() != m)
        throw std::invalid_argument("finite_exact_fit: values count != point count");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (norm2(vsub(points.points[i], points.points[j])) <= 1e-12)
                throw std::invalid_argument("finite_exact_fit: duplicate points");

    if (m == 1) {
        Mat w(1, n, 0.0);
        return Network::affine(std::move(w), {values[0]});
    }

    // Generic 1-D projection; keep the direction with the best worst-case
    // gap among a few candidates (verified injective).
    Rng rng(seed * 0x2545f4914f6cdd1dULL + 7);
    Vec best_dir;
    double best_gap = -1.0;
    for (int trial = 0; trial < 64; ++trial) {
        const Vec w = rng.unit_vector(n);
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                gap = std::min(gap, std::abs(dot(w, points.points[i]) - dot(w, points.points[j])));
        if (gap > best_gap) { best_gap = gap; best_dir = w; }
    }
    if (!(best_gap > 1e-9))
        throw ConstructionError("finite_exact_fit: no generic projection direction found");
    if (n > 1 && !projection_injectivity_check(points, {best_dir}, Vec(n, 0.0)))
        throw ConstructionError("finite_exact_fit: projection is not injective on the samples");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dot(best_dir, points.points[a]) < dot(best_dir, points.points[b]);
    });
    Vec t(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        t[i] = dot(best_dir, points.points[order[i]]);
        y[i] = values[order[i]];
    }

    if (m == 2) {
        const double slope = (y[1] - y[0]) / (t[1] - t[0]);
        Mat w(1, n);
        for (std::size_t j = 0; j < n; ++j) w(0, j) = slope * best_dir[j];
        return Network::affine(std::move(w), {y[0] - slope * t[0]});
    }

    // Piecewise-linear interpolant y1 + sum c_i (t - t_i)^+ with kink
    // coefficients c_i = s_i - s_{i-1}.
    Vec c(m - 1);
    double prev_slope = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double slope = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
        c[i] = slope - prev_slope;
        prev_slope = slope;
    }
    // Shift keeping the accumulator channel positive at every stage/sample.
    double p_min = 0.0;
    for (std::size_t stage = 0; stage + 1 < m; ++stage) {
        for (std::size_t k = 0; k < m; ++k) {
            double p = y[0];
            for (std::size_t i = 0; i < stage; ++i) p += c[i] * std::max(t[k] - t[i], 0.0);
            p_min = std::min(p_min, p);
        }
    }
    const double shift = 1.0 - p_min;

    std::vector<Layer> hidden;
    // Layer 1: channel a = (w.x - t1)^+, channel b = const y1 + shift.
    {
        Mat w(2, n, 0.0);
        for (std::size_t j = 0; j < n; ++j) w(0, j) = best_dir[j];
        hidden.push_back(Layer{std::move(w), {-t[0], y[0] + shift}, Activation::relu()});
    }
    // Layer i: a <- (a - (t_i - t_{i-1}))^+  [= (t - t_i)^+ on the samples],
    //          b <- b + c_{i-1} a            [accumulates kink i-1].
    for (std::size_t i = 1; i + 1 < m; ++i) {
        Mat w(2, 2, 0.0);
        w(0, 0) = 1.0;
        w(1, 0) = c[i - 1];
        w(1, 1) = 1.0;
        hidden.push_back(Layer{std::move(w), {-(t[i] - t[i - 1]), 0.0}, Activation::relu()});
    }
    Mat w_final(1, 2);
    w_final(0, 0) = c[m - 2];
    w_final(0, 1) = 1.0;
    return Network(std::move(hidden), std::move(w_final), {-shift});
}

Network multi_class_exact_fit(const std::vector<std::pair<PointCloud, double>>& components,
                              std::uint64_t seed) {
    if (components.empty())
        throw std::invalid_argument("multi_class_exact_fit: no components");
    const std::size_t n = components.front().first.dim;
    if (n < 2)
        throw std::invalid_argument("multi_class_exact_fit: requires dim >= 2");
    for (const auto& [cloud, value] : components) {
        if (cloud.empty()) throw std::invalid_argument("multi_class_exact_fit: empty component");
        if (cloud.dim != n) throw std::invalid_argument("multi_class_exact_fit: dimension mismatch");
        (void)value;
    }
    const std::size_t d = components.size();
    if (d == 1) {
        Mat w(1, n, 0.0);
        return Network::affine(std::move(w), {components[0].second});
    }

    // Upfront: every component must be hyperplane-separable from the union
    // of the rest. The smallest margin sets the epsilon scale.
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d; ++j) {
        PointCloud rest;
        rest.dim = n;
        for (std::size_t l = 0; l < d; ++l)
            if (l != j) rest.append(components[l].first);
        const HyperplaneCertificate cert = find_separating_hyperplane(components[j].first, rest);
        min_margin = std::min(min_margin, cert.margin);
    }

    for (int attempt = 0; attempt < 40; ++attempt) {
        const double eps = min_margin / std::pow(2.0, attempt + 1);
        Network current = Network::affine(Mat::identity(n), Vec(n, 0.0));
        std::vector<Vec> collapsed;
        bool ok = true;
        for (std::size_t j = 0; j < d && ok; ++j) {
            PointCloud k_img;
            k_img.dim = n;
            for (const auto& p : components[j].first.points)
                k_img.points.push_back(current.forward(p));
            PointCloud m_img;
            m_img.dim = n;
            for (std::size_t l = j + 1; l < d; ++l)
                for (const auto& p : components[l].first.points)
                    m_img.points.push_back(current.forward(p));
            for (const auto& p : collapsed) m_img.points.push_back(p);

            try {
                CollapseResult col = collapse_to_point(k_img, m_img, eps);
                for (auto& p : collapsed) p = col.network.forward(p);
                collapsed.push_back(col.collapsed_point);
                current = compose(col.network, current);
            } catch (const NoSeparationError&) {
                ok = false;  // shrink eps and restart the pipeline
            }
        }
        if (!ok) continue;

        PointCloud anchors(n, collapsed);
        Vec anchor_values;
        for (const auto& [cloud, value] : components) {
            (void)cloud;
            anchor_values.push_back(value);
        }
        Network readout = finite_exact_fit(anchors, anchor_values, seed);
        return compose(readout, current);
    }
    throw ConstructionError("multi_class_exact_fit: epsilon schedule exhausted");
}

}  // namespace narrowcap
