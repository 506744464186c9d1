#include "narrowcap/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "narrowcap/rng.hpp"

namespace narrowcap {

BoxRegion::BoxRegion(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.empty())
        throw std::invalid_argument("BoxRegion: bounds dimension mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]))
            throw std::invalid_argument("BoxRegion: lower must be < upper componentwise");
}

double uuac(const Network& net, const LabeledDataset& data) {
    if (data.size() == 0) throw std::invalid_argument("uuac: empty dataset");
    if (net.output_dim() != 1) throw std::invalid_argument("uuac: network output is not scalar");
    if (net.input_dim() != data.points.dim)
        throw std::invalid_argument("uuac: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        worst = std::max(worst, std::abs(data.targets[i] - net.forward(data.points.points[i])[0]));
    return worst;
}

MaxPrincipleReport max_principle_check(const Network& net, const BoxRegion& region,
                                       double grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("max_principle_check: step must be > 0");
    if (net.output_dim() != 1)
        throw std::invalid_argument("max_principle_check: network output is not scalar");
    const std::size_t dim = region.dim();
    if (net.input_dim() != dim)
        throw std::invalid_argument("max_principle_check: dimension mismatch");
    const double lip = lipschitz_bound(net);  // throws for step activation

    std::vector<std::size_t> counts(dim);
    std::vector<double> spacing(dim);
    double h_max = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double len = region.upper[i] - region.lower[i];
        counts[i] = static_cast<std::size_t>(std::ceil(len / grid_step)) + 1;
        if (counts[i] < 2) counts[i] = 2;
        spacing[i] = len / static_cast<double>(counts[i] - 1);
        h_max = std::max(h_max, spacing[i]);
    }

    MaxPrincipleReport rep;
    rep.tolerance = lip * h_max * std::sqrt(static_cast<double>(dim));
    rep.interior_max = rep.boundary_max = -std::numeric_limits<double>::infinity();
    rep.interior_min = rep.boundary_min = std::numeric_limits<double>::infinity();
    Vec arg_imax, arg_imin;

    constexpr std::size_t kBatch = 8192;
    std::vector<double> pts(kBatch * dim);
    std::vector<double> vals(kBatch);
    std::vector<char> interior_flag(kBatch);
    std::vector<std::size_t> idx(dim, 0);
    bool done = false;

    // One sweep over the full product grid; boundary = any index extreme.
    while (!done) {
        std::size_t filled = 0;
        while (filled < kBatch && !done) {
            bool interior = true;
            for (std::size_t i = 0; i < dim; ++i) {
                pts[filled * dim + i] =
                    region.lower[i] + spacing[i] * static_cast<double>(idx[i]);
                if (idx[i] == 0 || idx[i] + 1 == counts[i]) interior = false;
            }
            interior_flag[filled] = interior ? 1 : 0;
            ++filled;
            std::size_t axis = dim;
            while (axis-- > 0) {
                if (++idx[axis] < counts[axis]) break;
                idx[axis] = 0;
                if (axis == 0) done = true;
            }
        }
        net.forward_batch(pts.data(), filled, vals.data());
        for (std::size_t p = 0; p < filled; ++p) {
            const double v = vals[p];
            if (interior_flag[p]) {
                if (v > rep.interior_max) {
                    rep.interior_max = v;
                    arg_imax.assign(pts.begin() + static_cast<std::ptrdiff_t>(p * dim),
                                    pts.begin() + static_cast<std::ptrdiff_t>((p + 1) * dim));
                }
                if (v < rep.interior_min) {
                    rep.interior_min = v;
                    arg_imin.assign(pts.begin() + static_cast<std::ptrdiff_t>(p * dim),
                                    pts.begin() + static_cast<std::ptrdiff_t>((p + 1) * dim));
                }
            } else {
                rep.boundary_max = std::max(rep.boundary_max, v);
                rep.boundary_min = std::min(rep.boundary_min, v);
            }
        }
    }

    rep.violated = rep.interior_max > rep.boundary_max + rep.tolerance;
    rep.min_violated = rep.interior_min < rep.boundary_min - rep.tolerance;
    if (rep.violated) rep.witness = arg_imax;
    if (rep.min_violated) rep.min_witness = arg_imin;
    return rep;
}

namespace {

// 2-D convex hull (monotone chain), counterclockwise, no duplicates.
std::vector<Vec> hull_2d(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Vec> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    const std::size_t lower_size = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower_size && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

double dist_point_segment(const Vec& p, const Vec& a, const Vec& b) {
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2, 0.0, 1.0);
    const double px = a[0] + t * dx - p[0], py = a[1] + t * dy - p[1];
    return std::sqrt(px * px + py * py);
}

// Distance from an image point to the boundary of the image hull; 0 when the
// point is on or outside the hull.
double depth_2d(const Vec& p, const std::vector<Vec>& hull) {
    if (hull.size() < 3) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec& a = hull[i];
        const Vec& b = hull[(i + 1) % hull.size()];
        const double cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        if (cross <= 0.0) return 0.0;  // outside or on an edge
        d = std::min(d, dist_point_segment(p, a, b));
    }
    return d;
}

}  // namespace

AffineRegionReport affine_region_check(const Network& net, const PointCloud& samples) {
    for (const auto& l : net.hidden())
        if (l.activation.kind != Activation::Kind::relu)
            throw std::invalid_argument("affine_region_check: network must be pure ReLU");
    if (net.input_dim() != samples.dim)
        throw std::invalid_argument("affine_region_check: dimension mismatch");
    if (net.output_dim() != net.input_dim())
        throw std::invalid_argument("affine_region_check: output dimension must equal input dimension");

    AffineRegionReport rep;
    const std::size_t m = samples.size();
    std::vector<Vec> images;
    images.reserve(m);
    for (std::size_t s = 0; s < m; ++s) {
        const Vec& x = samples.points[s];
        std::string pattern;
        Vec cur = x;
        for (std::size_t li = 0; li < net.hidden().size(); ++li) {
            const Layer& l = net.hidden()[li];
            Vec z = vadd(matvec(l.weights, cur), l.bias);
            if (li) pattern += '|';
            for (auto& v : z) {
                pattern += (v > 0.0) ? '1' : '0';
                v = l.activation.apply(v);
            }
            cur = std::move(z);
        }
        images.push_back(vadd(matvec(net.final_weights(), cur), net.final_bias()));
        rep.groups[pattern].push_back(s);
        rep.patterns.push_back(std::move(pattern));
    }

    double diameter = 0.0;
    if (m <= 4000) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                diameter = std::max(diameter, norm2(vsub(images[i], images[j])));
    } else {
        Vec lo = images[0], hi = images[0];
        for (const auto& p : images)
            for (std::size_t j = 0; j < p.size(); ++j) {
                lo[j] = std::min(lo[j], p[j]);
                hi[j] = std::max(hi[j], p[j]);
            }
        diameter = norm2(vsub(hi, lo));
    }
    rep.deep_threshold = 0.05 * diameter;

    std::vector<double> depth(m, 0.0);
    if (diameter > 0.0) {
        if (samples.dim == 2) {
            const std::vector<Vec> hull = hull_2d(images);
            for (std::size_t i = 0; i < m; ++i) depth[i] = depth_2d(images[i], hull);
        } else {
            // Support-function sampling: exact in the limit of directions,
            // an overestimate for finitely many.
            std::vector<Vec> dirs;
            for (std::size_t a = 0; a < samples.dim; ++a) {
                dirs.push_back(unit_axis(samples.dim, a));
                dirs.push_back(vscale(-1.0, unit_axis(samples.dim, a)));
            }
            Rng rng(12345);
            for (int k = 0; k < 64; ++k) dirs.push_back(rng.unit_vector(samples.dim));
            std::vector<double> support(dirs.size(), -std::numeric_limits<double>::infinity());
            for (std::size_t di = 0; di < dirs.size(); ++di)
                for (const auto& p : images)
                    support[di] = std::max(support[di], dot(dirs[di], p));
            for (std::size_t i = 0; i < m; ++i) {
                double d = std::numeric_limits<double>::infinity();
                for (std::size_t di = 0; di < dirs.size(); ++di)
                    d = std::min(d, support[di] - dot(dirs[di], images[i]));
                depth[i] = std::max(d, 0.0);
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        if (depth[i] > rep.deep_threshold) rep.deep_interior.push_back(i);

    rep.deep_share_one_pattern = true;
    for (std::size_t i = 1; i < rep.deep_interior.size(); ++i)
        if (rep.patterns[rep.deep_interior[i]] != rep.patterns[rep.deep_interior[0]])
            rep.deep_share_one_pattern = false;
    return rep;
}

UniquenessFixtures uniqueness_fixtures() {
    UniquenessFixtures fx;
    auto scalar_net = [](std::vector<std::pair<std::pair<double, double>, Activation>> stages,
                         double wf, double bf) {
        std::vector<Layer> hidden;
        for (auto& [wb, act] : stages) {
            Mat w(1, 1);
            w(0, 0) = wb.first;
            hidden.push_back(Layer{std::move(w), {wb.second}, act});
        }
        Mat fwm(1, 1);
        fwm(0, 0) = wf;
        return Network(std::move(hidden), std::move(fwm), {bf});
    };

    const Activation relu = Activation::relu();
    fx.example1_a = scalar_net({{{1.0, 0.0}, relu}, {{-1.0, 1.0}, relu}}, 1.0, 0.0);
    fx.example1_b = scalar_net({{{1.0, -1.0}, relu}, {{-1.0, 1.0}, relu}}, 1.0, 0.0);

    const double alpha = 0.5;
    const Activation leaky = Activation::leaky_relu(alpha);
    fx.example2_a = scalar_net(
        {{{1.0, 0.0}, leaky}, {{1.0 / (1.0 + alpha), alpha / (1.0 + alpha)}, leaky}}, 1.0, 0.0);
    fx.example2_b = scalar_net({{{1.0, 1.0}, leaky}, {{0.5, 0.0}, leaky}}, 1.0, 0.0);

    fx.example1_probes = {0.0, 1.0, 2.0};
    fx.example2_probes = {-1.0, 0.0, 1.0};
    for (const Network* net : {&fx.example1_a, &fx.example1_b}) {
        Vec vals;
        for (double x : fx.example1_probes) vals.push_back(net->forward({x})[0]);
        fx.example1_values.push_back(std::move(vals));
    }
    for (const Network* net : {&fx.example2_a, &fx.example2_b}) {
        Vec vals;
        for (double x : fx.example2_probes) vals.push_back(net->forward({x})[0]);
        fx.example2_values.push_back(std::move(vals));
    }
    return fx;
}

}  // namespace narrowcap
