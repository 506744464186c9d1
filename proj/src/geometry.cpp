#include "narrowcap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "narrowcap/common.hpp"
#include "narrowcap/lp.hpp"
#include "narrowcap/rng.hpp"

namespace narrowcap {

PointCloud::PointCloud(std::size_t d, std::vector<Vec> pts) : dim(d), points(std::move(pts)) {
    for (const auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("point has wrong dimension");
}

PointCloud PointCloud::single(Vec p) {
    const std::size_t d = p.size();
    return PointCloud(d, {std::move(p)});
}

Vec PointCloud::centroid() const {
    if (points.empty()) throw std::invalid_argument("centroid of empty cloud");
    Vec c(dim, 0.0);
    for (const auto& p : points)
        for (std::size_t j = 0; j < dim; ++j) c[j] += p[j];
    for (auto& v : c) v /= static_cast<double>(points.size());
    return c;
}

void PointCloud::append(const PointCloud& other) {
    if (other.dim != dim) throw std::invalid_argument("append: dimension mismatch");
    points.insert(points.end(), other.points.begin(), other.points.end());
}

Mat householder_to_minus_e1(const Vec& v) {
    const std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("empty vector");
    if (std::abs(norm2(v) - 1.0) > global_tolerance())
        throw std::invalid_argument("householder_to_minus_e1: input must be a unit vector");
    // Reflect through the hyperplane orthogonal to w = v + e1. If v is
    // already close to -e1 the reflection is ill-defined; identity works.
    Vec w = v;
    w[0] += 1.0;
    const double ww = dot(w, w);
    if (ww < 1e-24) return Mat::identity(n);
    Mat q = Mat::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q(i, j) -= 2.0 * w[i] * w[j] / ww;
    return q;
}

namespace {

double coordinate_scale(const PointCloud& a, const PointCloud& b) {
    double s = 1.0;
    for (const auto& p : a.points) s = std::max(s, norm_inf(p));
    for (const auto& p : b.points) s = std::max(s, norm_inf(p));
    return s;
}

// Seed the working sets with axis-extreme points: the LP active set almost
// always lives on hull vertices, and extremes are a cheap hull proxy.
std::vector<std::size_t> extreme_seed(const PointCloud& cloud) {
    std::set<std::size_t> idx;
    idx.insert(0);
    for (std::size_t d = 0; d < cloud.dim; ++d) {
        std::size_t lo = 0, hi = 0;
        for (std::size_t i = 1; i < cloud.size(); ++i) {
            if (cloud.points[i][d] < cloud.points[lo][d]) lo = i;
            if (cloud.points[i][d] > cloud.points[hi][d]) hi = i;
        }
        idx.insert(lo);
        idx.insert(hi);
    }
    return {idx.begin(), idx.end()};
}

}  // namespace

HyperplaneCertificate find_separating_hyperplane(const PointCloud& above,
                                                 const PointCloud& below) {
    if (above.empty() || below.empty())
        throw std::invalid_argument("find_separating_hyperplane: empty cloud");
    if (above.dim != below.dim)
        throw std::invalid_argument("find_separating_hyperplane: dimension mismatch");
    const std::size_t n = above.dim;
    const double scale = coordinate_scale(above, below);
    const double tol = global_tolerance() * scale;

    std::vector<std::size_t> wa = extreme_seed(above);
    std::vector<std::size_t> wb = extreme_seed(below);

    // Variables z = (v_1..v_n, q, t); maximize t.
    Vec objective(n + 2, 0.0);
    objective[n + 1] = 1.0;

    Vec v_opt;
    double q_opt = 0.0, t_opt = 0.0;
    const std::size_t max_rounds = above.size() + below.size() + 4;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        std::vector<Vec> rows;
        Vec rhs;
        rows.reserve(wa.size() + wb.size() + 2 * n);
        for (std::size_t i : wa) {  // -v.a + q + t <= 0
            Vec r(n + 2, 0.0);
            for (std::size_t j = 0; j < n; ++j) r[j] = -above.points[i][j];
            r[n] = 1.0;
            r[n + 1] = 1.0;
            rows.push_back(std::move(r));
            rhs.push_back(0.0);
        }
        for (std::size_t i : wb) {  // v.b - q + t <= 0
            Vec r(n + 2, 0.0);
            for (std::size_t j = 0; j < n; ++j) r[j] = below.points[i][j];
            r[n] = -1.0;
            r[n + 1] = 1.0;
            rows.push_back(std::move(r));
            rhs.push_back(0.0);
        }
        for (std::size_t j = 0; j < n; ++j) {  // |v_j| <= 1
            Vec rp(n + 2, 0.0), rm(n + 2, 0.0);
            rp[j] = 1.0;
            rm[j] = -1.0;
            rows.push_back(std::move(rp));
            rhs.push_back(1.0);
            rows.push_back(std::move(rm));
            rhs.push_back(1.0);
        }

        LpSolution sol = lp_maximize(objective, rows, rhs);
        if (sol.status != LpSolution::Status::optimal)
            throw std::runtime_error("separation LP unbounded (internal error)");
        v_opt.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
        q_opt = sol.x[n];
        t_opt = sol.x[n + 1];

        if (t_opt <= tol) {
            // Working-set margin is already nonpositive, so the full problem
            // has none either. Report an approximate overlap point.
            std::size_t ia = 0, ib = 0;
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < above.size(); ++i) {
                const double d = dot(v_opt, above.points[i]);
                if (d < lo) { lo = d; ia = i; }
            }
            for (std::size_t i = 0; i < below.size(); ++i) {
                const double d = dot(v_opt, below.points[i]);
                if (d > hi) { hi = d; ib = i; }
            }
            Vec witness = vscale(0.5, vadd(above.points[ia], below.points[ib]));
            throw NoSeparationError("clouds are not strictly separable on the samples",
                                    std::move(witness));
        }

        // Most violated constraints over the full clouds.
        std::size_t worst_a = above.size(), worst_b = below.size();
        double va = 0.0, vb = 0.0;
        for (std::size_t i = 0; i < above.size(); ++i) {
            const double slack = dot(v_opt, above.points[i]) - q_opt - t_opt;
            if (slack < va) { va = slack; worst_a = i; }
        }
        for (std::size_t i = 0; i < below.size(); ++i) {
            const double slack = q_opt - dot(v_opt, below.points[i]) - t_opt;
            if (slack < vb) { vb = slack; worst_b = i; }
        }
        const bool add_a = worst_a != above.size() && va < -tol;
        const bool add_b = worst_b != below.size() && vb < -tol;
        if (!add_a && !add_b) break;
        if (add_a) wa.push_back(worst_a);
        if (add_b) wb.push_back(worst_b);
    }

    HyperplaneCertificate cert;
    const double len = norm2(v_opt);
    cert.normal = vscale(1.0 / len, v_opt);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& p : above.points) lo = std::min(lo, dot(cert.normal, p));
    for (const auto& p : below.points) hi = std::max(hi, dot(cert.normal, p));
    cert.offset = 0.5 * (lo + hi);
    cert.margin = 0.5 * (lo - hi);
    if (!(cert.margin > 0.0)) {
        Vec witness = vscale(0.5, vadd(above.points[0], below.points[0]));
        throw NoSeparationError("clouds are not strictly separable on the samples",
                                std::move(witness));
    }
    return cert;
}

SectorCheckReport check_sector_containment(const SectorCertificate& cert,
                                           const PointCloud& k1, const PointCloud& k2) {
    if (cert.apex.size() != k1.dim || k1.dim != k2.dim)
        throw std::invalid_argument("check_sector_containment: dimension mismatch");
    SectorCheckReport rep;
    Mat inv;
    try {
        inv = inverse(cert.frame);
    } catch (const std::runtime_error&) {
        // Singular frame certifies nothing.
        for (std::size_t i = 0; i < k1.size(); ++i) rep.k1_violations.push_back(i);
        rep.ok = false;
        return rep;
    }
    for (std::size_t i = 0; i < k1.size(); ++i) {
        Vec lambda = matvec(inv, vsub(k1.points[i], cert.apex));
        bool inside = true;
        for (double l : lambda)
            if (!(l > 0.0)) inside = false;
        if (!inside) rep.k1_violations.push_back(i);
    }
    for (std::size_t i = 0; i < k2.size(); ++i) {
        Vec lambda = matvec(inv, vsub(k2.points[i], cert.apex));
        bool outside = false;
        for (double l : lambda)
            if (l <= 0.0) outside = true;
        if (!outside) rep.k2_violations.push_back(i);
    }
    rep.ok = rep.k1_violations.empty() && rep.k2_violations.empty();
    return rep;
}

namespace {

Vec angle_dir(double theta) { return {std::cos(theta), std::sin(theta)}; }

// 2-D frame fit: minimal angular arc covering K1 as seen from the apex,
// widened just enough to make the containment strict.
bool try_sector_2d(const Vec& apex, const PointCloud& k1, const PointCloud& k2,
                   SectorCertificate& out) {
    std::vector<double> angles;
    angles.reserve(k1.size());
    for (const auto& p : k1.points) {
        const Vec w = vsub(p, apex);
        const double r = norm2(w);
        if (r < 1e-12) return false;  // apex inside the cloud
        angles.push_back(std::atan2(w[1], w[0]));
    }
    std::sort(angles.begin(), angles.end());
    double gap = 0.0;
    std::size_t gap_at = 0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double next = (i + 1 < angles.size()) ? angles[i + 1]
                                                    : angles[0] + 2.0 * M_PI;
        if (next - angles[i] > gap) { gap = next - angles[i]; gap_at = i; }
    }
    const double spread = 2.0 * M_PI - gap;
    if (spread >= M_PI - 1e-9) return false;  // no pointed cone covers K1
    const double lo = (gap_at + 1 < angles.size()) ? angles[gap_at + 1]
                                                   : angles[0];
    const double hi = lo + spread;
    const double slack = 0.5 * (M_PI - spread);
    for (double f : {0.5, 0.25, 0.1, 0.02, 1e-4}) {
        const double beta = f * slack;
        SectorCertificate cand;
        cand.apex = apex;
        cand.frame = Mat::from_cols({angle_dir(lo - beta), angle_dir(hi + beta)});
        if (check_sector_containment(cand, k1, k2).ok) {
            out = std::move(cand);
            return true;
        }
    }
    return false;
}

// dims >= 3: simplicial cone of half-width gamma around the apex-to-centroid
// direction. Wide-to-narrow schedule per candidate apex.
bool try_sector_nd(const Vec& apex, const PointCloud& k1, const PointCloud& k2,
                   SectorCertificate& out) {
    const std::size_t n = k1.dim;
    Vec m = vsub(k1.centroid(), apex);
    const double mlen = norm2(m);
    if (mlen < 1e-12) return false;
    m = vscale(1.0 / mlen, m);
    const Mat q = householder_to_minus_e1(m);
    // Columns 2..n of q are an orthonormal basis of the complement of m.
    std::vector<Vec> comp;
    for (std::size_t j = 1; j < n; ++j) comp.push_back(q.col(j));
    Vec last(n, 0.0);
    for (const auto& b : comp) last = vsub(last, b);
    comp.push_back(vscale(1.0 / std::sqrt(static_cast<double>(n - 1)), last));

    for (double gamma : {8.0, 4.0, 2.0, 1.0, 0.5, 0.25, 0.1, 0.04}) {
        std::vector<Vec> cols;
        cols.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            Vec v = vadd(m, vscale(gamma, comp[j]));
            cols.push_back(vscale(1.0 / norm2(v), v));
        }
        SectorCertificate cand;
        cand.apex = apex;
        cand.frame = Mat::from_cols(cols);
        if (std::abs(determinant(cand.frame)) < 1e-10) continue;
        if (check_sector_containment(cand, k1, k2).ok) {
            out = std::move(cand);
            return true;
        }
    }
    return false;
}

bool try_sector_1d(const PointCloud& k1, const PointCloud& k2, SectorCertificate& out) {
    double k1_lo = std::numeric_limits<double>::infinity(), k1_hi = -k1_lo;
    double k2_lo = std::numeric_limits<double>::infinity(), k2_hi = -k2_lo;
    for (const auto& p : k1.points) { k1_lo = std::min(k1_lo, p[0]); k1_hi = std::max(k1_hi, p[0]); }
    for (const auto& p : k2.points) { k2_lo = std::min(k2_lo, p[0]); k2_hi = std::max(k2_hi, p[0]); }
    out.frame = Mat(1, 1);
    if (k2_hi < k1_lo) {
        out.apex = {0.5 * (k2_hi + k1_lo)};
        out.frame(0, 0) = 1.0;
        return true;
    }
    if (k1_hi < k2_lo) {
        out.apex = {0.5 * (k1_hi + k2_lo)};
        out.frame(0, 0) = -1.0;
        return true;
    }
    return false;
}

}  // namespace

SectorCertificate find_sector_certificate(const PointCloud& k1, const PointCloud& k2,
                                          std::uint64_t seed, int budget) {
    if (k1.empty() || k2.empty())
        throw std::invalid_argument("find_sector_certificate: empty cloud");
    if (k1.dim != k2.dim)
        throw std::invalid_argument("find_sector_certificate: dimension mismatch");
    const std::size_t n = k1.dim;

    SectorCertificate cert;
    if (n == 1) {
        if (try_sector_1d(k1, k2, cert)) return cert;
        throw NoSectorError("no sector certificate found (1-D clouds interleave)");
    }

    const Vec c1 = k1.centroid();
    const Vec c2 = k2.centroid();
    double spread1 = 0.0;
    for (const auto& p : k1.points) spread1 = std::max(spread1, norm2(vsub(p, c1)));
    const double base = std::max({norm2(vsub(c1, c2)), spread1, 1e-6});
    const double radii[] = {0.3, 0.6, 1.0, 2.0, 4.0};

    Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    auto try_apex = [&](const Vec& apex) {
        return (n == 2) ? try_sector_2d(apex, k1, k2, cert)
                        : try_sector_nd(apex, k1, k2, cert);
    };

    // Deterministic first wave: apexes on the centroid axis, pushed outward.
    Vec axis = vsub(c1, c2);
    const double axis_len = norm2(axis);
    if (axis_len > 1e-12) {
        axis = vscale(1.0 / axis_len, axis);
        for (double r : radii)
            if (try_apex(vadd(c1, vscale(r * base, axis)))) return cert;
    }
    for (int start = 0; start < budget; ++start) {
        const Vec u = rng.unit_vector(n);
        const double r = radii[start % 5] * base;
        if (try_apex(vadd(c1, vscale(r, u)))) return cert;
    }
    throw NoSectorError("no sector certificate found within the search budget");
}

ConeFrame build_cone_frame(const PointCloud& k1, const PointCloud& m1) {
    if (k1.dim != m1.dim) throw std::invalid_argument("build_cone_frame: dimension mismatch");
    const std::size_t n = k1.dim;
    for (const auto& p : k1.points)
        if (!(p[0] < 0.0))
            throw std::invalid_argument("build_cone_frame: K1 point with nonnegative first component");
    for (const auto& p : m1.points)
        if (!(p[0] > 0.0))
            throw std::invalid_argument("build_cone_frame: M1 point with nonpositive first component");

    const double delta = 1.0;
    // Frame for u_j = s e_{j+1} (j < n) and u_n = -s (e_2 + ... + e_n);
    // lambda = B^{-1} x has the closed form used below, so the containment
    // check is cheap and the stored inverse is exact up to one division.
    auto lambda_positive = [&](const Vec& x, double s) {
        double tail = 0.0;
        for (std::size_t j = 1; j < n; ++j) tail += x[j];
        const double ln = (-x[0] / delta + tail / s) / static_cast<double>(n);
        if (!(ln > 0.0)) return false;
        for (std::size_t j = 1; j < n; ++j)
            if (!(ln - x[j] / s > 0.0)) return false;
        return true;
    };

    for (int k = 0; k <= 20; ++k) {
        const double s = static_cast<double>(1 << k);
        bool ok = true;
        for (const auto& p : k1.points)
            if (!lambda_positive(p, s)) { ok = false; break; }
        if (ok)
            for (const auto& p : m1.points)
                if (!lambda_positive(vscale(-1.0, p), s)) { ok = false; break; }
        if (!ok) continue;

        ConeFrame frame;
        frame.delta = delta;
        frame.scale = s;
        frame.frame = Mat(n, n);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            frame.frame(0, j) = -delta;
            frame.frame(j + 1, j) = -s;
        }
        frame.frame(0, n - 1) = -delta;
        for (std::size_t i = 1; i < n; ++i) frame.frame(i, n - 1) = s;

        frame.frame_inverse = Mat(n, n);
        const double nn = static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            frame.frame_inverse(i, 0) = -1.0 / (delta * nn);
            for (std::size_t j = 1; j < n; ++j)
                frame.frame_inverse(i, j) =
                    1.0 / (s * nn) - ((i + 1 < n && j == i + 1) ? 1.0 / s : 0.0);
        }
        return frame;
    }
    throw ConeSearchError("cone frame schedule exhausted (s/delta up to 2^20)");
}

bool projection_injectivity_check(const PointCloud& m, const std::vector<Vec>& basis,
                                  const Vec& shift) {
    if (basis.empty()) throw std::invalid_argument("empty basis");
    const std::size_t n = m.dim;
    if (basis.size() >= n)
        throw std::invalid_argument("projection subspace must have dimension < dim");
    if (shift.size() != n) throw std::invalid_argument("shift dimension mismatch");

    // Gram-Schmidt; a residual collapse means a dependent basis.
    std::vector<Vec> ortho;
    for (const auto& b : basis) {
        if (b.size() != n) throw std::invalid_argument("basis vector dimension mismatch");
        Vec r = b;
        for (const auto& q : ortho) r = vsub(r, vscale(dot(q, r), q));
        const double len = norm2(r);
        if (len < 1e-12 * std::max(1.0, norm2(b)))
            throw std::invalid_argument("basis vectors are linearly dependent");
        ortho.push_back(vscale(1.0 / len, r));
    }

    std::vector<Vec> proj;
    proj.reserve(m.size());
    for (const auto& p : m.points) {
        const Vec y = vadd(p, shift);
        Vec coords(ortho.size());
        for (std::size_t j = 0; j < ortho.size(); ++j) coords[j] = dot(ortho[j], y);
        proj.push_back(std::move(coords));
    }
    for (std::size_t i = 0; i < proj.size(); ++i)
        for (std::size_t j = i + 1; j < proj.size(); ++j)
            if (norm2(vsub(proj[i], proj[j])) <= global_tolerance()) return false;
    return true;
}

}  // namespace narrowcap
