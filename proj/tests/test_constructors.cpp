#include <doctest.h>

#include <cmath>

#include "narrowcap/constructors.hpp"
#include "narrowcap/rng.hpp"

using namespace narrowcap;

namespace {

// Two separable blobs: K around +offset*e1, M around -offset*e1.
std::pair<PointCloud, PointCloud> random_separable(Rng& rng, std::size_t dim,
                                                   std::size_t count, double offset) {
    PointCloud k, m;
    k.dim = m.dim = dim;
    for (std::size_t i = 0; i < count; ++i) {
        Vec pk(dim), pm(dim);
        for (auto& v : pk) v = rng.uniform(-1.0, 1.0);
        for (auto& v : pm) v = rng.uniform(-1.0, 1.0);
        pk[0] += offset;
        pm[0] -= offset;
        k.points.push_back(pk);
        m.points.push_back(pm);
    }
    return {k, m};
}

double max_fix_error(const Network& net, const PointCloud& m) {
    double worst = 0.0;
    for (const auto& p : m.points) worst = std::max(worst, norm2(vsub(net.forward(p), p)));
    return worst;
}

}  // namespace

TEST_CASE("collapse_to_point") {
    SUBCASE("worked 2-D instance") {
        const PointCloud k = PointCloud::single({2.0, 0.0});
        const PointCloud m = PointCloud::single({0.0, 0.0});
        const CollapseResult res = collapse_to_point(k, m, 0.1);
        CHECK(res.collapsed_point[0] == doctest::Approx(1.95));
        CHECK(res.collapsed_point[1] == doctest::Approx(0.0).epsilon(1e-10));
        const Vec fm = res.network.forward({0.0, 0.0});
        CHECK(norm2(fm) < 1e-9);
        const Vec fk = res.network.forward({2.0, 0.0});
        CHECK(fk[0] == doctest::Approx(1.95));
        CHECK(fk[1] == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(res.network.depth() == 2);
        CHECK(res.network.width() == 2);
    }
    SUBCASE("singleton K collapses to eps/2 away") {
        Rng rng(2);
        for (int trial = 0; trial < 10; ++trial) {
            auto [k, m] = random_separable(rng, 3, 1, 3.0);
            const double eps = 0.01;
            const CollapseResult res = collapse_to_point(k, m, eps);
            CHECK(norm2(vsub(res.collapsed_point, k.points[0])) == doctest::Approx(eps / 2));
        }
    }
    SUBCASE("random separable clouds satisfy all result invariants") {
        Rng rng(4);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t dim = 2 + trial % 3;
            auto [k, m] = random_separable(rng, dim, 12, 2.5);
            const double eps = 1e-3;
            const CollapseResult res = collapse_to_point(k, m, eps);
            CHECK(max_fix_error(res.network, m) < 1e-9);
            double spread = 0.0, nearest = 1e300;
            for (const auto& p : k.points) {
                spread = std::max(spread, norm2(vsub(res.network.forward(p),
                                                     res.collapsed_point)));
                nearest = std::min(nearest, norm2(vsub(res.collapsed_point, p)));
            }
            CHECK(spread < 1e-9);   // K maps to a single vector
            CHECK(nearest < eps);   // which stays eps-close to K
        }
    }
    SUBCASE("idempotence on M and the collapsed point") {
        Rng rng(6);
        auto [k, m] = random_separable(rng, 2, 8, 2.0);
        const CollapseResult res = collapse_to_point(k, m, 0.05);
        for (const auto& p : m.points) {
            const Vec once = res.network.forward(p);
            const Vec twice = res.network.forward(once);
            CHECK(norm2(vsub(once, twice)) < 1e-8);
        }
        const Vec once = res.network.forward(k.points[0]);
        CHECK(norm2(vsub(res.network.forward(once), once)) < 1e-8);
    }
    SUBCASE("errors propagate") {
        CHECK_THROWS_AS(collapse_to_point(PointCloud::single({0.0, 0.0}),
                                          PointCloud::single({0.0, 0.0}), 0.1),
                        NoSeparationError);
        CHECK_THROWS_AS(collapse_to_point(PointCloud::single({1.0, 0.0}),
                                          PointCloud::single({0.0, 0.0}), 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("two_class_exact_fit") {
    SectorCertificate quadrant;
    quadrant.apex = {0.0, 0.0};
    quadrant.frame = Mat::identity(2);
    const PointCloud k1 = PointCloud::single({1.0, 1.0});
    const PointCloud k2 = PointCloud::single({-1.0, -1.0});

    SUBCASE("quadrant instance hits the targets exactly") {
        const Network net = two_class_exact_fit(k1, k2, quadrant, 1.0, 0.0);
        CHECK(std::abs(net.forward({1.0, 1.0})[0] - 1.0) < 1e-9);
        CHECK(std::abs(net.forward({-1.0, -1.0})[0] - 0.0) < 1e-9);
        CHECK(net.depth() == 4);
        CHECK(net.hidden().size() == 3);
        for (const auto& l : net.hidden()) {
            CHECK(l.activation.kind == Activation::Kind::relu);
            CHECK(l.out_dim() <= 2);
        }
        CHECK(net.width() <= 2);
    }
    SUBCASE("equal targets degenerate to a constant readout") {
        const Network net = two_class_exact_fit(k1, k2, quadrant, 0.0, 0.0);
        CHECK(std::abs(net.forward({1.0, 1.0})[0]) < 1e-9);
        CHECK(std::abs(net.forward({-1.0, -1.0})[0]) < 1e-9);
    }
    SUBCASE("certificate that fails to certify is rejected") {
        CHECK_THROWS_AS(two_class_exact_fit(k2, k1, quadrant, 1.0, 0.0), std::invalid_argument);
    }
    SUBCASE("scalar input: the sector is a ray") {
        SectorCertificate ray;
        ray.apex = {0.5};
        ray.frame = Mat(1, 1);
        ray.frame(0, 0) = 1.0;
        const PointCloud a(1, {{2.0}, {2.5}});
        const PointCloud b(1, {{-1.0}, {-0.25}});
        const Network net = two_class_exact_fit(a, b, ray, 3.0, -2.0);
        CHECK(net.width() == 1);
        CHECK(net.depth() == 4);
        for (const auto& p : a.points) CHECK(std::abs(net.forward(p)[0] - 3.0) < 1e-9);
        for (const auto& p : b.points) CHECK(std::abs(net.forward(p)[0] + 2.0) < 1e-9);
    }
    SUBCASE("random sector instances in dims 2-4") {
        Rng rng(9);
        for (int trial = 0; trial < 12; ++trial) {
            const std::size_t dim = 2 + trial % 3;
            SectorCertificate cert;
            cert.apex = Vec(dim, 0.0);
            for (auto& v : cert.apex) v = rng.uniform(-0.5, 0.5);
            cert.frame = Mat::identity(dim);  // positive orthant from the apex
            PointCloud a, b;
            a.dim = b.dim = dim;
            for (int i = 0; i < 10; ++i) {
                Vec pa(dim), pb(dim);
                for (auto& v : pa) v = rng.uniform(0.2, 2.0);
                for (auto& v : pb) v = -rng.uniform(0.2, 2.0);
                a.points.push_back(vadd(cert.apex, pa));
                b.points.push_back(vadd(cert.apex, pb));
            }
            const double va = rng.uniform(-2.0, 2.0);
            const double vb = rng.uniform(-2.0, 2.0);
            const Network net = two_class_exact_fit(a, b, cert, va, vb);
            CHECK(net.width() <= dim);
            CHECK(net.depth() == 4);
            for (const auto& p : a.points) CHECK(std::abs(net.forward(p)[0] - va) < 1e-7);
            for (const auto& p : b.points) CHECK(std::abs(net.forward(p)[0] - vb) < 1e-7);
        }
    }
}

TEST_CASE("finite_exact_fit") {
    SUBCASE("single point gives a constant network") {
        const Network net = finite_exact_fit(PointCloud::single({2.0, 3.0}), {7.0});
        CHECK(net.forward({2.0, 3.0})[0] == doctest::Approx(7.0));
        CHECK(net.forward({-5.0, 1.0})[0] == doctest::Approx(7.0));
        CHECK(net.hidden().empty());
    }
    SUBCASE("two points need no hidden layers") {
        PointCloud pts(1, {{0.0}, {1.0}});
        const Network net = finite_exact_fit(pts, {1.0, 3.0});
        CHECK(net.hidden().empty());
        CHECK(net.forward({0.0})[0] == doctest::Approx(1.0));
        CHECK(net.forward({1.0})[0] == doctest::Approx(3.0));
    }
    SUBCASE("random instances: exact, width 2, shallow") {
        Rng rng(14);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t dim = 1 + trial % 4;
            const std::size_t count = 2 + trial % 7;  // up to 8 points
            PointCloud pts;
            pts.dim = dim;
            for (std::size_t i = 0; i < count; ++i) {
                Vec p(dim);
                for (auto& v : p) v = rng.uniform(-2.0, 2.0);
                pts.points.push_back(p);
            }
            Vec vals(count);
            for (auto& v : vals) v = rng.uniform(-1.0, 1.0);
            const Network net = finite_exact_fit(pts, vals, 100 + trial);
            CHECK(net.width() <= 2);
            CHECK(net.depth() <= count);  // m-1 hidden layers + final affine
            for (std::size_t i = 0; i < count; ++i)
                CHECK(std::abs(net.forward(pts.points[i])[0] - vals[i]) < 1e-7);
        }
    }
    SUBCASE("duplicate points are rejected") {
        PointCloud pts(2, {{1.0, 1.0}, {1.0, 1.0}});
        CHECK_THROWS_AS(finite_exact_fit(pts, {0.0, 1.0}), std::invalid_argument);
    }
    SUBCASE("value count mismatch is rejected") {
        CHECK_THROWS_AS(finite_exact_fit(PointCloud::single({0.0}), {1.0, 2.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("multi_class_exact_fit") {
    SUBCASE("three well-separated clusters in R2") {
        // Each cluster must be separable from the union of the others, so
        // the centers form a triangle (a collinear middle cluster would
        // violate the hypothesis; see the subcase below).
        Rng rng(20);
        const Vec centers[3][2] = {{{0.0}, {0.0}}, {{4.0}, {0.0}}, {{2.0}, {3.5}}};
        std::vector<std::pair<PointCloud, double>> comps;
        for (int c = 0; c < 3; ++c) {
            PointCloud cloud;
            cloud.dim = 2;
            for (int i = 0; i < 8; ++i)
                cloud.points.push_back({centers[c][0][0] + rng.uniform(-0.5, 0.5),
                                        centers[c][1][0] + rng.uniform(-0.5, 0.5)});
            comps.emplace_back(cloud, static_cast<double>(c));
        }
        const Network net = multi_class_exact_fit(comps, 33);
        CHECK(net.width() <= 2);
        for (const auto& [cloud, value] : comps)
            for (const auto& p : cloud.points)
                CHECK(std::abs(net.forward(p)[0] - value) < 1e-7);
    }
    SUBCASE("a collinear middle cluster violates the separation hypothesis") {
        std::vector<std::pair<PointCloud, double>> comps;
        for (int c = 0; c < 3; ++c) {
            PointCloud cloud(2, {{4.0 * c, 0.0}, {4.0 * c + 0.5, 0.1}});
            comps.emplace_back(cloud, static_cast<double>(c));
        }
        CHECK_THROWS_AS(multi_class_exact_fit(comps, 1), NoSeparationError);
    }
    SUBCASE("two components match the two-class semantics") {
        PointCloud a(2, {{3.0, 3.0}, {3.5, 2.5}});
        PointCloud b(2, {{-3.0, -3.0}, {-2.5, -3.5}});
        const Network net = multi_class_exact_fit({{a, 1.0}, {b, 0.0}}, 1);
        for (const auto& p : a.points) CHECK(std::abs(net.forward(p)[0] - 1.0) < 1e-7);
        for (const auto& p : b.points) CHECK(std::abs(net.forward(p)[0] - 0.0) < 1e-7);
    }
    SUBCASE("components sharing a point cannot be separated") {
        PointCloud a(2, {{0.0, 0.0}, {1.0, 0.0}});
        PointCloud b(2, {{0.0, 0.0}, {0.0, 1.0}});
        CHECK_THROWS_AS(multi_class_exact_fit({{a, 0.0}, {b, 1.0}}, 1), NoSeparationError);
    }
    SUBCASE("dimension 1 is outside the contract") {
        PointCloud a(1, {{0.0}});
        PointCloud b(1, {{1.0}});
        CHECK_THROWS_AS(multi_class_exact_fit({{a, 0.0}, {b, 1.0}}, 1), std::invalid_argument);
    }
}

TEST_CASE("narrow width is preserved by the geometric constructors") {
    Rng rng(25);
    for (std::size_t dim : {2u, 3u, 5u}) {
        auto make_blob = [&](double offset) {
            PointCloud c;
            c.dim = dim;
            for (int i = 0; i < 6; ++i) {
                Vec p(dim);
                for (auto& v : p) v = rng.uniform(-0.8, 0.8);
                p[0] += offset;
                c.points.push_back(p);
            }
            return c;
        };
        const PointCloud k = make_blob(2.5);
        const PointCloud m = make_blob(-2.5);
        const CollapseResult res = collapse_to_point(k, m, 0.01);
        CHECK(res.network.width() == dim);
    }
}
