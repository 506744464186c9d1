#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "narrowcap/constructors.hpp"
#include "narrowcap/cosine_fit.hpp"
#include "narrowcap/dataset.hpp"
#include "narrowcap/experiment.hpp"
#include "narrowcap/render_svg.hpp"
#include "narrowcap/verifier.hpp"

namespace py = pybind11;
using namespace narrowcap;

namespace {

Mat mat_from_rows(const std::vector<Vec>& rows) { return Mat::from_rows(rows); }

std::vector<Vec> mat_rows(const Mat& m) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < m.rows; ++i) rows.push_back(m.row(i));
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Construction and verification of neural networks of width at most "
              "the input dimension";

    py::register_exception<NoSeparationError>(m, "NoSeparationError");
    py::register_exception<NoSectorError>(m, "NoSectorError");
    py::register_exception<ConeSearchError>(m, "ConeSearchError");
    py::register_exception<ConstructionError>(m, "ConstructionError");
    py::register_exception<SearchBudgetError>(m, "SearchBudgetError");

    py::class_<PointCloud>(m, "PointCloud")
        .def(py::init([](const std::vector<Vec>& pts) {
                 if (pts.empty()) throw std::invalid_argument("empty point list");
                 return PointCloud(pts.front().size(), pts);
             }),
             py::arg("points"))
        .def_readonly("dim", &PointCloud::dim)
        .def_readonly("points", &PointCloud::points)
        .def("__len__", &PointCloud::size);

    py::class_<LabeledDataset>(m, "LabeledDataset")
        .def(py::init([](const PointCloud& cloud, const Vec& targets) {
                 if (targets.size() != cloud.size())
                     throw std::invalid_argument("targets size mismatch");
                 return LabeledDataset{cloud, targets};
             }),
             py::arg("points"), py::arg("targets"))
        .def_readonly("points", &LabeledDataset::points)
        .def_readonly("targets", &LabeledDataset::targets)
        .def("classes", &LabeledDataset::classes)
        .def("__len__", &LabeledDataset::size);

    py::class_<Network>(m, "Network")
        .def("forward", [](const Network& n, const Vec& x) { return n.forward(x); })
        .def("width", &Network::width)
        .def("depth", &Network::depth)
        .def("input_dim", &Network::input_dim)
        .def("output_dim", &Network::output_dim)
        .def("to_json", [](const Network& n) { return serialize(n); })
        .def_static("from_json", [](const std::string& s) { return deserialize(s); });

    py::class_<HyperplaneCertificate>(m, "HyperplaneCertificate")
        .def_readonly("normal", &HyperplaneCertificate::normal)
        .def_readonly("offset", &HyperplaneCertificate::offset)
        .def_readonly("margin", &HyperplaneCertificate::margin);

    py::class_<SectorCertificate>(m, "SectorCertificate")
        .def(py::init([](const Vec& apex, const std::vector<Vec>& frame_rows) {
                 SectorCertificate c;
                 c.apex = apex;
                 c.frame = mat_from_rows(frame_rows);
                 return c;
             }),
             py::arg("apex"), py::arg("frame_rows"))
        .def_readonly("apex", &SectorCertificate::apex)
        .def_property_readonly("frame_rows",
                               [](const SectorCertificate& c) { return mat_rows(c.frame); });

    py::class_<SectorCheckReport>(m, "SectorCheckReport")
        .def_readonly("ok", &SectorCheckReport::ok)
        .def_readonly("k1_violations", &SectorCheckReport::k1_violations)
        .def_readonly("k2_violations", &SectorCheckReport::k2_violations);

    py::class_<CollapseResult>(m, "CollapseResult")
        .def_readonly("network", &CollapseResult::network)
        .def_readonly("collapsed_point", &CollapseResult::collapsed_point)
        .def_readonly("epsilon", &CollapseResult::epsilon);

    py::class_<CosineFitResult>(m, "CosineFitResult")
        .def_readonly("alpha", &CosineFitResult::alpha)
        .def_readonly("b1", &CosineFitResult::b1)
        .def_readonly("w2", &CosineFitResult::w2)
        .def_readonly("achieved_error", &CosineFitResult::achieved_error)
        .def_readonly("network", &CosineFitResult::network);

    py::class_<MaxPrincipleReport>(m, "MaxPrincipleReport")
        .def_readonly("interior_max", &MaxPrincipleReport::interior_max)
        .def_readonly("boundary_max", &MaxPrincipleReport::boundary_max)
        .def_readonly("interior_min", &MaxPrincipleReport::interior_min)
        .def_readonly("boundary_min", &MaxPrincipleReport::boundary_min)
        .def_readonly("tolerance", &MaxPrincipleReport::tolerance)
        .def_readonly("violated", &MaxPrincipleReport::violated)
        .def_readonly("min_violated", &MaxPrincipleReport::min_violated)
        .def_readonly("witness", &MaxPrincipleReport::witness)
        .def("any_violation", &MaxPrincipleReport::any_violation);

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("stage", &Snapshot::stage)
        .def_readonly("per_class", &Snapshot::per_class);

    py::class_<EpochStats>(m, "EpochStats")
        .def_readonly("epoch", &EpochStats::epoch)
        .def_readonly("mse", &EpochStats::mse)
        .def_readonly("uuac", &EpochStats::uuac);

    py::class_<TrainHistory>(m, "TrainHistory")
        .def_readonly("per_epoch", &TrainHistory::per_epoch)
        .def_readonly("final_net", &TrainHistory::final_net);

    m.def("householder_to_minus_e1",
          [](const Vec& v) { return mat_rows(householder_to_minus_e1(v)); }, py::arg("v"));
    m.def("find_separating_hyperplane", &find_separating_hyperplane, py::arg("above"),
          py::arg("below"));
    m.def("find_sector_certificate", &find_sector_certificate, py::arg("k1"), py::arg("k2"),
          py::arg("seed") = 0, py::arg("budget") = 200);
    m.def("check_sector_containment", &check_sector_containment, py::arg("cert"),
          py::arg("k1"), py::arg("k2"));
    m.def("projection_injectivity_check", &projection_injectivity_check, py::arg("points"),
          py::arg("basis"), py::arg("shift"));

    m.def("collapse_to_point", &collapse_to_point, py::arg("k"), py::arg("m"), py::arg("eps"));
    m.def("two_class_exact_fit", &two_class_exact_fit, py::arg("k1"), py::arg("k2"),
          py::arg("cert"), py::arg("a1"), py::arg("a2"));
    m.def("multi_class_exact_fit", &multi_class_exact_fit, py::arg("components"),
          py::arg("seed") = 0);
    m.def("finite_exact_fit", &finite_exact_fit, py::arg("points"), py::arg("values"),
          py::arg("seed") = 0);

    m.def(
        "cosine_fit",
        [](const PointCloud& pts, const Vec& targets, double eps, std::uint64_t seed,
           double budget) {
            CosineFitProblem problem;
            problem.points = pts;
            problem.targets = targets;
            problem.tolerance = eps;
            return cosine_fit(problem, seed, budget);
        },
        py::arg("points"), py::arg("targets"), py::arg("eps") = 0.05, py::arg("seed") = 0,
        py::arg("budget") = 1e7);

    m.def("uuac", &uuac, py::arg("net"), py::arg("data"));
    m.def(
        "max_principle_check",
        [](const Network& net, const Vec& lower, const Vec& upper, double step) {
            return max_principle_check(net, BoxRegion(lower, upper), step);
        },
        py::arg("net"), py::arg("lower"), py::arg("upper"), py::arg("step"));
    m.def("lipschitz_bound", &lipschitz_bound, py::arg("net"));

    m.def(
        "generate_ball_dataset",
        [](int balls, std::uint64_t seed) {
            return generate_ball_dataset(balls == 6 ? BallDatasetConfig::six_ball(seed)
                                                    : BallDatasetConfig::eight_ball(seed));
        },
        py::arg("balls") = 6, py::arg("seed") = 0);
    m.def(
        "train",
        [](const LabeledDataset& data, std::uint64_t seed, int epochs) {
            TrainConfig cfg;
            cfg.seed = seed;
            cfg.epochs = epochs;
            return train(cfg, data);
        },
        py::arg("data"), py::arg("seed") = 0, py::arg("epochs") = 500);
    m.def("gradient_check", &gradient_check, py::arg("net"), py::arg("data"));
    m.def("layer_snapshots", &layer_snapshots, py::arg("net"), py::arg("data"));

    m.def(
        "render_svg",
        [](const std::vector<std::pair<PointCloud, int>>& clouds, const Network* net,
           double midpoint, const std::string& title) {
            RenderSpec spec;
            spec.decision_midpoint = midpoint;
            spec.title = title;
            return render_svg(clouds, spec, net);
        },
        py::arg("clouds"), py::arg("net") = nullptr, py::arg("midpoint") = 0.5,
        py::arg("title") = "");
}
