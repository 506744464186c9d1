#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "narrowcap/common.hpp"
#include "narrowcap/constructors.hpp"
#include "narrowcap/cosine_fit.hpp"
#include "narrowcap/dataset.hpp"
#include "narrowcap/experiment.hpp"
#include "narrowcap/render_svg.hpp"
#include "narrowcap/verifier.hpp"

namespace nc = narrowcap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitSearchFailed = 3;

nc::Vec parse_vector(const std::string& text) {
    nc::Vec v;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        v.push_back(std::stod(text.substr(pos, comma - pos)));
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return v;
}

nc::PointCloud load_cloud(const std::string& path) {
    const std::string text = nc::read_file(path);
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        return nc::cloud_from_json(text);
    return nc::cloud_from_csv(text);
}

nc::LabeledDataset make_dataset(const nc::PointCloud& cloud, double target) {
    nc::LabeledDataset d;
    d.points = cloud;
    d.targets.assign(cloud.size(), target);
    return d;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"narrowcap: construction and verification of neural networks "
                 "of width at most the input dimension"};
    app.require_subcommand(1);

    if (const char* tol = std::getenv("NARROWCAP_TOL"))
        nc::set_global_tolerance(std::stod(tol));

    // ---- collapse ----
    auto* collapse = app.add_subcommand(
        "collapse", "Build a ReLU map collapsing cloud K to one point while fixing cloud M");
    std::string collapse_k, collapse_m, collapse_out;
    double collapse_eps = 1e-3;
    collapse->add_option("--k", collapse_k, "CSV/JSON cloud to collapse")->required();
    collapse->add_option("--m", collapse_m, "CSV/JSON cloud to keep fixed")->required();
    collapse->add_option("--eps", collapse_eps, "distance bound for the collapsed point");
    collapse->add_option("--out", collapse_out, "output network JSON")->required();

    // ---- fit-two-class ----
    auto* two = app.add_subcommand("fit-two-class",
                                   "Exact two-class fit via a sector certificate (searched)");
    std::string two_k1, two_k2, two_out;
    double two_a1 = 1.0, two_a2 = 0.0;
    std::uint64_t two_seed = 0;
    two->add_option("--k1", two_k1, "cloud taking value a1")->required();
    two->add_option("--k2", two_k2, "cloud taking value a2")->required();
    two->add_option("--a1", two_a1, "value on k1");
    two->add_option("--a2", two_a2, "value on k2");
    two->add_option("--seed", two_seed, "sector search seed");
    two->add_option("--out", two_out, "output network JSON")->required();

    // ---- fit-multi ----
    auto* multi = app.add_subcommand("fit-multi", "Exact multi-class fit (cloud=value pairs)");
    std::vector<std::string> multi_components;
    std::string multi_out;
    std::uint64_t multi_seed = 0;
    multi->add_option("--component", multi_components, "cloud file and value as path=value")
        ->required()
        ->expected(-1);
    multi->add_option("--seed", multi_seed, "seed");
    multi->add_option("--out", multi_out, "output network JSON")->required();

    // ---- fit-finite ----
    auto* finite = app.add_subcommand("fit-finite",
                                      "Width-2 ReLU interpolation of values on a finite set");
    std::string finite_points, finite_values, finite_out;
    std::uint64_t finite_seed = 0;
    finite->add_option("--points", finite_points, "points CSV/JSON")->required();
    finite->add_option("--values", finite_values, "values CSV (one per row)")->required();
    finite->add_option("--seed", finite_seed, "projection seed");
    finite->add_option("--out", finite_out, "output network JSON")->required();

    // ---- fit-cos ----
    auto* cosf = app.add_subcommand("fit-cos",
                                    "Width-1 depth-3 cosine fit of targets on a finite set");
    std::string cos_points, cos_targets, cos_out, cos_report;
    double cos_eps = 0.05, cos_budget = 1e7;
    std::uint64_t cos_seed = 0;
    cosf->add_option("--points", cos_points, "points CSV/JSON")->required();
    cosf->add_option("--targets", cos_targets, "targets CSV (one per row)")->required();
    cosf->add_option("--eps", cos_eps, "target sup-norm accuracy");
    cosf->add_option("--seed", cos_seed, "seed");
    cosf->add_option("--budget", cos_budget, "scan cap for the frequency search");
    cosf->add_option("--out", cos_out, "output network JSON")->required();
    cosf->add_option("--report", cos_report, "optional JSON fit report");

    // ---- verify-max ----
    auto* vmax = app.add_subcommand("verify-max",
                                    "Grid check of the boundary-maximum property on a box");
    std::string vmax_net, vmax_box;
    double vmax_step = 0.01;
    vmax->add_option("--net", vmax_net, "network JSON")->required();
    vmax->add_option("--box", vmax_box, "box as lo1,lo2,...:hi1,hi2,...")->required();
    vmax->add_option("--step", vmax_step, "grid spacing");

    // ---- experiment ----
    auto* exp = app.add_subcommand("experiment", "Train the width-2 MLP on the ball dataset");
    int exp_balls = 6;
    std::uint64_t exp_seed = 1;
    std::string exp_out;
    exp->add_option("--balls", exp_balls, "6 or 8 border balls")
        ->check(CLI::IsMember({6, 8}));
    exp->add_option("--seed", exp_seed, "dataset and training seed");
    exp->add_option("--out", exp_out, "output directory")->required();

    // ---- render ----
    auto* render = app.add_subcommand("render", "Deterministic SVG scatter/decision plot");
    std::vector<std::string> render_clouds;
    std::string render_net, render_out, render_title;
    double render_mid = 0.5;
    render->add_option("--cloud", render_clouds, "cloud file and class as path=classId")
        ->required()
        ->expected(-1);
    render->add_option("--net", render_net, "optional network JSON for decision shading");
    render->add_option("--midpoint", render_mid, "decision threshold between class values");
    render->add_option("--title", render_title, "panel title");
    render->add_option("--out", render_out, "output SVG path")->required();

    // ---- snapshots ----
    auto* snaps = app.add_subcommand("snapshots",
                                     "Per-stage transformed clouds for a network and dataset");
    std::string snaps_net, snaps_data, snaps_out;
    snaps->add_option("--net", snaps_net, "network JSON")->required();
    snaps->add_option("--data", snaps_data, "dataset CSV (coordinates + target column)")->required();
    snaps->add_option("--out", snaps_out, "output snapshot JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints usage/help
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (collapse->parsed()) {
        const nc::PointCloud k = load_cloud(collapse_k);
        const nc::PointCloud m = load_cloud(collapse_m);
        const nc::CollapseResult res = nc::collapse_to_point(k, m, collapse_eps);
        nc::write_file(collapse_out, nc::serialize(res.network));
        double fix_err = 0.0;
        for (const auto& p : m.points)
            fix_err = std::max(fix_err, nc::norm2(nc::vsub(res.network.forward(p), p)));
        std::cout << "collapsed " << k.size() << " points; max |F(m)-m| over M = " << fix_err
                  << "\ncollapsed point:";
        for (double v : res.collapsed_point) std::cout << ' ' << v;
        std::cout << "\nwrote " << collapse_out << "\n";
    } else if (two->parsed()) {
        const nc::PointCloud k1 = load_cloud(two_k1);
        const nc::PointCloud k2 = load_cloud(two_k2);
        const nc::SectorCertificate cert = nc::find_sector_certificate(k1, k2, two_seed);
        const nc::Network net = nc::two_class_exact_fit(k1, k2, cert, two_a1, two_a2);
        nc::write_file(two_out, nc::serialize(net));
        nc::LabeledDataset all = make_dataset(k1, two_a1);
        const nc::LabeledDataset d2 = make_dataset(k2, two_a2);
        all.points.append(d2.points);
        all.targets.insert(all.targets.end(), d2.targets.begin(), d2.targets.end());
        std::cout << "UUAC " << nc::uuac(net, all) << "\nwrote " << two_out << "\n";
    } else if (multi->parsed()) {
        std::vector<std::pair<nc::PointCloud, double>> comps;
        for (const auto& spec : multi_components) {
            const std::size_t eq = spec.rfind('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--component expects path=value");
            comps.emplace_back(load_cloud(spec.substr(0, eq)), std::stod(spec.substr(eq + 1)));
        }
        const nc::Network net = nc::multi_class_exact_fit(comps, multi_seed);
        nc::write_file(multi_out, nc::serialize(net));
        double worst = 0.0;
        for (const auto& [cloud, value] : comps)
            worst = std::max(worst, nc::uuac(net, make_dataset(cloud, value)));
        std::cout << "UUAC " << worst << "\nwrote " << multi_out << "\n";
    } else if (finite->parsed()) {
        const nc::PointCloud pts = load_cloud(finite_points);
        const nc::Vec vals = nc::values_from_csv(nc::read_file(finite_values));
        const nc::Network net = nc::finite_exact_fit(pts, vals, finite_seed);
        nc::write_file(finite_out, nc::serialize(net));
        nc::LabeledDataset d{pts, vals};
        std::cout << "UUAC " << nc::uuac(net, d) << "\nwrote " << finite_out << "\n";
    } else if (cosf->parsed()) {
        nc::CosineFitProblem problem;
        problem.points = load_cloud(cos_points);
        problem.targets = nc::values_from_csv(nc::read_file(cos_targets));
        problem.tolerance = cos_eps;
        const nc::CosineFitResult res = nc::cosine_fit(problem, cos_seed, cos_budget);
        nc::write_file(cos_out, nc::serialize(res.network));
        nc::LabeledDataset d{problem.points, problem.targets};
        const double err = nc::uuac(res.network, d);
        std::cout << "alpha " << res.alpha << " w2 " << res.w2 << " max error " << err
                  << "\nwrote " << cos_out << "\n";
        if (!cos_report.empty()) {
            nlohmann::json rep;
            rep["alpha"] = res.alpha;
            rep["b1"] = res.b1;
            rep["w2"] = res.w2;
            rep["torus_residual"] = res.achieved_error;
            rep["max_error"] = err;
            nc::write_file(cos_report, rep.dump(2));
        }
    } else if (vmax->parsed()) {
        const nc::Network net = nc::deserialize(nc::read_file(vmax_net));
        const std::size_t colon = vmax_box.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--box expects lo1,lo2,...:hi1,hi2,...");
        const nc::BoxRegion region(parse_vector(vmax_box.substr(0, colon)),
                                   parse_vector(vmax_box.substr(colon + 1)));
        const nc::MaxPrincipleReport rep = nc::max_principle_check(net, region, vmax_step);
        std::cout << "interior max " << rep.interior_max << ", boundary max " << rep.boundary_max
                  << ", interior min " << rep.interior_min << ", boundary min "
                  << rep.boundary_min << ", tolerance " << rep.tolerance << "\n";
        if (rep.any_violation()) {
            const nc::Vec& w = rep.violated ? *rep.witness : *rep.min_witness;
            std::cout << (rep.violated ? "maximum" : "minimum")
                      << " principle violated; interior witness:";
            for (double v : w) std::cout << ' ' << v;
            std::cout << "\n";
            return kExitViolation;
        }
        std::cout << "principle holds on the sampled grid\n";
    } else if (exp->parsed()) {
        const nc::BallDatasetConfig cfg = exp_balls == 6
                                              ? nc::BallDatasetConfig::six_ball(exp_seed)
                                              : nc::BallDatasetConfig::eight_ball(exp_seed);
        const nc::LabeledDataset data = nc::generate_ball_dataset(cfg);
        nc::TrainConfig tcfg;
        tcfg.seed = exp_seed;
        const nc::TrainHistory hist = nc::train(tcfg, data);
        std::filesystem::create_directories(exp_out);
        nc::write_file(exp_out + "/dataset.csv", nc::dataset_to_csv(data));
        nc::write_file(exp_out + "/history.csv", nc::history_to_csv(hist));
        nc::write_file(exp_out + "/network.json", nc::serialize(hist.final_net));
        nc::write_file(exp_out + "/snapshots.json",
                       nc::snapshots_to_json(nc::layer_snapshots(hist.final_net, data),
                                             data.classes()));
        const nc::EpochStats& last = hist.per_epoch.back();
        std::cout << "final MSE " << last.mse << " UUAC " << last.uuac << "\nwrote 4 artifacts to "
                  << exp_out << "\n";
    } else if (render->parsed()) {
        std::vector<std::pair<nc::PointCloud, int>> clouds;
        for (const auto& spec : render_clouds) {
            const std::size_t eq = spec.rfind('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--cloud expects path=classId");
            clouds.emplace_back(load_cloud(spec.substr(0, eq)),
                                std::stoi(spec.substr(eq + 1)));
        }
        nc::RenderSpec rspec;
        rspec.decision_midpoint = render_mid;
        rspec.title = render_title;
        nc::Network net;
        const nc::Network* net_ptr = nullptr;
        if (!render_net.empty()) {
            net = nc::deserialize(nc::read_file(render_net));
            net_ptr = &net;
        }
        nc::write_file(render_out, nc::render_svg(clouds, rspec, net_ptr));
        std::cout << "wrote " << render_out << "\n";
    } else if (snaps->parsed()) {
        const nc::Network net = nc::deserialize(nc::read_file(snaps_net));
        const nc::LabeledDataset data = nc::dataset_from_csv(nc::read_file(snaps_data));
        nc::write_file(snaps_out,
                       nc::snapshots_to_json(nc::layer_snapshots(net, data), data.classes()));
        std::cout << "wrote " << snaps_out << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const nc::NoSeparationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSearchFailed;
    } catch (const nc::NoSectorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSearchFailed;
    } catch (const nc::ConeSearchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSearchFailed;
    } catch (const nc::SearchBudgetError& e) {
        std::cerr << "error: " << e.what() << " (best w2 " << e.best_w2 << ", error "
                  << e.best_error << ")\n";
        return kExitSearchFailed;
    } catch (const nc::ConstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSearchFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
