#include "narrowcap/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "narrowcap/rng.hpp"

namespace narrowcap {

std::vector<Vec> BallDatasetConfig::candidate_centers() {
    return {{0.25, 0.25}, {0.5, 0.25}, {0.75, 0.25}, {0.25, 0.5},
            {0.75, 0.5},  {0.25, 0.75}, {0.5, 0.75}, {0.75, 0.75}};
}

BallDatasetConfig BallDatasetConfig::six_ball(std::uint64_t seed) {
    BallDatasetConfig cfg;
    for (const auto& c : candidate_centers())
        if (!(c == Vec{0.75, 0.5}) && !(c == Vec{0.5, 0.75})) cfg.border_centers.push_back(c);
    cfg.seed = seed;
    return cfg;
}

BallDatasetConfig BallDatasetConfig::eight_ball(std::uint64_t seed) {
    BallDatasetConfig cfg;
    cfg.border_centers = candidate_centers();
    cfg.seed = seed;
    return cfg;
}

LabeledDataset generate_ball_dataset(const BallDatasetConfig& config) {
    if (!(config.border_radius > 0.0) || !(config.center_radius > 0.0))
        throw std::invalid_argument("generate_ball_dataset: radii must be positive");
    if (config.border_centers.empty())
        throw std::invalid_argument("generate_ball_dataset: no border centers");
    if (config.points_per_border_ball <= 0)
        throw std::invalid_argument("generate_ball_dataset: points per ball must be positive");
    for (std::size_t i = 0; i < config.border_centers.size(); ++i) {
        if (config.border_centers[i].size() != 2 || config.center_point.size() != 2)
            throw std::invalid_argument("generate_ball_dataset: centers must be 2-D");
        for (std::size_t j = i + 1; j < config.border_centers.size(); ++j)
            if (config.border_centers[i] == config.border_centers[j])
                throw std::invalid_argument("generate_ball_dataset: duplicate border centers");
    }

    Rng rng(config.seed * 0x9e3779b97f4a7c15ULL + 3);
    LabeledDataset data;
    data.points.dim = 2;
    auto sample_disk = [&](const Vec& center, double radius) {
        const double r = radius * std::sqrt(rng.uniform());
        const double theta = 2.0 * M_PI * rng.uniform();
        return Vec{center[0] + r * std::cos(theta), center[1] + r * std::sin(theta)};
    };
    for (const auto& center : config.border_centers)
        for (int i = 0; i < config.points_per_border_ball; ++i) {
            data.points.points.push_back(sample_disk(center, config.border_radius));
            data.targets.push_back(0.0);
        }
    const std::size_t center_count =
        config.border_centers.size() * static_cast<std::size_t>(config.points_per_border_ball);
    for (std::size_t i = 0; i < center_count; ++i) {
        data.points.points.push_back(sample_disk(config.center_point, config.center_radius));
        data.targets.push_back(1.0);
    }
    return data;
}

namespace {

struct TrainState {
    Network net;
    // Adam moments mirroring the parameter layout.
    std::vector<Mat> m_w, v_w;
    std::vector<Vec> m_b, v_b;
    Mat m_fw, v_fw;
    Vec m_fb, v_fb;
    long step = 0;
};

Network init_network(const TrainConfig& config, std::size_t in_dim, Rng& rng) {
    std::vector<Layer> hidden;
    std::size_t prev = in_dim;
    auto uniform_init = [&](Mat& w, Vec& b, std::size_t fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (auto& v : w.data) v = rng.uniform(-bound, bound);
        for (auto& v : b) v = rng.uniform(-bound, bound);
    };
    for (std::size_t width : config.hidden_widths) {
        Layer l;
        l.weights = Mat(width, prev);
        l.bias = Vec(width, 0.0);
        l.activation = config.hidden_activation;
        uniform_init(l.weights, l.bias, prev);
        hidden.push_back(std::move(l));
        prev = width;
    }
    Mat fw(1, prev);
    Vec fb(1, 0.0);
    uniform_init(fw, fb, prev);
    return Network(std::move(hidden), std::move(fw), std::move(fb));
}

// Backprop of the mean-squared error over the sample subset; gradients are
// accumulated into grad_* (already sized and zeroed by the caller).
double mse_gradients(const Network& net, const LabeledDataset& data,
                     const std::vector<std::size_t>& subset, std::vector<Mat>& grad_w,
                     std::vector<Vec>& grad_b, Mat& grad_fw, Vec& grad_fb) {
    const std::size_t layers = net.hidden().size();
    const double inv_count = 1.0 / static_cast<double>(subset.size());
    double loss = 0.0;
    std::vector<Vec> post(layers + 1), pre(layers);
    for (std::size_t si : subset) {
        post[0] = data.points.points[si];
        for (std::size_t l = 0; l < layers; ++l) {
            pre[l] = vadd(matvec(net.hidden()[l].weights, post[l]), net.hidden()[l].bias);
            post[l + 1] = pre[l];
            for (auto& v : post[l + 1]) v = net.hidden()[l].activation.apply(v);
        }
        const double out = dot(net.final_weights().row(0), post[layers]) + net.final_bias()[0];
        const double err = out - data.targets[si];
        loss += err * err * inv_count;

        const double delta_out = 2.0 * err * inv_count;
        for (std::size_t j = 0; j < post[layers].size(); ++j)
            grad_fw(0, j) += delta_out * post[layers][j];
        grad_fb[0] += delta_out;

        Vec delta(post[layers].size());
        for (std::size_t j = 0; j < delta.size(); ++j)
            delta[j] = delta_out * net.final_weights()(0, j);
        for (std::size_t l = layers; l-- > 0;) {
            const Layer& layer = net.hidden()[l];
            Vec dz(delta.size());
            for (std::size_t j = 0; j < delta.size(); ++j)
                dz[j] = delta[j] * layer.activation.derivative(pre[l][j]);
            for (std::size_t j = 0; j < dz.size(); ++j) {
                grad_b[l][j] += dz[j];
                for (std::size_t k = 0; k < post[l].size(); ++k)
                    grad_w[l](j, k) += dz[j] * post[l][k];
            }
            if (l > 0) {
                Vec next(post[l].size(), 0.0);
                for (std::size_t k = 0; k < next.size(); ++k)
                    for (std::size_t j = 0; j < dz.size(); ++j)
                        next[k] += layer.weights(j, k) * dz[j];
                delta = std::move(next);
            }
        }
    }
    return loss;
}

void adam_update(TrainState& st, const TrainConfig& cfg, const std::vector<Mat>& grad_w,
                 const std::vector<Vec>& grad_b, const Mat& grad_fw, const Vec& grad_fb) {
    ++st.step;
    const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(st.step));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(st.step));
    auto update = [&](double& p, double& m, double& v, double g) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g * g;
        p -= cfg.learning_rate * (m / corr1) / (std::sqrt(v / corr2) + cfg.adam_eps);
    };
    for (std::size_t l = 0; l < st.net.hidden().size(); ++l) {
        Layer& layer = st.net.mutable_hidden()[l];
        for (std::size_t i = 0; i < layer.weights.data.size(); ++i)
            update(layer.weights.data[i], st.m_w[l].data[i], st.v_w[l].data[i],
                   grad_w[l].data[i]);
        for (std::size_t i = 0; i < layer.bias.size(); ++i)
            update(layer.bias[i], st.m_b[l][i], st.v_b[l][i], grad_b[l][i]);
    }
    for (std::size_t i = 0; i < st.net.mutable_final_weights().data.size(); ++i)
        update(st.net.mutable_final_weights().data[i], st.m_fw.data[i], st.v_fw.data[i],
               grad_fw.data[i]);
    update(st.net.mutable_final_bias()[0], st.m_fb[0], st.v_fb[0], grad_fb[0]);
}

}  // namespace

TrainHistory train(const TrainConfig& config, const LabeledDataset& data) {
    if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
    if (config.batch_size <= 0 || config.epochs <= 0 || !(config.learning_rate > 0.0))
        throw std::invalid_argument("train: hyperparameters must be positive");
    const std::size_t in_dim = data.points.dim;
    for (std::size_t w : config.hidden_widths)
        if (w > in_dim)
            std::cerr << "train: warning: hidden width " << w << " exceeds input dimension "
                      << in_dim << " (outside the narrow regime)\n";

    Rng rng(config.seed * 0x9e3779b97f4a7c15ULL + 5);
    TrainState st;
    st.net = init_network(config, in_dim, rng);
    for (const auto& l : st.net.hidden()) {
        st.m_w.push_back(Mat(l.weights.rows, l.weights.cols));
        st.v_w.push_back(Mat(l.weights.rows, l.weights.cols));
        st.m_b.push_back(Vec(l.bias.size(), 0.0));
        st.v_b.push_back(Vec(l.bias.size(), 0.0));
    }
    st.m_fw = Mat(1, st.net.final_weights().cols);
    st.v_fw = Mat(1, st.net.final_weights().cols);
    st.m_fb = Vec(1, 0.0);
    st.v_fb = Vec(1, 0.0);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<Mat> grad_w;
    std::vector<Vec> grad_b;
    for (const auto& l : st.net.hidden()) {
        grad_w.push_back(Mat(l.weights.rows, l.weights.cols));
        grad_b.push_back(Vec(l.bias.size(), 0.0));
    }
    Mat grad_fw(1, st.net.final_weights().cols);
    Vec grad_fb(1, 0.0);

    TrainHistory history;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                 order.begin() + static_cast<std::ptrdiff_t>(end));
            for (auto& g : grad_w) std::fill(g.data.begin(), g.data.end(), 0.0);
            for (auto& g : grad_b) std::fill(g.begin(), g.end(), 0.0);
            std::fill(grad_fw.data.begin(), grad_fw.data.end(), 0.0);
            grad_fb[0] = 0.0;
            const double loss =
                mse_gradients(st.net, data, batch, grad_w, grad_b, grad_fw, grad_fb);
            if (!std::isfinite(loss))
                throw std::runtime_error("train: NaN/inf loss at epoch " + std::to_string(epoch) +
                                         ", batch starting at " + std::to_string(start));
            adam_update(st, config, grad_w, grad_b, grad_fw, grad_fb);
        }

        EpochStats stats;
        stats.epoch = epoch;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double err = st.net.forward(data.points.points[i])[0] - data.targets[i];
            stats.mse += err * err;
            stats.uuac = std::max(stats.uuac, std::abs(err));
        }
        stats.mse /= static_cast<double>(data.size());
        history.per_epoch.push_back(stats);
    }
    history.final_net = st.net;
    return history;
}

std::vector<Snapshot> layer_snapshots(const Network& net, const LabeledDataset& data) {
    if (net.input_dim() != data.points.dim)
        throw std::invalid_argument("layer_snapshots: dimension mismatch");
    const Vec classes = data.classes();
    auto class_index = [&](double target) {
        return static_cast<std::size_t>(
            std::lower_bound(classes.begin(), classes.end(), target) - classes.begin());
    };

    // Current value of every sample, advanced stage by stage.
    std::vector<Vec> current = data.points.points;
    std::vector<Snapshot> snaps;
    auto record = [&](const std::string& stage) {
        Snapshot s;
        s.stage = stage;
        s.per_class.assign(classes.size(), PointCloud{});
        for (auto& pc : s.per_class) pc.dim = current.empty() ? 0 : current[0].size();
        for (std::size_t i = 0; i < current.size(); ++i)
            s.per_class[class_index(data.targets[i])].points.push_back(current[i]);
        snaps.push_back(std::move(s));
    };

    record("input");
    for (std::size_t l = 0; l < net.hidden().size(); ++l) {
        const Layer& layer = net.hidden()[l];
        for (auto& x : current) x = vadd(matvec(layer.weights, x), layer.bias);
        record("affine" + std::to_string(l + 1));
        for (auto& x : current)
            for (auto& v : x) v = layer.activation.apply(v);
        record(layer.activation.name() + std::to_string(l + 1));
    }
    for (auto& x : current) x = vadd(matvec(net.final_weights(), x), net.final_bias());
    record("final_affine");

    if (classes.size() == 2 && net.output_dim() == 1) {
        const double mid = 0.5 * (classes[0] + classes[1]);
        for (auto& x : current) x = {x[0] >= mid ? classes[1] : classes[0]};
        record("threshold");
    }
    return snaps;
}

std::string snapshots_to_json(const std::vector<Snapshot>& snaps, const Vec& classes) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& s : snaps) {
        nlohmann::json js;
        js["stage"] = s.stage;
        js["classes"] = nlohmann::json::array();
        for (std::size_t c = 0; c < s.per_class.size(); ++c) {
            nlohmann::json jc;
            jc["value"] = c < classes.size() ? classes[c] : static_cast<double>(c);
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : s.per_class[c].points) pts.push_back(p);
            jc["points"] = std::move(pts);
            js["classes"].push_back(std::move(jc));
        }
        doc.push_back(std::move(js));
    }
    return doc.dump();
}

double gradient_check(const Network& net, const LabeledDataset& data) {
    if (data.size() == 0) throw std::invalid_argument("gradient_check: empty dataset");
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), 0);

    Network work = net;
    std::vector<Mat> grad_w;
    std::vector<Vec> grad_b;
    for (const auto& l : work.hidden()) {
        grad_w.push_back(Mat(l.weights.rows, l.weights.cols));
        grad_b.push_back(Vec(l.bias.size(), 0.0));
    }
    Mat grad_fw(1, work.final_weights().cols);
    Vec grad_fb(1, 0.0);
    mse_gradients(work, data, all, grad_w, grad_b, grad_fw, grad_fb);

    auto loss_of = [&](const Network& n) {
        double loss = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double err = n.forward(data.points.points[i])[0] - data.targets[i];
            loss += err * err;
        }
        return loss / static_cast<double>(data.size());
    };

    const double h = 1e-6;
    double worst = 0.0;
    auto probe = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = loss_of(work);
        param = saved - h;
        const double down = loss_of(work);
        param = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({1.0, std::abs(analytic), std::abs(numeric)});
        worst = std::max(worst, std::abs(analytic - numeric) / denom);
    };
    for (std::size_t l = 0; l < work.hidden().size(); ++l) {
        Layer& layer = work.mutable_hidden()[l];
        for (std::size_t i = 0; i < layer.weights.data.size(); ++i)
            probe(layer.weights.data[i], grad_w[l].data[i]);
        for (std::size_t i = 0; i < layer.bias.size(); ++i)
            probe(layer.bias[i], grad_b[l][i]);
    }
    for (std::size_t i = 0; i < work.mutable_final_weights().data.size(); ++i)
        probe(work.mutable_final_weights().data[i], grad_fw.data[i]);
    probe(work.mutable_final_bias()[0], grad_fb[0]);
    return worst;
}

std::string history_to_csv(const TrainHistory& history) {
    std::ostringstream out;
    out << "epoch,mse,uuac\n";
    out.precision(17);
    for (const auto& s : history.per_epoch)
        out << s.epoch << ',' << s.mse << ',' << s.uuac << '\n';
    return out.str();
}

}  // namespace narrowcap
