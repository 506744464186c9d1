#pragma once

#include <cstdint>
#include <string>

#include "narrowcap/dataset.hpp"
#include "narrowcap/network.hpp"

namespace narrowcap {

/// Two-class disk dataset: several border balls of one class around a small
/// center ball of the other, classes balanced by construction.
struct BallDatasetConfig {
    std::vector<Vec> border_centers;
    double border_radius = 0.125;
    Vec center_point = {0.5, 0.5};
    double center_radius = 0.01;
    int points_per_border_ball = 2000;
    std::uint64_t seed = 0;

    /// The eight candidate border centers; the default 6-ball layout drops
    /// (0.75, 0.5) and (0.5, 0.75), leaving open corridors toward the
    /// center, and the 8-ball layout uses all of them.
    static std::vector<Vec> candidate_centers();
    static BallDatasetConfig six_ball(std::uint64_t seed);
    static BallDatasetConfig eight_ball(std::uint64_t seed);
};

struct TrainConfig {
    int batch_size = 16;
    double learning_rate = 0.001;
    int epochs = 500;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    std::vector<std::size_t> hidden_widths = {2, 2, 2};  // 4 affine layers, width 2
    Activation hidden_activation = Activation::relu();
};

struct EpochStats {
    int epoch = 0;
    double mse = 0.0;
    double uuac = 0.0;
};

struct TrainHistory {
    std::vector<EpochStats> per_epoch;
    Network final_net;
};

/// Border points labeled 0, center points labeled 1; the center ball gets
/// points_per_border_ball * #border balls points so the classes balance.
/// Uniform in each disk via area-correct polar sampling; deterministic for
/// a fixed seed.
LabeledDataset generate_ball_dataset(const BallDatasetConfig& config);

/// Minibatch Adam on MSE with exact backprop (ReLU subgradient 0 at 0).
/// Records full-dataset MSE and UUAC after every epoch. Deterministic for a
/// fixed (config, seed). Throws on NaN loss.
TrainHistory train(const TrainConfig& config, const LabeledDataset& data);

/// One snapshot after every elementary map (each affine stage, each
/// activation), preceded by the raw data and followed by a thresholding
/// stage when the dataset has exactly two classes. Points are grouped per
/// class in each snapshot.
struct Snapshot {
    std::string stage;
    std::vector<PointCloud> per_class;  // indexed like LabeledDataset::classes()
};

std::vector<Snapshot> layer_snapshots(const Network& net, const LabeledDataset& data);

std::string snapshots_to_json(const std::vector<Snapshot>& snaps, const Vec& classes);

/// Max relative error between backprop and central finite differences
/// (step 1e-6) over all parameters of the MSE loss on `data`.
double gradient_check(const Network& net, const LabeledDataset& data);

std::string history_to_csv(const TrainHistory& history);

}  // namespace narrowcap
