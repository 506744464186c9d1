#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "narrowcap/linalg.hpp"

namespace narrowcap {

/// Scalar activation applied elementwise. `step` exists for completeness but
/// has no Lipschitz bound and is excluded from gradient paths.
struct Activation {
    enum class Kind { relu, leaky_relu, cosine, tanh, sigmoid, identity, step };

    Kind kind = Kind::relu;
    double alpha = 0.01;  // leaky_relu slope, > 0

    static Activation relu() { return {Kind::relu, 0.0}; }
    static Activation leaky_relu(double alpha);
    static Activation cosine() { return {Kind::cosine, 0.0}; }
    static Activation tanh() { return {Kind::tanh, 0.0}; }
    static Activation sigmoid() { return {Kind::sigmoid, 0.0}; }
    static Activation identity() { return {Kind::identity, 0.0}; }
    static Activation step() { return {Kind::step, 0.0}; }

    double apply(double t) const;
    /// Derivative for backprop; ReLU/leaky use subgradient at 0 equal to the
    /// left limit (0 resp. alpha). Throws for step.
    double derivative(double t) const;
    /// Lipschitz constant. Throws UnboundedLipschitzError for step.
    double lipschitz() const;
    bool monotone() const { return kind != Kind::cosine; }

    std::string name() const;
    static Activation parse(const std::string& name, double alpha);

    bool operator==(const Activation& o) const {
        return kind == o.kind && (kind != Kind::leaky_relu || alpha == o.alpha);
    }
};

struct UnboundedLipschitzError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Layer {
    Mat weights;  // n_j x n_{j-1}
    Vec bias;     // n_j
    Activation activation;

    std::size_t in_dim() const { return weights.cols; }
    std::size_t out_dim() const { return weights.rows; }
};

/// Layered network: hidden layers apply affine + activation, then one final
/// affine map. depth = hidden count + 1 affine stages; width = max layer
/// output dimension.
class Network {
public:
    Network() = default;
    Network(std::vector<Layer> hidden, Mat final_weights, Vec final_bias);

    /// Pure affine network x -> w x + b.
    static Network affine(Mat w, Vec b);

    const std::vector<Layer>& hidden() const { return hidden_; }
    const Mat& final_weights() const { return final_w_; }
    const Vec& final_bias() const { return final_b_; }

    std::size_t input_dim() const;
    std::size_t output_dim() const { return final_w_.rows; }
    std::size_t depth() const { return hidden_.size() + 1; }
    std::size_t width() const;

    Vec forward(const Vec& x) const;
    /// Scalar convenience for 1-D output networks.
    double forward_scalar(const Vec& x) const;

    /// Pre-activation affine value of hidden layer k (1-based, k <= depth-1).
    Vec forward_prefix(std::size_t k, const Vec& x) const;

    /// Batched forward over column-major points (dim x count, contiguous per
    /// column); writes output_dim values per point into out. Used by the
    /// grid verifier where per-call overhead matters.
    void forward_batch(const double* pts, std::size_t count, double* out) const;

    Network negated() const;

    // Only used by the trainer and gradient check.
    std::vector<Layer>& mutable_hidden() { return hidden_; }
    Mat& mutable_final_weights() { return final_w_; }
    Vec& mutable_final_bias() { return final_b_; }

    bool operator==(const Network& o) const;

private:
    std::vector<Layer> hidden_;
    Mat final_w_;
    Vec final_b_;
};

/// Functional composition with the boundary affine maps merged, so
/// depth(result) = depth(outer) + depth(inner) - 1.
Network compose(const Network& outer, const Network& inner);

/// Product over affine stages of spectral-norm upper bounds times activation
/// Lipschitz constants. Guaranteed >= the true Lipschitz constant (2-norm).
double lipschitz_bound(const Network& net);

/// JSON serialization. Round trip is exact: doubles survive bit-identically.
std::string serialize(const Network& net);
Network deserialize(const std::string& bytes);

}  // namespace narrowcap
