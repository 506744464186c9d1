#include "narrowcap/network.hpp"

#include <cmath>

#include <json.hpp>

namespace narrowcap {

Activation Activation::leaky_relu(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("leaky_relu alpha must be > 0");
    return {Kind::leaky_relu, alpha};
}

double Activation::apply(double t) const {
    switch (kind) {
        case Kind::relu: return t > 0.0 ? t : 0.0;
        case Kind::leaky_relu: return t >= 0.0 ? t : alpha * t;
        case Kind::cosine: return std::cos(t);
        case Kind::tanh: return std::tanh(t);
        case Kind::sigmoid: return 1.0 / (1.0 + std::exp(-t));
        case Kind::identity: return t;
        case Kind::step: return t >= 0.0 ? 1.0 : 0.0;
    }
    return t;
}

double Activation::derivative(double t) const {
    switch (kind) {
        case Kind::relu: return t > 0.0 ? 1.0 : 0.0;
        case Kind::leaky_relu: return t > 0.0 ? 1.0 : alpha;
        case Kind::cosine: return -std::sin(t);
        case Kind::tanh: {
            const double y = std::tanh(t);
            return 1.0 - y * y;
        }
        case Kind::sigmoid: {
            const double y = 1.0 / (1.0 + std::exp(-t));
            return y * (1.0 - y);
        }
        case Kind::identity: return 1.0;
        case Kind::step:
            throw std::invalid_argument("step activation has no derivative");
    }
    return 0.0;
}

double Activation::lipschitz() const {
    switch (kind) {
        case Kind::relu: return 1.0;
        case Kind::leaky_relu: return std::max(1.0, alpha);
        case Kind::cosine: return 1.0;
        case Kind::tanh: return 1.0;
        case Kind::sigmoid: return 0.25;
        case Kind::identity: return 1.0;
        case Kind::step:
            throw UnboundedLipschitzError("step activation is discontinuous");
    }
    return 1.0;
}

std::string Activation::name() const {
    switch (kind) {
        case Kind::relu: return "relu";
        case Kind::leaky_relu: return "leaky_relu";
        case Kind::cosine: return "cosine";
        case Kind::tanh: return "tanh";
        case Kind::sigmoid: return "sigmoid";
        case Kind::identity: return "identity";
        case Kind::step: return "step";
    }
    return "relu";
}

Activation Activation::parse(const std::string& name, double alpha) {
    if (name == "relu") return relu();
    if (name == "leaky_relu") return leaky_relu(alpha);
    if (name == "cosine") return cosine();
    if (name == "tanh") return tanh();
    if (name == "sigmoid") return sigmoid();
    if (name == "identity") return identity();
    if (name == "step") return step();
    throw std::invalid_argument("unknown activation: " + name);
}

Network::Network(std::vector<Layer> hidden, Mat final_weights, Vec final_bias)
    : hidden_(std::move(hidden)), final_w_(std::move(final_weights)),
      final_b_(std::move(final_bias)) {
    if (final_w_.rows != final_b_.size())
        throw std::invalid_argument("final bias length mismatch");
    std::size_t prev = hidden_.empty() ? final_w_.cols : hidden_.front().in_dim();
    for (const auto& l : hidden_) {
        if (l.in_dim() != prev) throw std::invalid_argument("layer chain dimension mismatch");
        if (l.bias.size() != l.out_dim()) throw std::invalid_argument("bias length mismatch");
        prev = l.out_dim();
    }
    if (final_w_.cols != prev) throw std::invalid_argument("final layer dimension mismatch");
}

Network Network::affine(Mat w, Vec b) { return Network({}, std::move(w), std::move(b)); }

std::size_t Network::input_dim() const {
    return hidden_.empty() ? final_w_.cols : hidden_.front().in_dim();
}

std::size_t Network::width() const {
    std::size_t w = final_w_.rows;
    for (const auto& l : hidden_) w = std::max(w, l.out_dim());
    return w;
}

Vec Network::forward(const Vec& x) const {
    if (x.size() != input_dim()) throw std::invalid_argument("forward: input dimension mismatch");
    Vec cur = x;
    for (const auto& l : hidden_) {
        Vec z = vadd(matvec(l.weights, cur), l.bias);
        for (auto& v : z) v = l.activation.apply(v);
        cur = std::move(z);
    }
    return vadd(matvec(final_w_, cur), final_b_);
}

double Network::forward_scalar(const Vec& x) const {
    if (output_dim() != 1) throw std::invalid_argument("forward_scalar: network output is not scalar");
    return forward(x)[0];
}

Vec Network::forward_prefix(std::size_t k, const Vec& x) const {
    if (k < 1 || k > hidden_.size())
        throw std::invalid_argument("forward_prefix: layer index out of range");
    if (x.size() != input_dim()) throw std::invalid_argument("forward_prefix: input dimension mismatch");
    Vec cur = x;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        Vec z = vadd(matvec(hidden_[i].weights, cur), hidden_[i].bias);
        for (auto& v : z) v = hidden_[i].activation.apply(v);
        cur = std::move(z);
    }
    return vadd(matvec(hidden_[k - 1].weights, cur), hidden_[k - 1].bias);
}

Network Network::negated() const {
    Network n = *this;
    for (auto& v : n.final_w_.data) v = -v;
    for (auto& v : n.final_b_) v = -v;
    return n;
}

bool Network::operator==(const Network& o) const {
    if (hidden_.size() != o.hidden_.size()) return false;
    for (std::size_t i = 0; i < hidden_.size(); ++i) {
        if (!(hidden_[i].activation == o.hidden_[i].activation)) return false;
        if (!hidden_[i].weights.same_shape(o.hidden_[i].weights)) return false;
        if (hidden_[i].weights.data != o.hidden_[i].weights.data) return false;
        if (hidden_[i].bias != o.hidden_[i].bias) return false;
    }
    return final_w_.same_shape(o.final_w_) && final_w_.data == o.final_w_.data &&
           final_b_ == o.final_b_;
}

Network compose(const Network& outer, const Network& inner) {
    if (outer.input_dim() != inner.output_dim())
        throw std::invalid_argument("compose: inner output dim != outer input dim");
    std::vector<Layer> hidden = inner.hidden();
    if (outer.hidden().empty()) {
        // Outer is affine: fold it into inner's final map.
        Mat w = matmul(outer.final_weights(), inner.final_weights());
        Vec b = vadd(matvec(outer.final_weights(), inner.final_bias()), outer.final_bias());
        return Network(std::move(hidden), std::move(w), std::move(b));
    }
    const Layer& first = outer.hidden().front();
    Layer merged;
    merged.weights = matmul(first.weights, inner.final_weights());
    merged.bias = vadd(matvec(first.weights, inner.final_bias()), first.bias);
    merged.activation = first.activation;
    hidden.push_back(std::move(merged));
    for (std::size_t i = 1; i < outer.hidden().size(); ++i) hidden.push_back(outer.hidden()[i]);
    return Network(std::move(hidden), outer.final_weights(), outer.final_bias());
}

double lipschitz_bound(const Network& net) {
    double bound = spectral_norm_upper(net.final_weights());
    for (const auto& l : net.hidden())
        bound *= spectral_norm_upper(l.weights) * l.activation.lipschitz();
    return bound;
}

namespace {

nlohmann::json matrix_to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw std::runtime_error("parse error at " + where + ": expected non-empty matrix");
    std::vector<Vec> rows;
    std::size_t cols = 0;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& row = j[i];
        if (!row.is_array())
            throw std::runtime_error("parse error at " + where + " row " + std::to_string(i) +
                                     ": expected array");
        Vec r;
        for (const auto& v : row) {
            if (!v.is_number())
                throw std::runtime_error("parse error at " + where + " row " + std::to_string(i) +
                                         ": expected number");
            r.push_back(v.get<double>());
        }
        if (i == 0)
            cols = r.size();
        else if (r.size() != cols)
            throw std::runtime_error("parse error at " + where + " row " + std::to_string(i) +
                                     ": ragged matrix");
        rows.push_back(std::move(r));
    }
    return Mat::from_rows(rows);
}

Vec vector_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array())
        throw std::runtime_error("parse error at " + where + ": expected array");
    Vec v;
    for (const auto& x : j) {
        if (!x.is_number())
            throw std::runtime_error("parse error at " + where + ": expected number");
        v.push_back(x.get<double>());
    }
    return v;
}

}  // namespace

std::string serialize(const Network& net) {
    nlohmann::json doc;
    doc["layers"] = nlohmann::json::array();
    for (const auto& l : net.hidden()) {
        nlohmann::json jl;
        jl["w"] = matrix_to_json(l.weights);
        jl["b"] = l.bias;
        jl["act"] = l.activation.name();
        if (l.activation.kind == Activation::Kind::leaky_relu) jl["alpha"] = l.activation.alpha;
        doc["layers"].push_back(std::move(jl));
    }
    doc["final_w"] = matrix_to_json(net.final_weights());
    doc["final_b"] = net.final_bias();
    return doc.dump(2);
}

Network deserialize(const std::string& bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("network JSON parse error: ") + e.what());
    }
    if (!doc.contains("layers") || !doc.contains("final_w") || !doc.contains("final_b"))
        throw std::runtime_error("parse error: missing layers/final_w/final_b");
    std::vector<Layer> hidden;
    std::size_t idx = 0;
    for (const auto& jl : doc["layers"]) {
        const std::string where = "layers[" + std::to_string(idx) + "]";
        Layer l;
        if (!jl.contains("w") || !jl.contains("b") || !jl.contains("act"))
            throw std::runtime_error("parse error at " + where + ": missing w/b/act");
        l.weights = matrix_from_json(jl["w"], where + ".w");
        l.bias = vector_from_json(jl["b"], where + ".b");
        l.activation = Activation::parse(jl["act"].get<std::string>(),
                                         jl.value("alpha", 0.01));
        if (l.bias.size() != l.weights.rows)
            throw std::runtime_error("parse error at " + where + ": bias/weight shape mismatch");
        hidden.push_back(std::move(l));
        ++idx;
    }
    Mat fw = matrix_from_json(doc["final_w"], "final_w");
    Vec fb = vector_from_json(doc["final_b"], "final_b");
    try {
        return Network(std::move(hidden), std::move(fw), std::move(fb));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("parse error: ") + e.what());
    }
}

}  // namespace narrowcap
