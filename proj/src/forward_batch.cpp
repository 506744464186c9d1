#include "narrowcap/network.hpp"

#include <cmath>

// Kept in its own translation unit: this file is compiled with fast-math so
// the activation loops vectorize (libmvec); the exact scalar paths in
// network.cpp are not.

namespace narrowcap {

void Network::forward_batch(const double* pts, std::size_t count, double* out) const {
    const std::size_t in_d = input_dim();
    std::size_t maxw = std::max(in_d, final_w_.rows);
    for (const auto& l : hidden_) maxw = std::max(maxw, l.out_dim());
    std::vector<double> buf_a(maxw * count), buf_b(maxw * count);

    // column-major: value of unit i for point p at [i * count + p]
    for (std::size_t i = 0; i < in_d; ++i)
        for (std::size_t p = 0; p < count; ++p) buf_a[i * count + p] = pts[p * in_d + i];

    double* cur = buf_a.data();
    double* nxt = buf_b.data();
    auto affine_into = [&](const Mat& w, const Vec& b) {
        for (std::size_t i = 0; i < w.rows; ++i) {
            double* row_out = nxt + i * count;
            const double bi = b[i];
            for (std::size_t p = 0; p < count; ++p) row_out[p] = bi;
            for (std::size_t j = 0; j < w.cols; ++j) {
                const double wij = w(i, j);
                if (wij == 0.0) continue;
                const double* row_in = cur + j * count;
                for (std::size_t p = 0; p < count; ++p) row_out[p] += wij * row_in[p];
            }
        }
    };
    for (const auto& l : hidden_) {
        affine_into(l.weights, l.bias);
        const std::size_t od = l.out_dim();
        double* z = nxt;
        switch (l.activation.kind) {
            case Activation::Kind::relu:
                for (std::size_t i = 0; i < od * count; ++i) z[i] = z[i] > 0.0 ? z[i] : 0.0;
                break;
            case Activation::Kind::leaky_relu: {
                const double a = l.activation.alpha;
                for (std::size_t i = 0; i < od * count; ++i) z[i] = z[i] >= 0.0 ? z[i] : a * z[i];
                break;
            }
            case Activation::Kind::cosine:
                for (std::size_t i = 0; i < od * count; ++i) z[i] = std::cos(z[i]);
                break;
            case Activation::Kind::tanh:
                for (std::size_t i = 0; i < od * count; ++i) z[i] = std::tanh(z[i]);
                break;
            case Activation::Kind::sigmoid:
                for (std::size_t i = 0; i < od * count; ++i) z[i] = 1.0 / (1.0 + std::exp(-z[i]));
                break;
            case Activation::Kind::identity:
                break;
            case Activation::Kind::step:
                for (std::size_t i = 0; i < od * count; ++i) z[i] = z[i] >= 0.0 ? 1.0 : 0.0;
                break;
        }
        std::swap(cur, nxt);
    }
    affine_into(final_w_, final_b_);
    for (std::size_t p = 0; p < count; ++p)
        for (std::size_t i = 0; i < final_w_.rows; ++i)
            out[p * final_w_.rows + i] = nxt[i * count + p];
}

}  // namespace narrowcap
