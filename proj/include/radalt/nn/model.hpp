#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "radalt/errors.hpp"
#include "radalt/nn/layers.hpp"

// Denoising autoencoder over two-channel IQ records: a dilated-convolution
// encoder, a fully connected bottleneck, a mirrored transpose-convolution
// decoder, and a final linear resample back to the input length.

namespace radalt::nn {

enum class Variant { literal, parameter_matched };

struct ModelConfig {
    std::size_t input_len = 7500;
    std::size_t latent_dim = 128;
    std::array<std::size_t, 3> enc_channels{128, 64, 32};
    double dropout_rate = 0.1;
    Variant variant = Variant::parameter_matched;
    // Decoder seed length; 0 derives round(117 * input_len / 7500).
    std::size_t dec_len0 = 0;
};

Variant variant_from_string(const std::string& name);
const char* variant_name(Variant v);

struct Geometry {
    std::array<ConvSpec, 3> enc;
    std::array<ConvSpec, 3> dec;
    std::size_t flatten_len = 0;  // enc[2].c_out * enc[2].l_out
    std::size_t latent_dim = 0;
    std::size_t dec_len0 = 0;
    std::size_t interp_in = 0;  // dec[2].l_out, resampled to input_len
    std::size_t input_len = 0;
};

/// Computes every stage length from the layer formulas; throws
/// InvalidConfigError when the decoder cannot reach the input length.
Geometry compute_geometry(const ModelConfig& cfg);

/// All learnable tensors, in checkpoint order. Biases are (n, 1) columns
/// so every tensor shares one matrix type and optimizers can walk them
/// uniformly. Convolution weights are (c_out, c_in*K);
/// transpose-convolution weights are (c_in, c_out*K); linear weights are
/// (rows_out, cols_in).
template <typename T>
struct TensorSet {
    std::array<Mat<T>, 3> enc_w;
    std::array<Mat<T>, 3> enc_b;
    Mat<T> fc1_w;
    Mat<T> fc1_b;
    Mat<T> fc2_w;
    Mat<T> fc2_b;
    std::array<Mat<T>, 3> dec_w;
    std::array<Mat<T>, 3> dec_b;
};

/// Visits every tensor as a flat (data, size) pair, in checkpoint order.
template <typename T, typename F>
void visit_tensors(TensorSet<T>& set, F&& fn) {
    for (int i = 0; i < 3; ++i) {
        fn(set.enc_w[i]);
        fn(set.enc_b[i]);
    }
    fn(set.fc1_w);
    fn(set.fc1_b);
    fn(set.fc2_w);
    fn(set.fc2_b);
    for (int i = 0; i < 3; ++i) {
        fn(set.dec_w[i]);
        fn(set.dec_b[i]);
    }
}

template <typename T, typename F>
void visit_tensors(const TensorSet<T>& set, F&& fn) {
    visit_tensors(const_cast<TensorSet<T>&>(set), [&](auto& m) { fn(std::as_const(m)); });
}

/// Pointers to the 16 tensors in checkpoint order, for zipped iteration.
template <typename T>
std::array<Mat<T>*, 16> tensor_ptrs(TensorSet<T>& set) {
    std::array<Mat<T>*, 16> out{};
    std::size_t i = 0;
    visit_tensors(set, [&](Mat<T>& m) { out[i++] = &m; });
    return out;
}

template <typename T>
std::array<const Mat<T>*, 16> tensor_ptrs(const TensorSet<T>& set) {
    std::array<const Mat<T>*, 16> out{};
    std::size_t i = 0;
    visit_tensors(set, [&](const Mat<T>& m) { out[i++] = &m; });
    return out;
}

template <typename T>
struct ModelParamsT {
    ModelConfig config;
    Geometry geometry;
    TensorSet<T> params;

    std::size_t parameter_count() const {
        std::size_t n = 0;
        visit_tensors(params, [&](const auto& m) { n += static_cast<std::size_t>(m.size()); });
        return n;
    }
};

using ModelParams = ModelParamsT<float>;

namespace detail {

template <typename T>
void allocate_tensors(const Geometry& g, TensorSet<T>& set) {
    for (int i = 0; i < 3; ++i) {
        set.enc_w[i].setZero(static_cast<Eigen::Index>(g.enc[i].c_out),
                             static_cast<Eigen::Index>(g.enc[i].c_in * g.enc[i].kernel));
        set.enc_b[i].setZero(static_cast<Eigen::Index>(g.enc[i].c_out), 1);
    }
    set.fc1_w.setZero(static_cast<Eigen::Index>(g.latent_dim),
                      static_cast<Eigen::Index>(g.flatten_len));
    set.fc1_b.setZero(static_cast<Eigen::Index>(g.latent_dim), 1);
    set.fc2_w.setZero(static_cast<Eigen::Index>(g.dec[0].c_in * g.dec_len0),
                      static_cast<Eigen::Index>(g.latent_dim));
    set.fc2_b.setZero(static_cast<Eigen::Index>(g.dec[0].c_in * g.dec_len0), 1);
    for (int i = 0; i < 3; ++i) {
        set.dec_w[i].setZero(static_cast<Eigen::Index>(g.dec[i].c_in),
                             static_cast<Eigen::Index>(g.dec[i].c_out * g.dec[i].kernel));
        set.dec_b[i].setZero(static_cast<Eigen::Index>(g.dec[i].c_out), 1);
    }
}

/// fan_in per tensor, matching each layer's contraction width: c_in*K for
/// convolutions, c_out*K for transpose convolutions, input width for the
/// linear layers, and the owning layer's fan-in for biases.
void init_fan_ins(const Geometry& g, std::array<std::size_t, 16>& fan);

}  // namespace detail

/// Builds a model with geometry from cfg and weights drawn uniformly in
/// +-1/sqrt(fan_in), reproducibly from the seed.
template <typename T>
ModelParamsT<T> build_model_t(const ModelConfig& cfg, std::uint64_t seed) {
    ModelParamsT<T> model;
    model.config = cfg;
    model.geometry = compute_geometry(cfg);
    detail::allocate_tensors(model.geometry, model.params);

    std::array<std::size_t, 16> fan{};
    detail::init_fan_ins(model.geometry, fan);
    Rng rng(seed);
    std::size_t slot = 0;
    visit_tensors(model.params, [&](auto& m) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan[slot++]));
        auto* data = m.data();
        for (Eigen::Index i = 0; i < m.size(); ++i)
            data[i] = static_cast<T>(rng.uniform(-bound, bound));
    });
    return model;
}

inline ModelParams build_model(const ModelConfig& cfg, std::uint64_t seed) {
    return build_model_t<float>(cfg, seed);
}

/// Per-example buffers; reusable across calls to avoid reallocation.
template <typename T>
struct Workspace {
    std::array<Mat<T>, 3> enc_cols;   // im2col buffers
    std::array<Mat<T>, 3> enc_pre;    // conv outputs before ReLU
    std::array<Mat<T>, 3> enc_act;    // after ReLU (and dropout in training)
    std::array<Mat<T>, 3> drop_mask;  // inverted-dropout masks
    Vec<T> flat;
    Vec<T> latent;
    Vec<T> fc2_out;
    Mat<T> dec_in;                   // reshaped (c, dec_len0)
    std::array<Mat<T>, 3> dec_cols;  // tconv scratch
    std::array<Mat<T>, 3> dec_pre;   // tconv outputs before ReLU
    std::array<Mat<T>, 3> dec_act;   // after ReLU (last stage: == dec_pre)
    Mat<T> out;                      // (2, input_len)

    // Backward scratch
    Mat<T> d_out, d_stage, d_cols, d_stage2;
    Vec<T> d_flat, d_latent, d_fc2;
};

/// Forward pass for one example x of shape (2, input_len); the result is
/// left in ws.out. Dropout is applied only when training is true, drawing
/// masks from rng (required in that case).
template <typename T>
void forward_example(const ModelParamsT<T>& model, const Mat<T>& x, Workspace<T>& ws,
                     bool training = false, Rng* rng = nullptr) {
    const Geometry& g = model.geometry;
    if (static_cast<std::size_t>(x.rows()) != 2 ||
        static_cast<std::size_t>(x.cols()) != g.input_len)
        throw std::invalid_argument("forward: input shape mismatch");
    if (training && model.config.dropout_rate > 0.0 && rng == nullptr)
        throw std::invalid_argument("forward: training mode needs an rng for dropout");

    const Mat<T>* cur = &x;
    for (int i = 0; i < 3; ++i) {
        conv_forward(g.enc[i], model.params.enc_w[i], model.params.enc_b[i], *cur,
                     ws.enc_cols[i], ws.enc_pre[i]);
        relu_forward(ws.enc_pre[i], ws.enc_act[i]);
        if (training && model.config.dropout_rate > 0.0) {
            dropout_mask(ws.drop_mask[i], ws.enc_act[i].rows(), ws.enc_act[i].cols(),
                         model.config.dropout_rate, *rng);
            ws.enc_act[i] = ws.enc_act[i].cwiseProduct(ws.drop_mask[i]);
        }
        cur = &ws.enc_act[i];
    }

    // Channel-major flatten: flat(c*L + j) = act(c, j).
    const auto& last = ws.enc_act[2];
    const auto l3 = static_cast<std::size_t>(last.cols());
    ws.flat.resize(static_cast<Eigen::Index>(g.flatten_len));
    for (std::size_t c = 0; c < g.enc[2].c_out; ++c)
        for (std::size_t j = 0; j < l3; ++j)
            ws.flat(static_cast<Eigen::Index>(c * l3 + j)) =
                last(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j));

    ws.latent.noalias() = model.params.fc1_w * ws.flat;
    ws.latent += model.params.fc1_b.col(0);
    ws.fc2_out.noalias() = model.params.fc2_w * ws.latent;
    ws.fc2_out += model.params.fc2_b.col(0);

    const std::size_t dec_c = g.dec[0].c_in;
    ws.dec_in.resize(static_cast<Eigen::Index>(dec_c), static_cast<Eigen::Index>(g.dec_len0));
    for (std::size_t c = 0; c < dec_c; ++c)
        for (std::size_t j = 0; j < g.dec_len0; ++j)
            ws.dec_in(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) =
                ws.fc2_out(static_cast<Eigen::Index>(c * g.dec_len0 + j));

    cur = &ws.dec_in;
    for (int i = 0; i < 3; ++i) {
        tconv_forward(g.dec[i], model.params.dec_w[i], model.params.dec_b[i], *cur,
                      ws.dec_cols[i], ws.dec_pre[i]);
        if (i < 2) {
            relu_forward(ws.dec_pre[i], ws.dec_act[i]);
            cur = &ws.dec_act[i];
        } else {
            cur = &ws.dec_pre[i];
        }
    }

    interp_forward(ws.dec_pre[2], g.input_len, ws.out);
}

/// Mean of squared differences over every element of both channels.
template <typename T>
double loss_mse(const Mat<T>& pred, const Mat<T>& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw std::invalid_argument("loss_mse: shape mismatch");
    const auto diff = (pred - target).template cast<double>();
    return diff.array().square().sum() / static_cast<double>(pred.size());
}

/// Forward + reverse pass for one example; gradients are accumulated into
/// `grads` scaled by `grad_scale` (1/batch_size for batch-mean loss).
/// Returns this example's MSE.
template <typename T>
double example_loss_and_grad(const ModelParamsT<T>& model, const Mat<T>& x, const Mat<T>& target,
                             Workspace<T>& ws, TensorSet<T>& grads, double grad_scale,
                             bool training = true, Rng* rng = nullptr) {
    const Geometry& g = model.geometry;
    forward_example(model, x, ws, training, rng);
    const double loss = loss_mse(ws.out, target);

    // d(MSE)/d(out) = 2*(out - target)/size, then the batch-mean scale.
    const T scale = static_cast<T>(2.0 * grad_scale / static_cast<double>(ws.out.size()));
    ws.d_out = scale * (ws.out - target);

    interp_backward<T>(g.interp_in, ws.d_out, ws.d_stage);

    for (int i = 2; i >= 0; --i) {
        if (i < 2) relu_backward(ws.dec_pre[i], ws.d_stage, ws.d_stage);
        const Mat<T>& input = i == 0 ? ws.dec_in : ws.dec_act[i - 1];
        tconv_backward(g.dec[i], model.params.dec_w[i], input, ws.d_stage, ws.d_cols,
                       grads.dec_w[i], grads.dec_b[i], ws.d_stage2);
        ws.d_stage.swap(ws.d_stage2);
    }

    // Reshape adjoint back to the fc2 output vector.
    const std::size_t dec_c = g.dec[0].c_in;
    ws.d_fc2.resize(static_cast<Eigen::Index>(dec_c * g.dec_len0));
    for (std::size_t c = 0; c < dec_c; ++c)
        for (std::size_t j = 0; j < g.dec_len0; ++j)
            ws.d_fc2(static_cast<Eigen::Index>(c * g.dec_len0 + j)) =
                ws.d_stage(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j));

    grads.fc2_w.noalias() += ws.d_fc2 * ws.latent.transpose();
    grads.fc2_b.col(0).noalias() += ws.d_fc2;
    ws.d_latent.noalias() = model.params.fc2_w.transpose() * ws.d_fc2;

    grads.fc1_w.noalias() += ws.d_latent * ws.flat.transpose();
    grads.fc1_b.col(0).noalias() += ws.d_latent;
    ws.d_flat.noalias() = model.params.fc1_w.transpose() * ws.d_latent;

    // Un-flatten.
    const auto l3 = static_cast<std::size_t>(ws.enc_act[2].cols());
    ws.d_stage.resize(static_cast<Eigen::Index>(g.enc[2].c_out), static_cast<Eigen::Index>(l3));
    for (std::size_t c = 0; c < g.enc[2].c_out; ++c)
        for (std::size_t j = 0; j < l3; ++j)
            ws.d_stage(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) =
                ws.d_flat(static_cast<Eigen::Index>(c * l3 + j));

    for (int i = 2; i >= 0; --i) {
        if (training && model.config.dropout_rate > 0.0)
            ws.d_stage = ws.d_stage.cwiseProduct(ws.drop_mask[i]);
        relu_backward(ws.enc_pre[i], ws.d_stage, ws.d_stage);
        conv_backward(g.enc[i], model.params.enc_w[i], ws.enc_cols[i], ws.d_stage,
                      grads.enc_w[i], grads.enc_b[i], ws.d_cols, ws.d_stage2);
        ws.d_stage.swap(ws.d_stage2);
    }

    return loss;
}

}  // namespace radalt::nn
