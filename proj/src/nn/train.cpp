#include "radalt/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "radalt/errors.hpp"
#include "radalt/rng.hpp"

namespace radalt::nn {

Mat<float> channels_from_signal(const ComplexSignal& sig) {
    Mat<float> x(2, static_cast<Eigen::Index>(sig.samples.size()));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const cplx& s = sig.samples[static_cast<std::size_t>(j)];
        x(0, j) = static_cast<float>(s.real());
        x(1, j) = static_cast<float>(s.imag());
    }
    return x;
}

NormScales normalize_channels(Mat<float>& x) {
    if (x.rows() != 2 || x.cols() == 0)
        throw DegenerateInputError("normalize_channels: expected a non-empty (2, N) matrix");
    NormScales scales;
    for (int r = 0; r < 2; ++r) {
        const float peak = x.row(r).cwiseAbs().maxCoeff();
        if (!(peak > 0.0f))
            throw DegenerateInputError("normalize_channels: channel has zero peak amplitude");
        const float s = 1.0f / peak;
        x.row(r) *= s;
        (r == 0 ? scales.i_scale : scales.q_scale) = s;
    }
    return scales;
}

void denormalize_channels(Mat<float>& x, const NormScales& scales) {
    if (x.rows() != 2)
        throw DegenerateInputError("denormalize_channels: expected a (2, N) matrix");
    x.row(0) /= scales.i_scale;
    x.row(1) /= scales.q_scale;
}

TrainPair make_train_pair(const ComplexSignal& clean, const ComplexSignal& dirty) {
    if (clean.samples.size() != dirty.samples.size())
        throw DegenerateInputError("make_train_pair: clean/dirty length mismatch");
    TrainPair pair;
    pair.input = channels_from_signal(dirty);
    const NormScales scales = normalize_channels(pair.input);
    pair.target = channels_from_signal(clean);
    pair.target.row(0) *= scales.i_scale;
    pair.target.row(1) *= scales.q_scale;
    return pair;
}

namespace {

Mat<float> channels_from_rows(const float* row_i, const float* row_q, std::size_t n) {
    Mat<float> x(2, static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        x(0, j) = row_i[j];
        x(1, j) = row_q[j];
    }
    return x;
}

double evaluate_pairs(const ModelParamsT<float>& model, Workspace<float>& ws,
                      const std::vector<TrainPair>& pairs) {
    double total = 0.0;
    for (const auto& p : pairs) {
        forward_example(model, p.input, ws, /*training=*/false, nullptr);
        total += loss_mse(ws.out, p.target);
    }
    return pairs.empty() ? 0.0 : total / static_cast<double>(pairs.size());
}

TrainResult run_epochs(ModelParamsT<float>& model, const TrainConfig& cfg,
                       const std::vector<TrainPair>& train,
                       const std::vector<TrainPair>& val, std::size_t epoch_offset) {
    if (train.empty())
        throw InvalidConfigError("train: training set is empty");
    if (cfg.batch_size == 0 || cfg.epochs == 0)
        throw InvalidConfigError("train: batch_size and epochs must be positive");

    const Geometry& g = model.geometry;

    TensorSet<float> grads;
    detail::allocate_tensors(g, grads);
    AdamState<float> opt = make_adam_state<float>(g);
    const AdamConfig adam_cfg{cfg.lr, cfg.beta1, cfg.beta2, cfg.eps};

    Workspace<float> ws;

    TrainResult result;
    result.model.config = model.config;
    result.model.geometry = g;
    result.history.initial_val_loss = evaluate_pairs(model, ws, val);
    result.history.train_loss.reserve(cfg.epochs);
    result.history.val_loss.reserve(cfg.epochs);

    double best_val = result.history.initial_val_loss;
    bool have_best = false;

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t local = 0; local < cfg.epochs; ++local) {
        const std::size_t epoch = epoch_offset + local;
        Rng shuffle_rng(stable_hash(cfg.seed, 0xE, epoch));
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = shuffle_rng.uniform_int(0, i - 1);
            std::swap(order[i - 1], order[j]);
        }

        double epoch_loss = 0.0;
        std::size_t ordinal = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, order.size());
            const std::size_t batch = end - start;
            zero_tensors(grads);
            const double grad_scale = 1.0 / static_cast<double>(batch);
            for (std::size_t k = start; k < end; ++k, ++ordinal) {
                Rng drop_rng(stable_hash(cfg.seed, 0xD, epoch, ordinal));
                const TrainPair& p = train[order[k]];
                epoch_loss += example_loss_and_grad(model, p.input, p.target, ws, grads,
                                                    grad_scale, /*training=*/true, &drop_rng);
            }
            adam_step(model.params, grads, opt, adam_cfg);
        }
        epoch_loss /= static_cast<double>(train.size());
        if (!std::isfinite(epoch_loss))
            throw TrainingDivergenceError("train: non-finite training loss at epoch " +
                                          std::to_string(epoch));

        const double val_loss = val.empty() ? epoch_loss : evaluate_pairs(model, ws, val);
        if (!std::isfinite(val_loss))
            throw TrainingDivergenceError("train: non-finite validation loss at epoch " +
                                          std::to_string(epoch));
        result.history.train_loss.push_back(epoch_loss);
        result.history.val_loss.push_back(val_loss);

        if (!have_best || val_loss < best_val) {
            best_val = val_loss;
            have_best = true;
            result.model.params = model.params;
            result.best_epoch = epoch;
        }
    }

    if (!have_best) result.model.params = model.params;
    return result;
}

}  // namespace

std::vector<TrainPair> pairs_from_split(const SplitData& split) {
    std::vector<TrainPair> pairs;
    pairs.reserve(split.count);
    for (std::size_t i = 0; i < split.count; ++i) {
        TrainPair pair;
        pair.input = channels_from_rows(split.dirty_i(i), split.dirty_q(i), split.record_len);
        const NormScales scales = normalize_channels(pair.input);
        pair.target = channels_from_rows(split.clean_i(i), split.clean_q(i), split.record_len);
        pair.target.row(0) *= scales.i_scale;
        pair.target.row(1) *= scales.q_scale;
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

TrainResult train_pairs(const ModelConfig& model_cfg, const TrainConfig& cfg,
                        const std::vector<TrainPair>& train,
                        const std::vector<TrainPair>& val) {
    ModelParamsT<float> model = build_model_t<float>(model_cfg, stable_hash(cfg.seed, 0xA));
    return run_epochs(model, cfg, train, val, 0);
}

TrainResult resume_pairs(const ModelParams& init, const TrainConfig& cfg,
                         const std::vector<TrainPair>& train,
                         const std::vector<TrainPair>& val,
                         std::size_t epoch_offset) {
    ModelParamsT<float> model = init;
    return run_epochs(model, cfg, train, val, epoch_offset);
}

TrainResult train(const ModelConfig& model_cfg, const TrainConfig& cfg,
                  const SplitData& train_split, const SplitData& val_split) {
    return train_pairs(model_cfg, cfg, pairs_from_split(train_split),
                       pairs_from_split(val_split));
}

ComplexSignal denoise(const ModelParams& model, const ComplexSignal& rx) {
    if (rx.samples.size() != static_cast<std::size_t>(model.geometry.input_len))
        throw DegenerateInputError(
            "denoise: record length " + std::to_string(rx.samples.size()) +
            " does not match model input length " +
            std::to_string(model.geometry.input_len));
    Mat<float> x = channels_from_signal(rx);
    const NormScales scales = normalize_channels(x);
    Workspace<float> ws;
    forward_example(model, x, ws, /*training=*/false, nullptr);
    Mat<float> y = ws.out;
    denormalize_channels(y, scales);
    ComplexSignal out;
    out.fs = rx.fs;
    out.samples.resize(rx.samples.size());
    for (Eigen::Index j = 0; j < y.cols(); ++j)
        out.samples[static_cast<std::size_t>(j)] =
            cplx(static_cast<double>(y(0, j)), static_cast<double>(y(1, j)));
    return out;
}

}  // namespace radalt::nn
