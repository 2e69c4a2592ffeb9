#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "radalt/dataset.hpp"
#include "radalt/nn/adam.hpp"
#include "radalt/nn/model.hpp"
#include "radalt/signal.hpp"

namespace radalt::nn {

/// Per-channel normalization factors, stored as the multipliers that were
/// applied to bring each channel to unit peak (peak 2.0 -> scale 0.5).
struct NormScales {
    float i_scale = 1.0f;
    float q_scale = 1.0f;
};

/// Splits a complex record into a (2, N) real matrix: row 0 = I, row 1 = Q.
Mat<float> channels_from_signal(const ComplexSignal& sig);

/// Rescales each row of `x` in place to unit peak magnitude and returns the
/// multipliers used. Throws DegenerateInputError if a channel is all zero.
NormScales normalize_channels(Mat<float>& x);

/// Undoes normalize_channels: divides each row by its stored multiplier.
void denormalize_channels(Mat<float>& x, const NormScales& scales);

struct TrainConfig {
    double lr = 1e-3;
    std::size_t batch_size = 128;
    std::size_t epochs = 150;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 1;
};

struct TrainHistory {
    double initial_val_loss = 0.0;  // validation loss of the untrained model
    std::vector<double> train_loss;  // one entry per epoch
    std::vector<double> val_loss;    // one entry per epoch
};

struct TrainResult {
    ModelParams model;  // weights from the best-validation epoch
    std::size_t best_epoch = 0;
    TrainHistory history;
};

/// One training example already normalized: input = dirty channels, target =
/// clean channels scaled by the dirty record's normalization factors.
struct TrainPair {
    Mat<float> input;
    Mat<float> target;
};

TrainPair make_train_pair(const ComplexSignal& clean, const ComplexSignal& dirty);

/// Builds one normalized pair per example of a loaded dataset split.
std::vector<TrainPair> pairs_from_split(const SplitData& split);

/// Trains on explicit example pairs. Validation runs after every epoch; the
/// returned model carries the weights with the lowest validation loss.
TrainResult train_pairs(const ModelConfig& model_cfg, const TrainConfig& cfg,
                        const std::vector<TrainPair>& train,
                        const std::vector<TrainPair>& val);

/// Continues training from previously saved weights for cfg.epochs more
/// epochs. Epoch numbering starts at epoch_offset: the shuffle/dropout
/// randomness of global epoch k is identical whether k is reached in one
/// run or across a checkpoint boundary, and best_epoch in the result is
/// numbered globally (epoch_offset + local index). The returned history
/// covers only the resumed epochs; initial_val_loss is the validation
/// loss of the loaded weights. Optimizer moments restart fresh because
/// checkpoints store weights only.
TrainResult resume_pairs(const ModelParams& init, const TrainConfig& cfg,
                         const std::vector<TrainPair>& train,
                         const std::vector<TrainPair>& val,
                         std::size_t epoch_offset);

/// Convenience wrapper building pairs from dataset splits.
TrainResult train(const ModelConfig& model_cfg, const TrainConfig& cfg,
                  const SplitData& train_split, const SplitData& val_split);

/// Runs the autoencoder on one record: normalizes, reconstructs, undoes the
/// normalization. Output has the same length and sample rate as the input.
ComplexSignal denoise(const ModelParams& model, const ComplexSignal& rx);

}  // namespace radalt::nn
