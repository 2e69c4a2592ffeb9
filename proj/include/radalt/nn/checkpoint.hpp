#pragma once

#include <filesystem>

#include "radalt/nn/model.hpp"

namespace radalt::nn {

/// Writes the model to a versioned binary file: magic, format version, the
/// embedded model configuration as JSON, every tensor as little-endian f32
/// in checkpoint order, and a trailing content checksum.
void save_checkpoint(const std::filesystem::path& path, const ModelParams& model);

/// Reads a checkpoint back, validating magic, version, checksum, and tensor
/// sizes against the embedded configuration. Throws
/// IncompatibleCheckpointError on any mismatch or truncation.
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace radalt::nn
