#include "radalt/nn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "radalt/errors.hpp"
#include "radalt/rng.hpp"
#include "radalt/serialize.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace radalt::nn {

namespace {

constexpr char kMagic[8] = {'R', 'A', 'D', 'A', 'L', 'T', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void append_bytes(std::vector<char>& buf, const void* data, std::size_t n) {
    const char* p = static_cast<const char*>(data);
    buf.insert(buf.end(), p, p + n);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams& model) {
    const json cfg_json = model.config;
    const std::string cfg_str = cfg_json.dump();
    const auto cfg_len = static_cast<std::uint32_t>(cfg_str.size());

    std::vector<char> buf;
    append_bytes(buf, kMagic, sizeof(kMagic));
    append_bytes(buf, &kVersion, sizeof(kVersion));
    append_bytes(buf, &cfg_len, sizeof(cfg_len));
    append_bytes(buf, cfg_str.data(), cfg_str.size());
    visit_tensors(model.params, [&](const Mat<float>& m) {
        append_bytes(buf, m.data(), static_cast<std::size_t>(m.size()) * sizeof(float));
    });
    const std::uint64_t checksum = fnv1a64(buf.data(), buf.size());
    append_bytes(buf, &checksum, sizeof(checksum));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("failed writing checkpoint: " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IncompatibleCheckpointError("cannot open checkpoint: " + path.string());
    std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());

    constexpr std::size_t kHeaderLen = sizeof(kMagic) + sizeof(kVersion) + sizeof(std::uint32_t);
    if (buf.size() < kHeaderLen + sizeof(std::uint64_t))
        throw IncompatibleCheckpointError("checkpoint truncated: " + path.string());

    if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
        throw IncompatibleCheckpointError("bad checkpoint magic: " + path.string());
    std::uint32_t version = 0;
    std::memcpy(&version, buf.data() + sizeof(kMagic), sizeof(version));
    if (version != kVersion)
        throw IncompatibleCheckpointError("unsupported checkpoint version " +
                                          std::to_string(version));

    const std::size_t body_len = buf.size() - sizeof(std::uint64_t);
    std::uint64_t stored_sum = 0;
    std::memcpy(&stored_sum, buf.data() + body_len, sizeof(stored_sum));
    if (fnv1a64(buf.data(), body_len) != stored_sum)
        throw IncompatibleCheckpointError("checkpoint checksum mismatch: " + path.string());

    std::uint32_t cfg_len = 0;
    std::memcpy(&cfg_len, buf.data() + sizeof(kMagic) + sizeof(kVersion), sizeof(cfg_len));
    if (kHeaderLen + cfg_len > body_len)
        throw IncompatibleCheckpointError("checkpoint config length out of range");

    ModelParams model;
    try {
        const json cfg_json =
            json::parse(buf.begin() + static_cast<std::ptrdiff_t>(kHeaderLen),
                        buf.begin() + static_cast<std::ptrdiff_t>(kHeaderLen + cfg_len));
        model.config = cfg_json.get<ModelConfig>();
        model.geometry = compute_geometry(model.config);
    } catch (const IncompatibleCheckpointError&) {
        throw;
    } catch (const std::exception& e) {
        throw IncompatibleCheckpointError(std::string("invalid checkpoint config: ") + e.what());
    }
    detail::allocate_tensors(model.geometry, model.params);

    std::size_t offset = kHeaderLen + cfg_len;
    visit_tensors(model.params, [&](Mat<float>& m) {
        const std::size_t n = static_cast<std::size_t>(m.size()) * sizeof(float);
        if (offset + n > body_len)
            throw IncompatibleCheckpointError("checkpoint tensor data truncated");
        std::memcpy(m.data(), buf.data() + offset, n);
        offset += n;
    });
    if (offset != body_len)
        throw IncompatibleCheckpointError("checkpoint has trailing tensor data");
    return model;
}

}  // namespace radalt::nn
