#include "radalt/nn/model.hpp"

namespace radalt::nn {

Variant variant_from_string(const std::string& name) {
    if (name == "literal") return Variant::literal;
    if (name == "parameter_matched") return Variant::parameter_matched;
    throw InvalidConfigError("unknown model variant '" + name + "'");
}

const char* variant_name(Variant v) {
    return v == Variant::literal ? "literal" : "parameter_matched";
}

Geometry compute_geometry(const ModelConfig& cfg) {
    if (cfg.input_len < 16) throw InvalidConfigError("model: input_len must be >= 16");
    if (cfg.latent_dim < 1) throw InvalidConfigError("model: latent_dim must be >= 1");
    if (!(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0))
        throw InvalidConfigError("model: dropout_rate must be in [0, 1)");
    for (std::size_t c : cfg.enc_channels)
        if (c < 1) throw InvalidConfigError("model: encoder channels must be >= 1");

    Geometry g;
    g.input_len = cfg.input_len;
    g.latent_dim = cfg.latent_dim;
    g.dec_len0 = cfg.dec_len0 != 0
                     ? cfg.dec_len0
                     : static_cast<std::size_t>(std::llround(
                           117.0 * static_cast<double>(cfg.input_len) / 7500.0));
    if (g.dec_len0 < 1)
        throw InvalidConfigError("model: derived decoder seed length is zero; set dec_len0");

    const bool strided = cfg.variant == Variant::parameter_matched;
    const std::array<std::size_t, 3> enc_strides = strided ? std::array<std::size_t, 3>{3, 5, 5}
                                                           : std::array<std::size_t, 3>{1, 1, 1};
    const std::array<std::size_t, 3> dilations{1, 2, 4};

    std::size_t len = cfg.input_len;
    std::size_t c_in = 2;
    for (int i = 0; i < 3; ++i) {
        ConvSpec& s = g.enc[i];
        s.c_in = c_in;
        s.c_out = cfg.enc_channels[static_cast<std::size_t>(i)];
        s.kernel = 3;
        s.stride = enc_strides[static_cast<std::size_t>(i)];
        s.padding = 2;
        s.dilation = dilations[static_cast<std::size_t>(i)];
        s.l_in = len;
        s.l_out = conv_out_len(s.l_in, s.kernel, s.stride, s.padding, s.dilation);
        len = s.l_out;
        c_in = s.c_out;
    }
    g.flatten_len = g.enc[2].c_out * g.enc[2].l_out;

    // Decoder mirrors the encoder channel ladder back out to two channels.
    const std::array<std::size_t, 3> dec_c_in{cfg.enc_channels[2], cfg.enc_channels[1],
                                              cfg.enc_channels[0]};
    const std::array<std::size_t, 3> dec_c_out{cfg.enc_channels[1], cfg.enc_channels[0], 2};
    const std::array<std::size_t, 3> dec_kernel{3, 6, 6};
    const std::array<std::size_t, 3> dec_stride{3, 5, 5};

    len = g.dec_len0;
    for (int i = 0; i < 3; ++i) {
        ConvSpec& s = g.dec[i];
        s.c_in = dec_c_in[static_cast<std::size_t>(i)];
        s.c_out = dec_c_out[static_cast<std::size_t>(i)];
        s.kernel = dec_kernel[static_cast<std::size_t>(i)];
        s.stride = dec_stride[static_cast<std::size_t>(i)];
        s.padding = 1;
        s.dilation = 1;
        s.l_in = len;
        s.l_out = tconv_out_len(s.l_in, s.kernel, s.stride, s.padding);
        len = s.l_out;
    }
    g.interp_in = g.dec[2].l_out;
    if (g.interp_in < g.input_len)
        throw InvalidConfigError("model: decoder output (" + std::to_string(g.interp_in) +
                                 ") shorter than input_len; increase dec_len0");
    return g;
}

namespace detail {

void init_fan_ins(const Geometry& g, std::array<std::size_t, 16>& fan) {
    std::size_t slot = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t f = g.enc[i].c_in * g.enc[i].kernel;
        fan[slot++] = f;  // weights
        fan[slot++] = f;  // bias
    }
    fan[slot++] = g.flatten_len;
    fan[slot++] = g.flatten_len;
    fan[slot++] = g.latent_dim;
    fan[slot++] = g.latent_dim;
    for (int i = 0; i < 3; ++i) {
        const std::size_t f = g.dec[i].c_out * g.dec[i].kernel;
        fan[slot++] = f;
        fan[slot++] = f;
    }
}

}  // namespace detail

}  // namespace radalt::nn
