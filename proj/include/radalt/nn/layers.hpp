#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>

#include "radalt/rng.hpp"

// 1-D neural-network layer primitives over channels-by-length matrices.
// Everything is templated on the scalar type: float for production,
// double for finite-difference verification. Convolutions are lowered to
// GEMM via im2col (and its transpose counterpart) so Eigen does the heavy
// lifting.

namespace radalt::nn {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

struct ConvSpec {
    std::size_t c_in = 0;
    std::size_t c_out = 0;
    std::size_t kernel = 1;
    std::size_t stride = 1;
    std::size_t padding = 0;
    std::size_t dilation = 1;
    std::size_t l_in = 0;
    std::size_t l_out = 0;
};

inline std::size_t conv_out_len(std::size_t l_in, std::size_t kernel, std::size_t stride,
                                std::size_t padding, std::size_t dilation) {
    const auto numer = static_cast<std::ptrdiff_t>(l_in + 2 * padding) -
                       static_cast<std::ptrdiff_t>(dilation * (kernel - 1)) - 1;
    if (numer < 0) throw std::invalid_argument("conv_out_len: kernel does not fit input");
    return static_cast<std::size_t>(numer) / stride + 1;
}

inline std::size_t tconv_out_len(std::size_t l_in, std::size_t kernel, std::size_t stride,
                                 std::size_t padding) {
    const auto len = static_cast<std::ptrdiff_t>((l_in - 1) * stride + kernel) -
                     static_cast<std::ptrdiff_t>(2 * padding);
    if (l_in == 0 || len < 1) throw std::invalid_argument("tconv_out_len: empty output");
    return static_cast<std::size_t>(len);
}

/// cols(ci*K + k, j) = x(ci, j*s + k*d - p), zero outside the input.
template <typename T>
void im2col(const ConvSpec& spec, const Mat<T>& x, Mat<T>& cols) {
    cols.setZero(static_cast<Eigen::Index>(spec.c_in * spec.kernel),
                 static_cast<Eigen::Index>(spec.l_out));
    for (std::size_t j = 0; j < spec.l_out; ++j)
        for (std::size_t k = 0; k < spec.kernel; ++k) {
            const auto src = static_cast<std::ptrdiff_t>(j * spec.stride + k * spec.dilation) -
                             static_cast<std::ptrdiff_t>(spec.padding);
            if (src < 0 || src >= static_cast<std::ptrdiff_t>(spec.l_in)) continue;
            for (std::size_t ci = 0; ci < spec.c_in; ++ci)
                cols(static_cast<Eigen::Index>(ci * spec.kernel + k),
                     static_cast<Eigen::Index>(j)) =
                    x(static_cast<Eigen::Index>(ci), static_cast<Eigen::Index>(src));
        }
}

/// Scatter-add of the im2col adjoint: dx(ci, j*s + k*d - p) += dcols(ci*K + k, j).
template <typename T>
void col2im_add(const ConvSpec& spec, const Mat<T>& dcols, Mat<T>& dx) {
    for (std::size_t j = 0; j < spec.l_out; ++j)
        for (std::size_t k = 0; k < spec.kernel; ++k) {
            const auto dst = static_cast<std::ptrdiff_t>(j * spec.stride + k * spec.dilation) -
                             static_cast<std::ptrdiff_t>(spec.padding);
            if (dst < 0 || dst >= static_cast<std::ptrdiff_t>(spec.l_in)) continue;
            for (std::size_t ci = 0; ci < spec.c_in; ++ci)
                dx(static_cast<Eigen::Index>(ci), static_cast<Eigen::Index>(dst)) +=
                    dcols(static_cast<Eigen::Index>(ci * spec.kernel + k),
                          static_cast<Eigen::Index>(j));
        }
}

/// y = W * im2col(x) + b with W of shape (c_out, c_in*K) and b a (c_out, 1)
/// column. `cols` is a caller-owned scratch buffer reused by the backward
/// pass.
template <typename T>
void conv_forward(const ConvSpec& spec, const Mat<T>& w, const Mat<T>& b, const Mat<T>& x,
                  Mat<T>& cols, Mat<T>& y) {
    im2col(spec, x, cols);
    y.noalias() = w * cols;
    y.colwise() += b.col(0);
}

/// Accumulates dW/db and writes dx given the forward's im2col buffer.
template <typename T>
void conv_backward(const ConvSpec& spec, const Mat<T>& w, const Mat<T>& cols, const Mat<T>& dy,
                   Mat<T>& dw, Mat<T>& db, Mat<T>& dcols, Mat<T>& dx) {
    dw.noalias() += dy * cols.transpose();
    db.col(0).noalias() += dy.rowwise().sum();
    dcols.noalias() = w.transpose() * dy;
    dx.setZero(static_cast<Eigen::Index>(spec.c_in), static_cast<Eigen::Index>(spec.l_in));
    col2im_add(spec, dcols, dx);
}

/// Transpose convolution with W of shape (c_in, c_out*K):
/// y(co, j*s + k - p) += (W^T x)(co*K + k, j), cropped by the padding.
template <typename T>
void tconv_forward(const ConvSpec& spec, const Mat<T>& w, const Mat<T>& b, const Mat<T>& x,
                   Mat<T>& cols, Mat<T>& y) {
    cols.noalias() = w.transpose() * x;
    y.setZero(static_cast<Eigen::Index>(spec.c_out), static_cast<Eigen::Index>(spec.l_out));
    for (std::size_t j = 0; j < spec.l_in; ++j)
        for (std::size_t k = 0; k < spec.kernel; ++k) {
            const auto dst = static_cast<std::ptrdiff_t>(j * spec.stride + k) -
                             static_cast<std::ptrdiff_t>(spec.padding);
            if (dst < 0 || dst >= static_cast<std::ptrdiff_t>(spec.l_out)) continue;
            for (std::size_t co = 0; co < spec.c_out; ++co)
                y(static_cast<Eigen::Index>(co), static_cast<Eigen::Index>(dst)) +=
                    cols(static_cast<Eigen::Index>(co * spec.kernel + k),
                         static_cast<Eigen::Index>(j));
        }
    y.colwise() += b.col(0);
}

template <typename T>
void tconv_backward(const ConvSpec& spec, const Mat<T>& w, const Mat<T>& x, const Mat<T>& dy,
                    Mat<T>& dcols, Mat<T>& dw, Mat<T>& db, Mat<T>& dx) {
    dcols.setZero(static_cast<Eigen::Index>(spec.c_out * spec.kernel),
                  static_cast<Eigen::Index>(spec.l_in));
    for (std::size_t j = 0; j < spec.l_in; ++j)
        for (std::size_t k = 0; k < spec.kernel; ++k) {
            const auto src = static_cast<std::ptrdiff_t>(j * spec.stride + k) -
                             static_cast<std::ptrdiff_t>(spec.padding);
            if (src < 0 || src >= static_cast<std::ptrdiff_t>(spec.l_out)) continue;
            for (std::size_t co = 0; co < spec.c_out; ++co)
                dcols(static_cast<Eigen::Index>(co * spec.kernel + k),
                      static_cast<Eigen::Index>(j)) =
                    dy(static_cast<Eigen::Index>(co), static_cast<Eigen::Index>(src));
        }
    dw.noalias() += x * dcols.transpose();
    db.col(0).noalias() += dy.rowwise().sum();
    dx.noalias() = w * dcols;
}

template <typename T>
void relu_forward(const Mat<T>& x, Mat<T>& y) {
    y = x.cwiseMax(T(0));
}

/// dx = dy where the pre-activation was positive.
template <typename T>
void relu_backward(const Mat<T>& x, const Mat<T>& dy, Mat<T>& dx) {
    dx = (x.array() > T(0)).template cast<T>() * dy.array();
}

/// Inverted dropout: mask elements are 0 or 1/(1-rate) so eval mode needs
/// no rescale. Mask elements are drawn column-major.
template <typename T>
void dropout_mask(Mat<T>& mask, Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
    mask.resize(rows, cols);
    const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
    T* data = mask.data();
    const Eigen::Index n = rows * cols;
    for (Eigen::Index i = 0; i < n; ++i)
        data[i] = rng.uniform() < rate ? T(0) : keep_scale;
}

/// Length-L resampling by align-corners linear interpolation; positions
/// j*(l_in-1)/(l_out-1) are blended from their two bracketing samples.
template <typename T>
void interp_forward(const Mat<T>& x, std::size_t l_out, Mat<T>& y) {
    const auto l_in = static_cast<std::size_t>(x.cols());
    y.resize(x.rows(), static_cast<Eigen::Index>(l_out));
    if (l_out == 1) {
        y.col(0) = x.col(0);
        return;
    }
    const double scale = static_cast<double>(l_in - 1) / static_cast<double>(l_out - 1);
    for (std::size_t j = 0; j < l_out; ++j) {
        const double pos = static_cast<double>(j) * scale;
        const auto i0 = static_cast<std::size_t>(pos);
        const std::size_t i1 = std::min(i0 + 1, l_in - 1);
        const T f = static_cast<T>(pos - static_cast<double>(i0));
        y.col(static_cast<Eigen::Index>(j)) =
            (T(1) - f) * x.col(static_cast<Eigen::Index>(i0)) +
            f * x.col(static_cast<Eigen::Index>(i1));
    }
}

template <typename T>
void interp_backward(std::size_t l_in, const Mat<T>& dy, Mat<T>& dx) {
    const auto l_out = static_cast<std::size_t>(dy.cols());
    dx.setZero(dy.rows(), static_cast<Eigen::Index>(l_in));
    if (l_out == 1) {
        dx.col(0) = dy.col(0);
        return;
    }
    const double scale = static_cast<double>(l_in - 1) / static_cast<double>(l_out - 1);
    for (std::size_t j = 0; j < l_out; ++j) {
        const double pos = static_cast<double>(j) * scale;
        const auto i0 = static_cast<std::size_t>(pos);
        const std::size_t i1 = std::min(i0 + 1, l_in - 1);
        const T f = static_cast<T>(pos - static_cast<double>(i0));
        dx.col(static_cast<Eigen::Index>(i0)) +=
            (T(1) - f) * dy.col(static_cast<Eigen::Index>(j));
        dx.col(static_cast<Eigen::Index>(i1)) += f * dy.col(static_cast<Eigen::Index>(j));
    }
}

}  // namespace radalt::nn
