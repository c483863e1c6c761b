// Forward, adjoint, and tangent kernels for the three layer types the
// decoders are made of: fully-connected, transposed 2-d convolution, ReLU.
// All kernels work on raw row-major buffers; shape checking happens one level
// up (tape / layer stack). Backward kernels accumulate (+=) into their outputs
// so callers can sum contributions over a batch.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "bumplab/core/tensor.hpp"

namespace bumplab {

// ---------------------------------------------------------------------------
// Fully connected: y[i] = sum_j W[i,j] x[j] + b[i],  W is n x m row-major.
// ---------------------------------------------------------------------------

template <class T>
void linear_forward_kernel(const T* x, const T* W, const T* b, T* y, int n, int m) {
    for (int i = 0; i < n; ++i) {
        const T* w = W + static_cast<std::int64_t>(i) * m;
        T acc = b ? b[i] : T(0);
        for (int j = 0; j < m; ++j) acc += w[j] * x[j];
        y[i] = acc;
    }
}

// gx += W^T gy
template <class T>
void linear_backward_input_kernel(const T* gy, const T* W, T* gx, int n, int m) {
    for (int i = 0; i < n; ++i) {
        const T* w = W + static_cast<std::int64_t>(i) * m;
        const T g = gy[i];
        for (int j = 0; j < m; ++j) gx[j] += g * w[j];
    }
}

// gW += gy x^T, gb += gy
template <class T>
void linear_backward_params_kernel(const T* gy, const T* x, T* gW, T* gb, int n, int m) {
    for (int i = 0; i < n; ++i) {
        T* gw = gW + static_cast<std::int64_t>(i) * m;
        const T g = gy[i];
        for (int j = 0; j < m; ++j) gw[j] += g * x[j];
        if (gb) gb[i] += g;
    }
}

// ---------------------------------------------------------------------------
// Transposed 2-d convolution (adjoint of the strided correlation).
// Input  [c_in, h_in, w_in], kernel [c_in, c_out, k, k], output [c_out, h_out, w_out]
// with h_out = (h_in - 1) * stride - 2 * pad + k.
// ---------------------------------------------------------------------------

struct ConvT2d {
    int c_in = 0, c_out = 0, k = 1, stride = 1, pad = 0;
    int h_in = 0, w_in = 0;

    int h_out() const { return (h_in - 1) * stride - 2 * pad + k; }
    int w_out() const { return (w_in - 1) * stride - 2 * pad + k; }

    std::int64_t input_size() const { return static_cast<std::int64_t>(c_in) * h_in * w_in; }
    std::int64_t output_size() const { return static_cast<std::int64_t>(c_out) * h_out() * w_out(); }
    std::int64_t kernel_size() const { return static_cast<std::int64_t>(c_in) * c_out * k * k; }

    void validate() const {
        if (stride < 1 || pad < 0 || k < 1)
            throw ConfigError("conv_transpose_2d: need stride >= 1, pad >= 0, k >= 1");
        if (h_out() <= 0 || w_out() <= 0)
            throw ConfigError("conv_transpose_2d: non-positive output size " +
                              std::to_string(h_out()) + "x" + std::to_string(w_out()) +
                              " (h_in=" + std::to_string(h_in) + " k=" + std::to_string(k) +
                              " stride=" + std::to_string(stride) + " pad=" + std::to_string(pad) + ")");
    }
};

// Scatter form: every input tap contributes a k x k patch of the output.
template <class T>
void convt2d_forward_kernel(const ConvT2d& cv, const T* x, const T* K, const T* b, T* y) {
    const int ho = cv.h_out(), wo = cv.w_out(), kk = cv.k * cv.k;
    if (b) {
        for (int co = 0; co < cv.c_out; ++co)
            std::fill(y + static_cast<std::int64_t>(co) * ho * wo,
                      y + static_cast<std::int64_t>(co + 1) * ho * wo, b[co]);
    } else {
        std::fill(y, y + cv.output_size(), T(0));
    }
    for (int ci = 0; ci < cv.c_in; ++ci) {
        const T* xc = x + static_cast<std::int64_t>(ci) * cv.h_in * cv.w_in;
        for (int co = 0; co < cv.c_out; ++co) {
            const T* ker = K + (static_cast<std::int64_t>(ci) * cv.c_out + co) * kk;
            T* yc = y + static_cast<std::int64_t>(co) * ho * wo;
            for (int ih = 0; ih < cv.h_in; ++ih) {
                const int oh0 = ih * cv.stride - cv.pad;
                const int kh_lo = std::max(0, -oh0);
                const int kh_hi = std::min(cv.k, ho - oh0);
                const T* xrow = xc + static_cast<std::int64_t>(ih) * cv.w_in;
                for (int iw = 0; iw < cv.w_in; ++iw) {
                    const T v = xrow[iw];
                    if (v == T(0)) continue;
                    const int ow0 = iw * cv.stride - cv.pad;
                    const int kw_lo = std::max(0, -ow0);
                    const int kw_hi = std::min(cv.k, wo - ow0);
                    for (int kh = kh_lo; kh < kh_hi; ++kh) {
                        T* yrow = yc + static_cast<std::int64_t>(oh0 + kh) * wo + ow0;
                        const T* krow = ker + kh * cv.k;
                        for (int kw = kw_lo; kw < kw_hi; ++kw) yrow[kw] += v * krow[kw];
                    }
                }
            }
        }
    }
}

// gx += correlation(gy, K): gather form, the true adjoint of the forward scatter.
template <class T>
void convt2d_backward_input_kernel(const ConvT2d& cv, const T* gy, const T* K, T* gx) {
    const int ho = cv.h_out(), wo = cv.w_out(), kk = cv.k * cv.k;
    for (int ci = 0; ci < cv.c_in; ++ci) {
        T* gxc = gx + static_cast<std::int64_t>(ci) * cv.h_in * cv.w_in;
        for (int co = 0; co < cv.c_out; ++co) {
            const T* ker = K + (static_cast<std::int64_t>(ci) * cv.c_out + co) * kk;
            const T* gyc = gy + static_cast<std::int64_t>(co) * ho * wo;
            for (int ih = 0; ih < cv.h_in; ++ih) {
                const int oh0 = ih * cv.stride - cv.pad;
                const int kh_lo = std::max(0, -oh0);
                const int kh_hi = std::min(cv.k, ho - oh0);
                T* gxrow = gxc + static_cast<std::int64_t>(ih) * cv.w_in;
                for (int iw = 0; iw < cv.w_in; ++iw) {
                    const int ow0 = iw * cv.stride - cv.pad;
                    const int kw_lo = std::max(0, -ow0);
                    const int kw_hi = std::min(cv.k, wo - ow0);
                    T acc = T(0);
                    for (int kh = kh_lo; kh < kh_hi; ++kh) {
                        const T* gyrow = gyc + static_cast<std::int64_t>(oh0 + kh) * wo + ow0;
                        const T* krow = ker + kh * cv.k;
                        for (int kw = kw_lo; kw < kw_hi; ++kw) acc += gyrow[kw] * krow[kw];
                    }
                    gxrow[iw] += acc;
                }
            }
        }
    }
}

// gK += outer(x, gy) over sliding windows; gb += per-channel sums of gy.
template <class T>
void convt2d_backward_params_kernel(const ConvT2d& cv, const T* gy, const T* x, T* gK, T* gb) {
    const int ho = cv.h_out(), wo = cv.w_out(), kk = cv.k * cv.k;
    if (gb) {
        for (int co = 0; co < cv.c_out; ++co) {
            const T* gyc = gy + static_cast<std::int64_t>(co) * ho * wo;
            T acc = T(0);
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(ho) * wo; ++i) acc += gyc[i];
            gb[co] += acc;
        }
    }
    // Local k*k accumulator keeps the inner loops in registers.
    T patch[64];
    for (int ci = 0; ci < cv.c_in; ++ci) {
        const T* xc = x + static_cast<std::int64_t>(ci) * cv.h_in * cv.w_in;
        for (int co = 0; co < cv.c_out; ++co) {
            const T* gyc = gy + static_cast<std::int64_t>(co) * ho * wo;
            std::fill(patch, patch + kk, T(0));
            for (int ih = 0; ih < cv.h_in; ++ih) {
                const int oh0 = ih * cv.stride - cv.pad;
                const int kh_lo = std::max(0, -oh0);
                const int kh_hi = std::min(cv.k, ho - oh0);
                const T* xrow = xc + static_cast<std::int64_t>(ih) * cv.w_in;
                for (int iw = 0; iw < cv.w_in; ++iw) {
                    const T v = xrow[iw];
                    if (v == T(0)) continue;
                    const int ow0 = iw * cv.stride - cv.pad;
                    const int kw_lo = std::max(0, -ow0);
                    const int kw_hi = std::min(cv.k, wo - ow0);
                    for (int kh = kh_lo; kh < kh_hi; ++kh) {
                        const T* gyrow = gyc + static_cast<std::int64_t>(oh0 + kh) * wo + ow0;
                        T* prow = patch + kh * cv.k;
                        for (int kw = kw_lo; kw < kw_hi; ++kw) prow[kw] += v * gyrow[kw];
                    }
                }
            }
            T* gker = gK + (static_cast<std::int64_t>(ci) * cv.c_out + co) * kk;
            for (int i = 0; i < kk; ++i) gker[i] += patch[i];
        }
    }
}

// ---------------------------------------------------------------------------
// ReLU. Subgradient at exactly 0 is 0.
// ---------------------------------------------------------------------------

template <class T>
void relu_forward_kernel(const T* x, T* y, std::int64_t n) {
    for (std::int64_t i = 0; i < n; ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
}

template <class T>
void relu_backward_kernel(const T* x, const T* gy, T* gx, std::int64_t n) {
    for (std::int64_t i = 0; i < n; ++i)
        if (x[i] > T(0)) gx[i] += gy[i];
}

}  // namespace bumplab
