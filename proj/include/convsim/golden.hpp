#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "convsim/tensor.hpp"
#include "convsim/types.hpp"

namespace convsim {

// ---------------------------------------------------------------------------
// Reference convolution. Everything here is exact signed integer arithmetic;
// the simulator's banked/pipelined datapath is checked against these
// functions element for element.
// ---------------------------------------------------------------------------

// Valid 3x3 convolution of a single H x W plane against one 3x3 kernel,
// stride 1, no padding:
//
//   out(i,j) = sum_{m,n in [0,3)} plane(i+m, j+n) * kernel(m,n)
//
// Returns (H-2)*(W-2) values, row-major. Throws ConfigError if H or W < 3.
std::vector<std::int32_t> conv2d_channel(std::span<const std::int8_t> plane,
                                         int height, int width,
                                         std::span<const std::int8_t, 9> kernel);

// Full layer:  out(k,i,j) = bias[k] + sum_c conv2d_channel(image plane c,
// kernel k plane c)(i,j). Throws ConfigError on channel or bias-length
// mismatch.
PsumTensor3D conv2d_layer(const QuantTensor3D& image,
                          const KernelTensor4D& kernels,
                          const BiasVector& bias);

// Shift-saturate requantization: clamp(psum >> shift, -128, 127) per element
// (arithmetic shift). shift must lie in [0, 31].
QuantTensor3D requantize(const PsumTensor3D& psums, int shift);

// Number of partial sums a layer produces: one per (output pixel, kernel,
// channel) triple, i.e. (H-2)*(W-2)*K*C.
std::uint64_t psum_count(const LayerSpec& spec);

}  // namespace convsim
