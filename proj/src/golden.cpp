#include "convsim/golden.hpp"

#include <algorithm>
#include <string>

namespace convsim {

std::vector<std::int32_t> conv2d_channel(std::span<const std::int8_t> plane,
                                         int height, int width,
                                         std::span<const std::int8_t, 9> kernel) {
    if (height < 3 || width < 3)
        throw ConfigError("conv2d_channel: H and W must be >= 3");
    if (plane.size() != static_cast<std::size_t>(height) * width)
        throw ConfigError("conv2d_channel: plane size mismatch");

    const int out_h = height - 2;
    const int out_w = width - 2;
    std::vector<std::int32_t> out(static_cast<std::size_t>(out_h) * out_w);
    for (int i = 0; i < out_h; ++i) {
        for (int j = 0; j < out_w; ++j) {
            std::int32_t acc = 0;
            for (int m = 0; m < 3; ++m) {
                for (int n = 0; n < 3; ++n) {
                    acc += static_cast<std::int32_t>(plane[(i + m) * width + (j + n)]) *
                           static_cast<std::int32_t>(kernel[m * 3 + n]);
                }
            }
            out[static_cast<std::size_t>(i) * out_w + j] = acc;
        }
    }
    return out;
}

PsumTensor3D conv2d_layer(const QuantTensor3D& image,
                          const KernelTensor4D& kernels,
                          const BiasVector& bias) {
    if (image.channels() != kernels.channels())
        throw ConfigError("conv2d_layer: image C = " +
                          std::to_string(image.channels()) +
                          " does not match kernel C = " +
                          std::to_string(kernels.channels()));
    if (bias.size() != kernels.kernels())
        throw ConfigError("conv2d_layer: bias length " +
                          std::to_string(bias.size()) +
                          " does not match K = " +
                          std::to_string(kernels.kernels()));
    if (image.height() < 3 || image.width() < 3)
        throw ConfigError("conv2d_layer: H and W must be >= 3");

    const int out_h = image.height() - 2;
    const int out_w = image.width() - 2;
    PsumTensor3D out(out_h, out_w, kernels.kernels());
    for (int k = 0; k < kernels.kernels(); ++k) {
        for (int i = 0; i < out_h; ++i)
            for (int j = 0; j < out_w; ++j)
                out.at(k, i, j) = bias.at(k);
        for (int c = 0; c < image.channels(); ++c) {
            const std::int8_t* plane = image.plane(c);
            const std::int8_t* w = kernels.plane(k, c);
            for (int i = 0; i < out_h; ++i) {
                for (int j = 0; j < out_w; ++j) {
                    std::int32_t acc = 0;
                    for (int m = 0; m < 3; ++m)
                        for (int n = 0; n < 3; ++n)
                            acc += static_cast<std::int32_t>(
                                       plane[(i + m) * image.width() + (j + n)]) *
                                   static_cast<std::int32_t>(w[m * 3 + n]);
                    out.at(k, i, j) += acc;
                }
            }
        }
    }
    return out;
}

QuantTensor3D requantize(const PsumTensor3D& psums, int shift) {
    if (shift < 0 || shift > 31)
        throw ConfigError("requantize: shift must lie in [0, 31]");
    QuantTensor3D out(psums.out_height(), psums.out_width(), psums.kernels());
    const auto& src = psums.data();
    auto& dst = out.data();
    for (std::size_t idx = 0; idx < src.size(); ++idx) {
        const std::int32_t shifted = src[idx] >> shift;  // arithmetic shift
        dst[idx] = static_cast<std::int8_t>(std::clamp(shifted, -128, 127));
    }
    return out;
}

std::uint64_t psum_count(const LayerSpec& spec) {
    return static_cast<std::uint64_t>(spec.out_height()) * spec.out_width() *
           spec.kernels * spec.channels;
}

}  // namespace convsim
