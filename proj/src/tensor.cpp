#include "convsim/tensor.hpp"

#include <string>

namespace convsim {

namespace {

void check_positive(int value, const char* what) {
    if (value <= 0)
        throw ConfigError(std::string(what) + " must be positive");
}

void check_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw ConfigError(std::string(what) + " data size mismatch: got " +
                          std::to_string(got) + ", expected " +
                          std::to_string(want));
}

}  // namespace

QuantTensor3D::QuantTensor3D(int height, int width, int channels)
    : height_(height), width_(width), channels_(channels) {
    check_positive(height, "H");
    check_positive(width, "W");
    check_positive(channels, "C");
    data_.assign(static_cast<std::size_t>(height) * width * channels, 0);
}

QuantTensor3D::QuantTensor3D(int height, int width, int channels,
                             std::vector<std::int8_t> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
    check_positive(height, "H");
    check_positive(width, "W");
    check_positive(channels, "C");
    check_size(data_.size(),
               static_cast<std::size_t>(height) * width * channels, "image");
}

KernelTensor4D::KernelTensor4D(int kernels, int channels)
    : kernels_(kernels), channels_(channels) {
    check_positive(kernels, "K");
    check_positive(channels, "C");
    data_.assign(static_cast<std::size_t>(kernels) * channels * 9, 0);
}

KernelTensor4D::KernelTensor4D(int kernels, int channels,
                               std::vector<std::int8_t> data)
    : kernels_(kernels), channels_(channels), data_(std::move(data)) {
    check_positive(kernels, "K");
    check_positive(channels, "C");
    check_size(data_.size(), static_cast<std::size_t>(kernels) * channels * 9,
               "kernels");
}

BiasVector::BiasVector(int kernels) {
    check_positive(kernels, "K");
    data_.assign(static_cast<std::size_t>(kernels), 0);
}

BiasVector::BiasVector(std::vector<std::int32_t> data) : data_(std::move(data)) {
    if (data_.empty()) throw ConfigError("bias must not be empty");
}

PsumTensor3D::PsumTensor3D(int out_height, int out_width, int kernels)
    : out_height_(out_height), out_width_(out_width), kernels_(kernels) {
    check_positive(out_height, "OutH");
    check_positive(out_width, "OutW");
    check_positive(kernels, "K");
    data_.assign(static_cast<std::size_t>(out_height) * out_width * kernels, 0);
}

PsumTensor3D::PsumTensor3D(int out_height, int out_width, int kernels,
                           std::vector<std::int32_t> data)
    : out_height_(out_height), out_width_(out_width), kernels_(kernels),
      data_(std::move(data)) {
    check_positive(out_height, "OutH");
    check_positive(out_width, "OutW");
    check_positive(kernels, "K");
    check_size(data_.size(),
               static_cast<std::size_t>(out_height) * out_width * kernels,
               "psums");
}

}  // namespace convsim
