#pragma once

#include <cstdint>
#include <vector>

#include "convsim/types.hpp"

namespace convsim {

// ---------------------------------------------------------------------------
// Tensor containers. All layouts are row-major with the channel (or kernel)
// index outermost, matching the per-channel bank layout:
//
//   feature  index = c*H*W + i*W + j
//   kernel   index = ((k*C + c)*3 + m)*3 + n
//   psum     index = k*OutH*OutW + i*OutW + j
//
// Elements are signed 8-bit two's-complement features/weights and signed
// 32-bit partial sums. Construction checks shape/size consistency only;
// convolution-facing constraints (H,W >= 3, divisibility) are enforced by
// the operations and LayerSpec::validate.
// ---------------------------------------------------------------------------

class QuantTensor3D {
public:
    QuantTensor3D(int height, int width, int channels);
    QuantTensor3D(int height, int width, int channels, std::vector<std::int8_t> data);

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }

    std::int8_t at(int c, int i, int j) const {
        return data_[index(c, i, j)];
    }
    std::int8_t& at(int c, int i, int j) {
        return data_[index(c, i, j)];
    }
    std::size_t index(int c, int i, int j) const {
        return (static_cast<std::size_t>(c) * height_ + i) * width_ + j;
    }

    const std::vector<std::int8_t>& data() const { return data_; }
    std::vector<std::int8_t>& data() { return data_; }

    // Pointer to the H*W plane of one channel.
    const std::int8_t* plane(int c) const {
        return data_.data() + static_cast<std::size_t>(c) * height_ * width_;
    }

    bool operator==(const QuantTensor3D&) const = default;

private:
    int height_, width_, channels_;
    std::vector<std::int8_t> data_;
};

class KernelTensor4D {
public:
    KernelTensor4D(int kernels, int channels);
    KernelTensor4D(int kernels, int channels, std::vector<std::int8_t> data);

    int kernels() const { return kernels_; }
    int channels() const { return channels_; }
    static constexpr int rows() { return 3; }
    static constexpr int cols() { return 3; }

    std::int8_t at(int k, int c, int m, int n) const {
        return data_[index(k, c, m, n)];
    }
    std::int8_t& at(int k, int c, int m, int n) {
        return data_[index(k, c, m, n)];
    }
    std::size_t index(int k, int c, int m, int n) const {
        return ((static_cast<std::size_t>(k) * channels_ + c) * 3 + m) * 3 + n;
    }

    // Pointer to the 9 weights of kernel k, channel c.
    const std::int8_t* plane(int k, int c) const {
        return data_.data() + (static_cast<std::size_t>(k) * channels_ + c) * 9;
    }

    const std::vector<std::int8_t>& data() const { return data_; }
    std::vector<std::int8_t>& data() { return data_; }

    bool operator==(const KernelTensor4D&) const = default;

private:
    int kernels_, channels_;
    std::vector<std::int8_t> data_;
};

class BiasVector {
public:
    explicit BiasVector(int kernels);
    explicit BiasVector(std::vector<std::int32_t> data);

    int size() const { return static_cast<int>(data_.size()); }
    std::int32_t at(int k) const { return data_[k]; }
    std::int32_t& at(int k) { return data_[k]; }

    const std::vector<std::int32_t>& data() const { return data_; }

    bool operator==(const BiasVector&) const = default;

private:
    std::vector<std::int32_t> data_;
};

class PsumTensor3D {
public:
    PsumTensor3D(int out_height, int out_width, int kernels);
    PsumTensor3D(int out_height, int out_width, int kernels, std::vector<std::int32_t> data);

    int out_height() const { return out_height_; }
    int out_width() const { return out_width_; }
    int kernels() const { return kernels_; }

    std::int32_t at(int k, int i, int j) const {
        return data_[index(k, i, j)];
    }
    std::int32_t& at(int k, int i, int j) {
        return data_[index(k, i, j)];
    }
    std::size_t index(int k, int i, int j) const {
        return (static_cast<std::size_t>(k) * out_height_ + i) * out_width_ + j;
    }

    const std::vector<std::int32_t>& data() const { return data_; }
    std::vector<std::int32_t>& data() { return data_; }

    bool operator==(const PsumTensor3D&) const = default;

private:
    int out_height_, out_width_, kernels_;
    std::vector<std::int32_t> data_;
};

}  // namespace convsim
