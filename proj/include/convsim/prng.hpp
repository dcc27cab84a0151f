#pragma once

#include <cstdint>

#include "convsim/tensor.hpp"
#include "convsim/types.hpp"

namespace convsim {

// splitmix64: tiny, seedable, and identical on every platform, which keeps
// generated inputs byte-stable across toolchains (std::mt19937 distributions
// are not portable).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::int8_t next_i8() { return static_cast<std::int8_t>(next() & 0xFF); }

    // Uniform over [-2^15, 2^15).
    std::int32_t next_bias() {
        return static_cast<std::int16_t>(next() & 0xFFFF);
    }

    // Uniform over [lo, hi] via rejection-free modulo (bias negligible for
    // the tiny ranges used here).
    int next_in(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

struct GeneratedInputs {
    QuantTensor3D image;
    KernelTensor4D kernels;
    BiasVector bias;
};

// Deterministic inputs for a layer: one splitmix64 stream fills the image,
// then the kernels, then the bias.
GeneratedInputs generate_inputs(std::uint64_t seed, const LayerSpec& spec);

}  // namespace convsim
