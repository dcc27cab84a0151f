#include <doctest.h>

#include <array>
#include <vector>

#include "convsim/golden.hpp"
#include "convsim/prng.hpp"
#include "oracle.hpp"

using namespace convsim;

namespace {

LayerSpec make_spec(int h, int w, int c, int k) {
    LayerSpec spec;
    spec.height = h;
    spec.width = w;
    spec.channels = c;
    spec.kernels = k;
    return spec;
}

std::array<std::int8_t, 9> ones9() {
    std::array<std::int8_t, 9> a;
    a.fill(1);
    return a;
}

}  // namespace

TEST_CASE("conv2d_channel: 3x3 all-ones image and kernel give 9") {
    std::vector<std::int8_t> plane(9, 1);
    const auto out = conv2d_channel(plane, 3, 3, ones9());
    REQUIRE(out.size() == 1);
    CHECK(out[0] == 9);
}

TEST_CASE("conv2d_channel: center-delta kernel picks I(1,1)") {
    SplitMix64 rng(11);
    std::array<std::int8_t, 9> delta{};
    delta[4] = 1;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::int8_t> plane(9);
        for (auto& v : plane) v = rng.next_i8();
        const auto out = conv2d_channel(plane, 3, 3, delta);
        REQUIRE(out.size() == 1);
        CHECK(out[0] == plane[4]);
    }
}

TEST_CASE("conv2d_channel: 4x4 ramp against hand-summed windows") {
    std::vector<std::int8_t> plane(16);
    for (int t = 0; t < 16; ++t) plane[t] = static_cast<std::int8_t>(t + 1);
    const auto out = conv2d_channel(plane, 4, 4, ones9());
    REQUIRE(out.size() == 4);
    CHECK(out[0] == 54);
    CHECK(out[1] == 63);
    CHECK(out[2] == 90);
    CHECK(out[3] == 99);
}

TEST_CASE("conv2d_channel: rejects planes smaller than 3x3") {
    std::vector<std::int8_t> plane(6, 1);
    CHECK_THROWS_AS(conv2d_channel(plane, 2, 3, ones9()), ConfigError);
    CHECK_THROWS_AS(conv2d_channel(plane, 3, 2, ones9()), ConfigError);
}

TEST_CASE("conv2d_layer: zero kernels return constant bias planes") {
    QuantTensor3D image(5, 5, 4);
    SplitMix64 rng(3);
    for (auto& v : image.data()) v = rng.next_i8();
    KernelTensor4D kernels(4, 4);  // zero-initialized
    BiasVector bias(std::vector<std::int32_t>{7, -3, 0, 100});
    const PsumTensor3D out = conv2d_layer(image, kernels, bias);
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(out.at(k, i, j) == bias.at(k));
}

TEST_CASE("conv2d_layer: four all-ones channels sum to 36") {
    QuantTensor3D image(4, 4, 4);
    for (auto& v : image.data()) v = 1;
    KernelTensor4D kernels(4, 4);
    for (auto& v : kernels.data()) v = 1;
    BiasVector bias(4);
    const PsumTensor3D out = conv2d_layer(image, kernels, bias);
    for (const auto v : out.data()) CHECK(v == 36);
}

TEST_CASE("conv2d_layer: matches the brute-force loop nest on seed 42") {
    const LayerSpec spec = make_spec(6, 6, 4, 4);
    const GeneratedInputs in = generate_inputs(42, spec);
    const PsumTensor3D out = conv2d_layer(in.image, in.kernels, in.bias);
    const auto expected = oracle::conv_layer_bruteforce(
        in.image.data(), 6, 6, 4, in.kernels.data(), 4, in.bias.data());
    CHECK(out.data() == expected);
}

TEST_CASE("conv2d_layer: dimension mismatches are rejected") {
    QuantTensor3D image(4, 4, 4);
    KernelTensor4D kernels(4, 8);
    BiasVector bias(4);
    CHECK_THROWS_AS(conv2d_layer(image, kernels, bias), ConfigError);
    KernelTensor4D matched(8, 4);
    CHECK_THROWS_AS(conv2d_layer(image, matched, bias), ConfigError);  // bias K=4 vs 8
}

TEST_CASE("requantize: saturation and arithmetic shift") {
    PsumTensor3D psums(1, 3, 1, {300, -1000, 256});
    SUBCASE("shift 0 saturates at 127") {
        const auto out = requantize(psums, 0);
        CHECK(out.data()[0] == 127);
    }
    SUBCASE("shift 3 keeps -125 in range") {
        const auto out = requantize(psums, 3);
        CHECK(out.data()[1] == -125);
    }
    SUBCASE("shift 4 divides the exact power of two") {
        const auto out = requantize(psums, 4);
        CHECK(out.data()[2] == 16);
    }
    SUBCASE("shift out of range is rejected") {
        CHECK_THROWS_AS(requantize(psums, 32), ConfigError);
        CHECK_THROWS_AS(requantize(psums, -1), ConfigError);
    }
}

TEST_CASE("requantize: agrees with floor-division route on random psums") {
    SplitMix64 rng(17);
    std::vector<std::int32_t> values(256);
    for (auto& v : values)
        v = static_cast<std::int32_t>(rng.next());  // full 32-bit range
    PsumTensor3D psums(8, 8, 4, values);
    for (int shift : {0, 1, 5, 13, 31}) {
        const auto got = requantize(psums, shift);
        const auto expected = oracle::requant_bruteforce(values, shift);
        CHECK(got.data() == expected);
    }
}

TEST_CASE("psum_count: reference layer and small cases") {
    CHECK(psum_count(make_spec(224, 224, 8, 8)) == 3154176ull);
    CHECK(psum_count(make_spec(3, 3, 4, 4)) == 16ull);
    CHECK(psum_count(make_spec(5, 6, 8, 4)) == 384ull);
}

TEST_CASE("psum_count: equals enumeration over (pixel, kernel, channel)") {
    for (int h : {3, 4, 7})
        for (int c : {4, 8})
            for (int k : {4, 12}) {
                const LayerSpec spec = make_spec(h, h + 1, c, k);
                std::uint64_t n = 0;
                for (int i = 0; i < spec.out_height(); ++i)
                    for (int j = 0; j < spec.out_width(); ++j)
                        for (int kk = 0; kk < k; ++kk)
                            for (int cc = 0; cc < c; ++cc) {
                                (void)i; (void)j; (void)kk; (void)cc;
                                ++n;
                            }
                CHECK(psum_count(spec) == n);
            }
}

TEST_CASE("conv2d_layer: linearity in the kernel weights") {
    const LayerSpec spec = make_spec(5, 5, 4, 4);
    GeneratedInputs in = generate_inputs(7, spec);
    // Keep weights in [-63, 63] so doubling stays within 8 bits.
    KernelTensor4D halved(4, 4);
    for (std::size_t t = 0; t < halved.data().size(); ++t)
        halved.data()[t] = static_cast<std::int8_t>(in.kernels.data()[t] / 2);
    KernelTensor4D doubled(4, 4);
    for (std::size_t t = 0; t < doubled.data().size(); ++t)
        doubled.data()[t] = static_cast<std::int8_t>(2 * halved.data()[t]);
    BiasVector zero(4);
    const auto base = conv2d_layer(in.image, halved, zero);
    const auto twice = conv2d_layer(in.image, doubled, zero);
    for (std::size_t t = 0; t < base.data().size(); ++t)
        CHECK(twice.data()[t] == 2 * base.data()[t]);
}

TEST_CASE("conv2d_layer: bias separability") {
    const LayerSpec spec = make_spec(6, 5, 8, 4);
    const GeneratedInputs in = generate_inputs(13, spec);
    BiasVector zero(4);
    const auto with_bias = conv2d_layer(in.image, in.kernels, in.bias);
    const auto without = conv2d_layer(in.image, in.kernels, zero);
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < spec.out_height(); ++i)
            for (int j = 0; j < spec.out_width(); ++j)
                CHECK(with_bias.at(k, i, j) - without.at(k, i, j) == in.bias.at(k));
}

TEST_CASE("conv2d_layer: all-delta kernels sum the window centers") {
    const LayerSpec spec = make_spec(5, 5, 8, 4);
    const GeneratedInputs in = generate_inputs(19, spec);
    KernelTensor4D deltas(4, 8);
    for (int k = 0; k < 4; ++k)
        for (int c = 0; c < 8; ++c)
            deltas.at(k, c, 1, 1) = 1;
    BiasVector zero(4);
    const auto out = conv2d_layer(in.image, deltas, zero);
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                std::int32_t want = 0;
                for (int c = 0; c < 8; ++c) want += in.image.at(c, i + 1, j + 1);
                CHECK(out.at(k, i, j) == want);
            }
}

TEST_CASE("conv2d_layer: agrees with brute force on 100 random layers") {
    SplitMix64 shapes(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int h = shapes.next_in(3, 9);
        const int w = shapes.next_in(3, 9);
        const int c = 4 * shapes.next_in(1, 2);
        const int k = 4 * shapes.next_in(1, 2);
        const LayerSpec spec = make_spec(h, w, c, k);
        const GeneratedInputs in = generate_inputs(1000 + trial, spec);
        const auto got = conv2d_layer(in.image, in.kernels, in.bias);
        const auto expected = oracle::conv_layer_bruteforce(
            in.image.data(), h, w, c, in.kernels.data(), k, in.bias.data());
        REQUIRE(got.data() == expected);
    }
}
