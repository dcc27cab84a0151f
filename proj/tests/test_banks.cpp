#include <doctest.h>

#include <set>
#include <tuple>
#include <vector>

#include "convsim/banks.hpp"
#include "convsim/golden.hpp"
#include "convsim/prng.hpp"

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

}  // namespace

TEST_CASE("image_map: quarter banking and channel-major addresses") {
    CHECK(image_map(0, 0, 0, make_spec(4, 4, 8, 4)) == BankAddress{0, 0});
    CHECK(image_map(2, 1, 3, make_spec(4, 4, 8, 4)) == BankAddress{1, 7});
    CHECK(image_map(3, 2, 2, make_spec(3, 3, 4, 4)) == BankAddress{3, 8});
    CHECK_THROWS_AS(image_map(8, 0, 0, make_spec(4, 4, 8, 4)), StructuralError);
    CHECK_THROWS_AS(image_map(0, 4, 0, make_spec(4, 4, 8, 4)), StructuralError);
}

TEST_CASE("weight_map: grid coordinates and within-bank addresses") {
    CHECK(weight_map(0, 0, 0, 0, make_spec(4, 4, 4, 4)) ==
          WeightBankAddress{0, 0, 0});
    // ((5 mod 2)*2 + (3 mod 2))*9 + 1*3 + 2 = 32 — confirmed by the
    // enumeration test below.
    CHECK(weight_map(5, 3, 1, 2, make_spec(8, 8, 8, 8)) ==
          WeightBankAddress{1, 2, 32});
    CHECK(weight_map(7, 3, 2, 2, make_spec(4, 4, 4, 8)) ==
          WeightBankAddress{3, 3, 17});
    CHECK_THROWS_AS(weight_map(0, 0, 3, 0, make_spec(4, 4, 4, 4)),
                    StructuralError);
}

TEST_CASE("output_map: kernel-quarter banking") {
    CHECK(output_map(0, 0, 0, make_spec(4, 4, 4, 4)) == BankAddress{0, 0});
    CHECK(output_map(3, 1, 1, make_spec(4, 4, 4, 8)) == BankAddress{1, 7});
    CHECK(output_map(7, 2, 2, make_spec(5, 5, 4, 8)) == BankAddress{3, 17});
    CHECK_THROWS_AS(output_map(0, 2, 0, make_spec(4, 4, 4, 4)), StructuralError);
}

TEST_CASE("address maps are bijective and dense for all small specs") {
    for (int h = 3; h <= 8; ++h)
        for (int w = 3; w <= 8; ++w)
            for (int c : {4, 8, 12, 16})
                for (int k : {4, 8, 12, 16}) {
                    const LayerSpec spec = make_spec(h, w, c, k);

                    std::set<std::pair<int, std::uint32_t>> image_seen;
                    for (int cc = 0; cc < c; ++cc)
                        for (int i = 0; i < h; ++i)
                            for (int j = 0; j < w; ++j) {
                                const BankAddress a = image_map(cc, i, j, spec);
                                REQUIRE(a.addr <
                                        static_cast<std::uint32_t>(h * w * (c / 4)));
                                REQUIRE(image_seen.insert({a.bank, a.addr}).second);
                            }
                    REQUIRE(image_seen.size() ==
                            static_cast<std::size_t>(h) * w * c);

                    std::set<std::tuple<int, int, std::uint32_t>> weight_seen;
                    for (int kk = 0; kk < k; ++kk)
                        for (int cc = 0; cc < c; ++cc)
                            for (int m = 0; m < 3; ++m)
                                for (int n = 0; n < 3; ++n) {
                                    const WeightBankAddress a =
                                        weight_map(kk, cc, m, n, spec);
                                    REQUIRE(a.addr < static_cast<std::uint32_t>(
                                                         9 * (k / 4) * (c / 4)));
                                    REQUIRE(weight_seen
                                                .insert({a.row, a.col, a.addr})
                                                .second);
                                }
                    REQUIRE(weight_seen.size() ==
                            static_cast<std::size_t>(k) * c * 9);

                    std::set<std::pair<int, std::uint32_t>> output_seen;
                    const int oh = spec.out_height(), ow = spec.out_width();
                    for (int kk = 0; kk < k; ++kk)
                        for (int i = 0; i < oh; ++i)
                            for (int j = 0; j < ow; ++j) {
                                const BankAddress a = output_map(kk, i, j, spec);
                                REQUIRE(a.addr <
                                        static_cast<std::uint32_t>(oh * ow * (k / 4)));
                                REQUIRE(output_seen.insert({a.bank, a.addr}).second);
                            }
                    REQUIRE(output_seen.size() ==
                            static_cast<std::size_t>(k) * oh * ow);
                }
}

TEST_CASE("bank read/write honors the two-port budget") {
    BmgBank bank(16, 8, "tb");
    bank.poke(0, 17);
    CHECK(bank.read(0, 5) == 17);
    CHECK(bank.read(0, 5) == 17);
    CHECK_THROWS_AS(bank.read(0, 5), StructuralError);  // third use in cycle 5
    CHECK(bank.read(0, 6) == 17);                       // next cycle is fine
}

TEST_CASE("bank read sees the pre-write value in the write's cycle") {
    BmgBank bank(16, 32, "tb");
    bank.poke(3, 100);
    bank.write(3, 200, 9);
    CHECK(bank.read(3, 9) == 100);   // same cycle: read-before-write
    CHECK(bank.read(3, 10) == 200);  // later cycle: committed
}

TEST_CASE("bank addresses out of range are structural errors") {
    BmgBank bank(4, 8, "tb");
    CHECK_THROWS_AS(bank.read(4, 0), StructuralError);
    CHECK_THROWS_AS(bank.poke(4, 1), StructuralError);
}

TEST_CASE("bank_accumulate applies deltas exactly") {
    BmgBank bank(8, 32, "tb");
    bank.poke(2, 10);
    bank.accumulate(2, 5, 6, 7);
    CHECK(bank.peek(2) == 15);
    bank.accumulate(2, -22, 14, 15);
    CHECK(bank.peek(2) == -7);
    CHECK_THROWS_AS(bank.accumulate(2, 1, 7, 7), StructuralError);  // same cycle
}

TEST_CASE("sequential accumulates reproduce the reference psum") {
    // One output coordinate accumulated channel by channel equals the
    // full-layer convolution there.
    const LayerSpec spec = make_spec(5, 5, 8, 4);
    const GeneratedInputs in = generate_inputs(23, spec);
    const PsumTensor3D expected = conv2d_layer(in.image, in.kernels, in.bias);

    BmgBank bank(8, 32, "tb");
    bank.poke(0, in.bias.at(2));
    std::uint64_t cycle = 0;
    for (int c = 0; c < 8; ++c) {
        std::int32_t delta = 0;
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n)
                delta += static_cast<std::int32_t>(in.image.at(c, 1 + m, 2 + n)) *
                         static_cast<std::int32_t>(in.kernels.at(2, c, m, n));
        bank.accumulate(0, delta, cycle, cycle + 1);
        cycle += 8;
    }
    CHECK(bank.peek(0) == expected.at(2, 1, 2));
}

TEST_CASE("preload_bias fills every output word") {
    SUBCASE("zero bias zeroes all words") {
        const LayerSpec spec = make_spec(4, 4, 4, 4);
        OutputBankSet outs(spec);
        outs.preload_bias(BiasVector(4));
        for (int q = 0; q < 4; ++q)
            for (std::uint32_t a = 0; a < outs.bank(q).depth(); ++a)
                CHECK(outs.bank(q).peek(a) == 0);
    }
    SUBCASE("K=4 with 1x1 outputs puts bias[k] in bank k") {
        const LayerSpec spec = make_spec(3, 3, 4, 4);
        OutputBankSet outs(spec);
        outs.preload_bias(BiasVector(std::vector<std::int32_t>{1, 2, 3, 4}));
        for (int q = 0; q < 4; ++q) {
            REQUIRE(outs.bank(q).depth() == 1);
            CHECK(outs.bank(q).peek(0) == q + 1);
        }
    }
    SUBCASE("length mismatch is rejected") {
        OutputBankSet outs(make_spec(4, 4, 4, 8));
        CHECK_THROWS_AS(outs.preload_bias(BiasVector(4)), ConfigError);
    }
}

TEST_CASE("image and weight banks round-trip their tensors") {
    const LayerSpec spec = make_spec(6, 5, 8, 8);
    const GeneratedInputs in = generate_inputs(31, spec);

    ImageBankSet images(spec);
    images.load(in.image);
    CHECK(images.gather() == in.image);

    WeightBankGrid grid(spec);
    grid.load(in.kernels);
    bool weights_match = true;
    for (int k = 0; k < 8 && weights_match; ++k)
        for (int c = 0; c < 8; ++c)
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n) {
                    const WeightBankAddress a = weight_map(k, c, m, n, spec);
                    if (grid.bank(a.row, a.col).peek(a.addr) != in.kernels.at(k, c, m, n))
                        weights_match = false;
                }
    CHECK(weights_match);
}

TEST_CASE("redundant image-bank slots stay untouched") {
    LayerSpec spec = make_spec(4, 4, 8, 4);
    spec.bank_capacity = 100;  // well beyond the 32 live words
    GeneratedInputs in = generate_inputs(37, spec);
    for (auto& v : in.image.data()) v = v ? v : 1;  // make live words nonzero-ish
    ImageBankSet images(spec);
    images.load(in.image);
    for (int q = 0; q < 4; ++q)
        for (std::uint32_t a = 32; a < 100; ++a)
            CHECK(images.bank(q).peek(a) == 0);
}

TEST_CASE("output layout chains into the next layer's image layout") {
    // output_map of this layer == image_map of a (OutH, OutW, K) input, so a
    // requantized feature map can be reconsumed without reshuffling.
    const LayerSpec layer = make_spec(6, 7, 8, 8);
    const LayerSpec next = make_spec(layer.out_height(), layer.out_width(), 8, 8);
    for (int k = 0; k < 8; ++k)
        for (int i = 0; i < layer.out_height(); ++i)
            for (int j = 0; j < layer.out_width(); ++j) {
                const BankAddress out_addr = output_map(k, i, j, layer);
                const BankAddress in_addr = image_map(k, i, j, next);
                CHECK(out_addr == in_addr);
            }
}

TEST_CASE("layer spec validation names the offending constraint") {
    CHECK_THROWS_WITH_AS(make_spec(2, 4, 4, 4).validate(), "H >= 3 required",
                         ConfigError);
    CHECK_THROWS_WITH_AS(make_spec(4, 4, 6, 4).validate(),
                         "C must be a multiple of 4", ConfigError);
    CHECK_THROWS_WITH_AS(make_spec(4, 4, 4, 10).validate(),
                         "K must be a multiple of 4", ConfigError);
    LayerSpec tight = make_spec(8, 8, 8, 4);
    tight.bank_capacity = 100;  // needs 8*8*2 = 128
    CHECK_THROWS_AS(tight.validate(), ConfigError);
}
