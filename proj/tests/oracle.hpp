// Brute-force reference routines used only by the tests. These are written
// against the flat layouts directly and never call into the library's
// convolution or requantization paths, so they can arbitrate both the golden
// model and the simulator.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace oracle {

// Naive nested-loop layer convolution over the flat layouts:
//   image   index c*H*W + i*W + j
//   kernels index ((k*C + c)*3 + m)*3 + n
//   output  index k*OH*OW + i*OW + j   with OH = H-2, OW = W-2
inline std::vector<std::int32_t> conv_layer_bruteforce(
    const std::vector<std::int8_t>& image, int H, int W, int C,
    const std::vector<std::int8_t>& kernels, int K,
    const std::vector<std::int32_t>& bias) {
    const int OH = H - 2;
    const int OW = W - 2;
    std::vector<std::int32_t> out(static_cast<std::size_t>(K) * OH * OW, 0);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < OH; ++i)
            for (int j = 0; j < OW; ++j) {
                long long acc = bias[k];
                for (int c = 0; c < C; ++c)
                    for (int m = 0; m < 3; ++m)
                        for (int n = 0; n < 3; ++n)
                            acc += static_cast<long long>(
                                       image[static_cast<std::size_t>(c) * H * W +
                                             (i + m) * W + (j + n)]) *
                                   static_cast<long long>(
                                       kernels[((static_cast<std::size_t>(k) * C + c) * 3 +
                                                m) * 3 + n]);
                out[static_cast<std::size_t>(k) * OH * OW + i * OW + j] =
                    static_cast<std::int32_t>(acc);
            }
    return out;
}

// Floor division by 2^shift then clamp, avoiding the >> operator the library
// uses, so the two routes stay independent.
inline std::vector<std::int8_t> requant_bruteforce(
    const std::vector<std::int32_t>& psums, int shift) {
    std::vector<std::int8_t> out(psums.size());
    const long long div = 1ll << shift;
    for (std::size_t idx = 0; idx < psums.size(); ++idx) {
        const long long x = psums[idx];
        long long q = x / div;
        if (x % div != 0 && x < 0) --q;  // floor, not truncation
        q = std::clamp(q, -128ll, 127ll);
        out[idx] = static_cast<std::int8_t>(q);
    }
    return out;
}

// Single-plane 3x3 window sum at (i, j): the micro-oracle for one psum.
inline std::int32_t window_dot(const std::vector<std::int8_t>& plane, int W,
                               int i, int j, const std::int8_t* kernel9) {
    std::int32_t acc = 0;
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            acc += static_cast<std::int32_t>(plane[(i + m) * W + (j + n)]) *
                   static_cast<std::int32_t>(kernel9[m * 3 + n]);
    return acc;
}

}  // namespace oracle
