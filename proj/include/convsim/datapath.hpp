#pragma once

#include <array>
#include <cstdint>

#include "convsim/banks.hpp"
#include "convsim/types.hpp"

namespace convsim {

// ---------------------------------------------------------------------------
// Step-level model of the compute array: a PCORE is nine MAC lanes plus an
// adder tree producing one psum; a computing core is four PCOREs sharing one
// image tile; the array is four cores plus a cross-core reducer. Each
// 8-cycle step yields 16 psums reduced to 4 accumulation deltas, one per
// active kernel.
// ---------------------------------------------------------------------------

// One 3x3 window of a single channel, rows concatenated:
// tile[3*r + s] = I(i+r, j+s).
using ImageTile = std::array<std::int8_t, 9>;

using WeightPlane = std::array<std::int8_t, 9>;

// Loader register of one core: slot p holds the current channel of kernel
// p*K/4 + step_k. Persists across the spatial sweep (weight-stationary).
using WeightReg = std::array<WeightPlane, 4>;

struct ComputingCore {
    int id;             // 0..3
    int channel_begin;  // id * C/4
    int channel_end;    // (id+1) * C/4
};

// The four cores of a layer, core q owning channel quarter q.
std::array<ComputingCore, 4> make_core_array(const LayerSpec& spec);

// Nine multiplies and an adder tree: sum_t tile[t] * weights[t].
std::int32_t mac9(const ImageTile& tile, const WeightPlane& weights);

// One core, one step: psum[p] = mac9(tile, reg[p]). `channel` must lie in
// the core's quarter; anything else is a scheduling bug.
std::array<std::int32_t, 4> core_step(const ComputingCore& core, int channel,
                                      const ImageTile& tile,
                                      const WeightReg& reg);

struct ArrayStepResult {
    // delta[p] = sum over cores of psums[q][p]; one RMW per output bank.
    std::array<std::int32_t, 4> delta;
    std::array<std::array<std::int32_t, 4>, 4> psums;  // [core][kernel slot]
};

// All four cores at one output coordinate: tile q is the window of channel
// q*C/4 + channel_offset, every reg holds the same four kernels.
ArrayStepResult array_step(const std::array<ComputingCore, 4>& cores,
                           int channel_offset,
                           const std::array<ImageTile, 4>& tiles,
                           const std::array<WeightReg, 4>& regs);

// Image loader: fetches the 3x3 window of `channel` at (i, j), spreading the
// nine reads over the 8-cycle load stage starting at cycle_base.
ImageTile load_tile(ImageBankSet& banks, int channel, int i, int j,
                    std::uint64_t cycle_base);

// Weight loader for one core: slot p streams kernel p*K/4 + step_k of
// `channel` from weight-bank column p, nine reads per column spread over the
// load stage. Distinct columns, so the four streams never share a port.
WeightReg load_weights(WeightBankGrid& grid, int core_id, int channel,
                       int step_k, std::uint64_t cycle_base);

}  // namespace convsim
