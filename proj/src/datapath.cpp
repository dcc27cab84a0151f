#include "convsim/datapath.hpp"

#include <string>

namespace convsim {

std::array<ComputingCore, 4> make_core_array(const LayerSpec& spec) {
    const int quarter = spec.channel_quarter();
    std::array<ComputingCore, 4> cores{};
    for (int q = 0; q < 4; ++q)
        cores[q] = {q, q * quarter, (q + 1) * quarter};
    return cores;
}

std::int32_t mac9(const ImageTile& tile, const WeightPlane& weights) {
    std::int32_t acc = 0;
    for (int t = 0; t < 9; ++t)
        acc += static_cast<std::int32_t>(tile[t]) *
               static_cast<std::int32_t>(weights[t]);
    return acc;
}

std::array<std::int32_t, 4> core_step(const ComputingCore& core, int channel,
                                      const ImageTile& tile,
                                      const WeightReg& reg) {
    if (channel < core.channel_begin || channel >= core.channel_end)
        throw StructuralError("core " + std::to_string(core.id) +
                              " fed channel " + std::to_string(channel) +
                              " outside its range [" +
                              std::to_string(core.channel_begin) + ", " +
                              std::to_string(core.channel_end) + ")");
    std::array<std::int32_t, 4> psums{};
    for (int p = 0; p < 4; ++p)
        psums[p] = mac9(tile, reg[p]);
    return psums;
}

ArrayStepResult array_step(const std::array<ComputingCore, 4>& cores,
                           int channel_offset,
                           const std::array<ImageTile, 4>& tiles,
                           const std::array<WeightReg, 4>& regs) {
    ArrayStepResult result{};
    for (int q = 0; q < 4; ++q) {
        const int channel = cores[q].channel_begin + channel_offset;
        result.psums[q] = core_step(cores[q], channel, tiles[q], regs[q]);
    }
    // Cross-core adder tree: one delta per kernel slot.
    for (int p = 0; p < 4; ++p) {
        std::int32_t sum = 0;
        for (int q = 0; q < 4; ++q) sum += result.psums[q][p];
        result.delta[p] = sum;
    }
    return result;
}

ImageTile load_tile(ImageBankSet& banks, int channel, int i, int j,
                    std::uint64_t cycle_base) {
    const LayerSpec& spec = banks.spec();
    if (i < 0 || i > spec.height - 3 || j < 0 || j > spec.width - 3)
        throw StructuralError("tile window (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") does not fit a " +
                              std::to_string(spec.height) + "x" +
                              std::to_string(spec.width) + " plane");
    ImageTile tile{};
    for (int t = 0; t < 9; ++t) {
        const int m = t / 3;
        const int n = t % 3;
        // Nine reads spread over the 8-cycle load stage (two land on the
        // first cycle, within the port budget).
        tile[t] = static_cast<std::int8_t>(
            banks.read(channel, i + m, j + n, cycle_base + (t % 8)));
    }
    return tile;
}

WeightReg load_weights(WeightBankGrid& grid, int core_id, int channel,
                       int step_k, std::uint64_t cycle_base) {
    const LayerSpec& spec = grid.spec();
    const int quarter = spec.channel_quarter();
    if (core_id < 0 || core_id >= 4)
        throw StructuralError("core id " + std::to_string(core_id) +
                              " out of range");
    if (channel < core_id * quarter || channel >= (core_id + 1) * quarter)
        throw StructuralError("weight load for channel " +
                              std::to_string(channel) +
                              " outside core " + std::to_string(core_id) +
                              "'s quarter");
    if (step_k < 0 || step_k >= spec.kernel_quarter())
        throw StructuralError("kernel group " + std::to_string(step_k) +
                              " out of range");
    WeightReg reg{};
    for (int p = 0; p < 4; ++p) {
        const int kernel = p * spec.kernel_quarter() + step_k;
        for (int t = 0; t < 9; ++t)
            reg[p][t] = static_cast<std::int8_t>(
                grid.read(kernel, channel, t / 3, t % 3, cycle_base + (t % 8)));
    }
    return reg;
}

}  // namespace convsim
