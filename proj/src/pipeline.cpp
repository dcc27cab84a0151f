#include "convsim/pipeline.hpp"

#include <string>

#include "convsim/datapath.hpp"

namespace convsim {

std::uint64_t step_count(const LayerSpec& spec) {
    return static_cast<std::uint64_t>(spec.kernel_quarter()) *
           spec.channel_quarter() * spec.out_height() * spec.out_width();
}

StepIndex step_from_ordinal(const LayerSpec& spec, std::uint64_t ordinal) {
    if (ordinal >= step_count(spec))
        throw StructuralError("step ordinal " + std::to_string(ordinal) +
                              " out of range");
    std::uint64_t rest = ordinal;
    StepIndex step{};
    step.out_j = static_cast<int>(rest % spec.out_width());
    rest /= spec.out_width();
    step.out_i = static_cast<int>(rest % spec.out_height());
    rest /= spec.out_height();
    step.channel_offset = static_cast<int>(rest % spec.channel_quarter());
    rest /= spec.channel_quarter();
    step.kernel_group = static_cast<int>(rest);
    return step;
}

std::vector<StepIndex> enumerate_steps(const LayerSpec& spec) {
    const std::uint64_t n = step_count(spec);
    std::vector<StepIndex> steps;
    steps.reserve(n);
    for (std::uint64_t s = 0; s < n; ++s)
        steps.push_back(step_from_ordinal(spec, s));
    return steps;
}

DmaCycles dma_cycles(const DmaModel& model, const LayerSpec& spec) {
    if (model.bus_bytes_per_cycle < 1)
        throw ConfigError("bus_bytes_per_cycle must be >= 1");
    const std::uint64_t bus = static_cast<std::uint64_t>(model.bus_bytes_per_cycle);
    const std::uint64_t in_bytes =
        static_cast<std::uint64_t>(spec.height) * spec.width * spec.channels +
        9ull * spec.kernels * spec.channels;
    const std::uint64_t out_bytes = 4ull * spec.kernels * spec.out_height() *
                                    spec.out_width();
    auto ceil_div = [bus](std::uint64_t bytes) { return (bytes + bus - 1) / bus; };
    return {ceil_div(in_bytes), ceil_div(out_bytes), ceil_div(out_bytes)};
}

std::uint64_t compute_cycles(const LayerSpec& spec) {
    return step_count(spec) * 8;
}

Throughput throughput(const CycleStats& stats, const LayerSpec& spec) {
    if (stats.clock_mhz <= 0.0)
        throw ConfigError("clock_mhz must be positive");
    Throughput t{};
    t.latency_s = static_cast<double>(stats.compute_cycles) /
                  (stats.clock_mhz * 1e6);
    const double psums = static_cast<double>(psum_count(spec));
    t.gops_psum = psums / t.latency_s / 1e9;
    t.gops_mac = 18.0 * t.gops_psum;
    return t;
}

double scale_cores(double gops_psum, int n_instances) {
    if (n_instances < 1)
        throw ConfigError("instance count must be >= 1");
    return gops_psum * n_instances;
}

RunResult run_layer(const LayerSpec& spec, const QuantTensor3D& image,
                    const KernelTensor4D& kernels, const BiasVector& bias,
                    const RunOptions& options) {
    spec.validate();
    if (image.height() != spec.height || image.width() != spec.width ||
        image.channels() != spec.channels)
        throw ConfigError("image dimensions do not match layer spec");
    if (kernels.kernels() != spec.kernels || kernels.channels() != spec.channels)
        throw ConfigError("kernel dimensions do not match layer spec");
    if (bias.size() != spec.kernels)
        throw ConfigError("bias length does not match K");

    // DMA-in, then bias preload; compute starts after both.
    ImageBankSet image_banks(spec);
    image_banks.load(image);
    WeightBankGrid weight_grid(spec);
    weight_grid.load(kernels);
    OutputBankSet output_banks(spec);
    output_banks.preload_bias(bias);

    if (options.fault)
        weight_grid.corrupt(options.fault->row, options.fault->col,
                            options.fault->addr, options.fault->word);

    const DmaCycles dma = dma_cycles(options.dma, spec);
    const std::uint64_t compute_origin = dma.in + dma.bias;
    const std::uint64_t steps = step_count(spec);
    const auto cores = make_core_array(spec);
    const int kernel_quarter = spec.kernel_quarter();
    const int channel_quarter = spec.channel_quarter();

    RunResult result{PsumTensor3D(spec.out_height(), spec.out_width(), spec.kernels),
                     std::nullopt,
                     {},
                     {},
                     {}};

    std::array<WeightReg, 4> regs{};
    int resident_group = -1;
    int resident_offset = -1;

    for (std::uint64_t s = 0; s < steps; ++s) {
        const StepIndex step = step_from_ordinal(spec, s);
        // Two 8-cycle stages; pipelined, the compute stage of step s shares
        // the window with the load stage of step s+1.
        const std::uint64_t load_base =
            options.pipelined ? compute_origin + 8 * s : compute_origin + 16 * s;
        const std::uint64_t compute_base = load_base + 8;

        if (step.kernel_group != resident_group ||
            step.channel_offset != resident_offset) {
            for (int q = 0; q < 4; ++q) {
                regs[q] = load_weights(weight_grid, q,
                                       q * channel_quarter + step.channel_offset,
                                       step.kernel_group, load_base);
                ++result.audit.weight_loads;
            }
            resident_group = step.kernel_group;
            resident_offset = step.channel_offset;
        }

        std::array<ImageTile, 4> tiles{};
        for (int q = 0; q < 4; ++q)
            tiles[q] = load_tile(image_banks,
                                 q * channel_quarter + step.channel_offset,
                                 step.out_i, step.out_j, load_base);

        const ArrayStepResult step_result =
            array_step(cores, step.channel_offset, tiles, regs);

        // One read-modify-write per kernel slot; slot p always lands in
        // output bank p, so the four RMWs never contend.
        for (int p = 0; p < 4; ++p) {
            const int kernel = p * kernel_quarter + step.kernel_group;
            output_banks.accumulate(kernel, step.out_i, step.out_j,
                                    step_result.delta[p], compute_base + 6,
                                    compute_base + 7);
        }

        if (options.trace_range && s >= options.trace_range->first &&
            s <= options.trace_range->second) {
            TraceRow row{};
            row.cycle = compute_base;
            row.step = s;
            row.kernel_group = step.kernel_group;
            row.channel_offset = step.channel_offset;
            row.out_i = step.out_i;
            row.out_j = step.out_j;
            row.tile0 = tiles[0];
            row.reg0 = regs[0];
            row.psum0 = step_result.psums[0];
            row.delta = step_result.delta;
            result.trace.push_back(row);
        }
    }

    result.psums = output_banks.gather();
    if (spec.requant_shift)
        result.requantized = requantize(result.psums, *spec.requant_shift);

    CycleStats& stats = result.stats;
    stats.dma_in_cycles = dma.in;
    stats.bias_preload_cycles = dma.bias;
    stats.pipeline_fill_cycles = options.pipelined ? 8 : 8 * steps;
    stats.compute_cycles = 8 * steps;
    stats.dma_out_cycles = dma.out;
    stats.total_cycles = stats.dma_in_cycles + stats.bias_preload_cycles +
                         stats.pipeline_fill_cycles + stats.compute_cycles +
                         stats.dma_out_cycles;
    stats.clock_mhz = spec.clock_mhz;
    const Throughput t = throughput(stats, spec);
    stats.latency_s = t.latency_s;
    stats.latency_total_s = static_cast<double>(stats.total_cycles) /
                            (spec.clock_mhz * 1e6);
    stats.gops_psum = t.gops_psum;
    stats.gops_mac = t.gops_mac;

    auto audit_bank = [&result](const BmgBank& bank) {
        result.audit.port_uses += bank.ledger().total_uses();
        if (bank.ledger().peak_uses() > result.audit.port_peak)
            result.audit.port_peak = bank.ledger().peak_uses();
    };
    for (int q = 0; q < 4; ++q) audit_bank(image_banks.bank(q));
    for (int g = 0; g < 4; ++g)
        for (int j = 0; j < 4; ++j) audit_bank(weight_grid.bank(g, j));
    for (int q = 0; q < 4; ++q) audit_bank(output_banks.bank(q));

    return result;
}

}  // namespace convsim
