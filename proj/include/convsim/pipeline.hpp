#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "convsim/golden.hpp"
#include "convsim/tensor.hpp"
#include "convsim/trace.hpp"
#include "convsim/types.hpp"

namespace convsim {

// ---------------------------------------------------------------------------
// Schedule: kernel group -> channel offset -> row-major spatial sweep.
// Weight registers change only at (kernel_group, channel_offset) boundaries,
// so weights stay resident across each spatial sweep.
// ---------------------------------------------------------------------------

struct StepIndex {
    int kernel_group;    // in [0, K/4)
    int channel_offset;  // in [0, C/4)
    int out_i;           // in [0, OutH)
    int out_j;           // in [0, OutW)
    bool operator==(const StepIndex&) const = default;
};

std::uint64_t step_count(const LayerSpec& spec);

// Decodes the canonical order: ordinal = ((k*(C/4) + c_off)*OutH + i)*OutW + j.
StepIndex step_from_ordinal(const LayerSpec& spec, std::uint64_t ordinal);

std::vector<StepIndex> enumerate_steps(const LayerSpec& spec);

// ---------------------------------------------------------------------------
// Cycle accounting.
// ---------------------------------------------------------------------------

// Fixed bytes-per-cycle bus between host memory and the banks.
struct DmaModel {
    int bus_bytes_per_cycle = 4;
};

struct DmaCycles {
    std::uint64_t in;    // image + weight transfer
    std::uint64_t bias;  // bias word replicated into every output element
    std::uint64_t out;   // result drain
};

DmaCycles dma_cycles(const DmaModel& model, const LayerSpec& spec);

// Steady-state compute cycles: 8 per step; equivalently psum_count/2, since
// the array retires 16 psums per 8-cycle step.
std::uint64_t compute_cycles(const LayerSpec& spec);

struct CycleStats {
    std::uint64_t dma_in_cycles = 0;
    std::uint64_t bias_preload_cycles = 0;
    // Exposed load-stage cycles: 8 with pipelining (one fill step),
    // 8*steps without (every load serialized).
    std::uint64_t pipeline_fill_cycles = 0;
    std::uint64_t compute_cycles = 0;  // steady-state, steps*8
    std::uint64_t dma_out_cycles = 0;
    std::uint64_t total_cycles = 0;
    double clock_mhz = 0.0;

    // Derived, see throughput(). latency_s follows the compute-only
    // convention; latency_total_s covers DMA, preload and fill as well.
    double latency_s = 0.0;
    double latency_total_s = 0.0;
    double gops_psum = 0.0;
    double gops_mac = 0.0;
};

struct Throughput {
    double latency_s;
    double gops_psum;  // 10^9 psums per second
    double gops_mac;   // 2 ops per MAC, 9 MACs per psum: 18x gops_psum
};

// Latency from compute cycles alone; GOPS figures derived from psum_count.
Throughput throughput(const CycleStats& stats, const LayerSpec& spec);

// Linear scaling across independent IP instances.
double scale_cores(double gops_psum, int n_instances);

// ---------------------------------------------------------------------------
// Full-layer simulation.
// ---------------------------------------------------------------------------

struct WeightFault {
    int row = 0;
    int col = 0;
    std::uint32_t addr = 0;
    std::int32_t word = 0;
};

struct RunOptions {
    bool pipelined = true;
    DmaModel dma{};
    // Inclusive step-ordinal range to trace.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> trace_range;
    // Debug hook: overwrite one weight-bank word after DMA-in.
    std::optional<WeightFault> fault;
};

// Audit counters accumulated over a run.
struct RunAudit {
    std::uint64_t port_uses = 0;
    int port_peak = 0;           // per-bank per-cycle maximum observed
    std::uint64_t weight_loads = 0;  // loader fills; 4*(K/4)*(C/4) expected
};

struct RunResult {
    PsumTensor3D psums;
    std::optional<QuantTensor3D> requantized;  // set when spec.requant_shift
    CycleStats stats;
    std::vector<TraceRow> trace;
    RunAudit audit;
};

// Runs the banked, pipelined simulation of one layer. The output equals
// conv2d_layer(image, kernels, bias) exactly; any port-budget or address
// violation surfaces as StructuralError.
RunResult run_layer(const LayerSpec& spec, const QuantTensor3D& image,
                    const KernelTensor4D& kernels, const BiasVector& bias,
                    const RunOptions& options = {});

}  // namespace convsim
