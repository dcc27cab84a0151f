#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "convsim/pipeline.hpp"
#include "convsim/prng.hpp"

namespace convsim {

// ---------------------------------------------------------------------------
// Front-end plumbing: config parsing, tensor files, reports and the five
// commands (run / verify / sweep / trace / gen). Identical configs and
// inputs produce byte-identical outputs and reports.
//
// Tensor files are header-less little-endian binaries with a JSON sidecar
// at <path>.json holding {"dims": [...], "dtype": "i8"|"i32"}; layouts are
// the in-memory layouts documented in tensor.hpp.
// ---------------------------------------------------------------------------

struct RunConfig {
    LayerSpec spec;
    bool pipelined = true;
    DmaModel dma{};
    std::optional<std::uint64_t> seed;
    std::optional<std::string> image_path;
    std::optional<std::string> kernels_path;
    std::optional<std::string> bias_path;
    std::string out_dir = ".";
    std::optional<std::pair<std::uint64_t, std::uint64_t>> trace_range;
    bool verify = false;
    bool dump_banks = false;
    std::optional<WeightFault> fault;  // debug hook, see --corrupt-weight
};

// Parses the config JSON schema (H, W, C, K; optional clock_mhz,
// requant_shift, bank_capacity, bus_bytes, pipelined; inputs as either
// {"image","kernels","bias"} paths or {"random_seed"}). Throws ConfigError
// naming the offending field.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Tensor file I/O.
void write_tensor_i8(const std::string& path, const std::vector<std::int8_t>& data,
                     const std::vector<int>& dims);
void write_tensor_i32(const std::string& path, const std::vector<std::int32_t>& data,
                      const std::vector<int>& dims);
QuantTensor3D read_image_file(const std::string& path);
KernelTensor4D read_kernels_file(const std::string& path);
BiasVector read_bias_file(const std::string& path);

// Inputs per config: read from paths, or generate deterministically from the
// seed. Exactly one of the two must be configured.
GeneratedInputs load_inputs(const RunConfig& config);

struct Verdict {
    bool pass = true;
    // First mismatch, (k, i, j) scan order.
    int k = 0, i = 0, j = 0;
    std::int32_t expected = 0;
    std::int32_t got = 0;
};

Verdict compare_psums(const PsumTensor3D& got, const PsumTensor3D& expected);

struct Report {
    LayerSpec spec;
    bool pipelined = true;
    int bus_bytes = 4;
    std::uint64_t psums = 0;
    std::uint64_t steps = 0;
    CycleStats stats;
    RunAudit audit;
    std::optional<Verdict> verdict;

    std::string to_json() const;  // sorted keys, deterministic
};

// Exit codes: 0 success/pass, 1 verification mismatch, 2 configuration
// error, 3 structural simulation error. cmd_* return the code; the CLI
// maps thrown ConfigError/StructuralError to 2/3.
inline constexpr int kExitPass = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStructural = 3;

// Simulates the layer, writes the output tensor and report.json into
// out_dir (plus trace.csv / bank dumps when requested).
int cmd_run(const RunConfig& config, std::ostream& out);

// cmd_run with verification forced on.
int cmd_verify(const RunConfig& config, std::ostream& out);

// One CSV row per spec in the JSON-array file; invalid rows are reported to
// `err` and skipped.
int cmd_sweep(const std::string& specs_path, std::ostream& csv_out,
              std::ostream& err);

int cmd_trace(const RunConfig& config, std::ostream& csv_out);

// Writes image.bin / kernels.bin / bias.bin (+ sidecars) into out_dir.
int cmd_gen(const RunConfig& config, std::ostream& out);

}  // namespace convsim
