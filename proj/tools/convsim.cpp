// Command-line front end: numbers-in / numbers-out harness around the
// layer simulator. See README for the config schema and file formats.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "convsim/harness.hpp"

namespace {

using convsim::ConfigError;
using convsim::RunConfig;

struct CommonArgs {
    std::string config_path;
    int height = 0, width = 0, channels = 0, kernels = 0;
    std::string clock;
    int requant_shift = 0;
    bool no_pipeline = false;
    int bus_bytes = 0;
    std::uint64_t bank_capacity = 0;
    std::uint64_t seed = 0;
    std::string image, weights, bias;
    std::string trace_spec;
    std::string out_dir;
    std::string corrupt;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("-H,--height", args.height, "input feature map height");
    cmd->add_option("-W,--width", args.width, "input feature map width");
    cmd->add_option("-C,--channels", args.channels,
                    "input channels (multiple of 4)");
    cmd->add_option("-K,--kernels", args.kernels, "kernel count (multiple of 4)");
    cmd->add_option("--clock", args.clock,
                    "clock in MHz, or preset z7020-400 | z7020-484 | zu3eg");
    cmd->add_option("--requant-shift", args.requant_shift,
                    "shift-saturate output stage, shift in [0, 31]");
    cmd->add_flag("--no-pipeline", args.no_pipeline,
                  "serialize the load and compute stages (debug)");
    cmd->add_option("--bus-bytes", args.bus_bytes, "DMA bus bytes per cycle");
    cmd->add_option("--bank-capacity", args.bank_capacity,
                    "words per image bank");
    cmd->add_option("--seed", args.seed, "generate inputs from this seed");
    cmd->add_option("--image", args.image, "image tensor file");
    cmd->add_option("--kernels-file", args.weights, "kernel tensor file");
    cmd->add_option("--bias", args.bias, "bias tensor file");
    cmd->add_option("--trace", args.trace_spec, "step range to trace, from..to");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--corrupt-weight", args.corrupt,
                    "debug fault: overwrite weight bank word, g,j,addr,word")
        ->group("");  // hidden
}

std::pair<std::uint64_t, std::uint64_t> parse_trace_range(const std::string& s) {
    const auto sep = s.find("..");
    if (sep == std::string::npos)
        throw ConfigError("trace range must be from..to, e.g. 0..15");
    try {
        const std::uint64_t from = std::stoull(s.substr(0, sep));
        const std::uint64_t to = std::stoull(s.substr(sep + 2));
        return {from, to};
    } catch (const std::exception&) {
        throw ConfigError("trace range must be from..to, e.g. 0..15");
    }
}

convsim::WeightFault parse_fault(const std::string& s) {
    convsim::WeightFault fault;
    unsigned g = 0, j = 0;
    long addr = 0, word = 0;
    if (std::sscanf(s.c_str(), "%u,%u,%ld,%ld", &g, &j, &addr, &word) != 4)
        throw ConfigError("--corrupt-weight expects g,j,addr,word");
    fault.row = static_cast<int>(g);
    fault.col = static_cast<int>(j);
    fault.addr = static_cast<std::uint32_t>(addr);
    fault.word = static_cast<std::int32_t>(word);
    return fault;
}

RunConfig build_config(const CLI::App* cmd, const CommonArgs& args) {
    RunConfig config;
    if (cmd->count("--config")) {
        config = convsim::parse_config_file(args.config_path);
    } else {
        for (const char* flag : {"--height", "--width", "--channels", "--kernels"})
            if (!cmd->count(flag))
                throw ConfigError(std::string(flag) +
                                  " required when no --config is given");
        config.spec.height = args.height;
        config.spec.width = args.width;
        config.spec.channels = args.channels;
        config.spec.kernels = args.kernels;
    }
    if (cmd->count("--height")) config.spec.height = args.height;
    if (cmd->count("--width")) config.spec.width = args.width;
    if (cmd->count("--channels")) config.spec.channels = args.channels;
    if (cmd->count("--kernels")) config.spec.kernels = args.kernels;
    if (cmd->count("--clock")) {
        if (const auto preset = convsim::clock_preset_mhz(args.clock)) {
            config.spec.clock_mhz = *preset;
        } else {
            try {
                config.spec.clock_mhz = std::stod(args.clock);
            } catch (const std::exception&) {
                throw ConfigError("unknown clock preset: " + args.clock);
            }
        }
    }
    if (cmd->count("--requant-shift")) config.spec.requant_shift = args.requant_shift;
    if (cmd->count("--bank-capacity"))
        config.spec.bank_capacity = static_cast<std::uint32_t>(args.bank_capacity);
    if (args.no_pipeline) config.pipelined = false;
    if (cmd->count("--bus-bytes")) config.dma.bus_bytes_per_cycle = args.bus_bytes;
    if (cmd->count("--seed")) config.seed = args.seed;
    if (cmd->count("--image")) config.image_path = args.image;
    if (cmd->count("--kernels-file")) config.kernels_path = args.weights;
    if (cmd->count("--bias")) config.bias_path = args.bias;
    if (cmd->count("--trace")) config.trace_range = parse_trace_range(args.trace_spec);
    if (cmd->count("--out")) config.out_dir = args.out_dir;
    if (cmd->count("--corrupt-weight")) config.fault = parse_fault(args.corrupt);
    config.spec.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cycle-level simulator of a 4-core convolution IP"};
    app.require_subcommand(1);

    CommonArgs run_args, verify_args, trace_args, gen_args;
    bool run_verify = false, run_dump_banks = false;
    std::string sweep_specs, sweep_out;

    CLI::App* run_cmd = app.add_subcommand("run", "simulate one layer");
    add_common_options(run_cmd, run_args);
    run_cmd->add_flag("--verify", run_verify,
                      "also run the reference convolution and compare");
    run_cmd->add_flag("--dump-banks", run_dump_banks,
                      "dump bank images under <out>/banks/");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "simulate and compare against the reference");
    add_common_options(verify_cmd, verify_args);

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "cycle/throughput table for a list of specs");
    sweep_cmd->add_option("specs", sweep_specs, "JSON array of layer specs")
        ->required();
    sweep_cmd->add_option("--out", sweep_out, "CSV output file (default stdout)");

    CLI::App* trace_cmd =
        app.add_subcommand("trace", "emit per-step waveform rows as CSV");
    add_common_options(trace_cmd, trace_args);

    CLI::App* gen_cmd =
        app.add_subcommand("gen", "write deterministic random input tensors");
    add_common_options(gen_cmd, gen_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return convsim::kExitConfig;
    }

    try {
        if (run_cmd->parsed()) {
            RunConfig config = build_config(run_cmd, run_args);
            config.verify = run_verify;
            config.dump_banks = run_dump_banks;
            return convsim::cmd_run(config, std::cout);
        }
        if (verify_cmd->parsed()) {
            const RunConfig config = build_config(verify_cmd, verify_args);
            return convsim::cmd_verify(config, std::cout);
        }
        if (sweep_cmd->parsed()) {
            if (!sweep_out.empty()) {
                std::ofstream out(sweep_out);
                if (!out) throw ConfigError("cannot write " + sweep_out);
                return convsim::cmd_sweep(sweep_specs, out, std::cerr);
            }
            return convsim::cmd_sweep(sweep_specs, std::cout, std::cerr);
        }
        if (trace_cmd->parsed()) {
            const RunConfig config = build_config(trace_cmd, trace_args);
            return convsim::cmd_trace(config, std::cout);
        }
        if (gen_cmd->parsed()) {
            const RunConfig config = build_config(gen_cmd, gen_args);
            return convsim::cmd_gen(config, std::cout);
        }
    } catch (const convsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return convsim::kExitConfig;
    } catch (const convsim::StructuralError& e) {
        std::cerr << "structural error: " << e.what() << "\n";
        return convsim::kExitStructural;
    }
    return convsim::kExitConfig;
}
