#include "convsim/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "convsim/golden.hpp"

namespace convsim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

int require_int(const json& j, const char* key) {
    if (!j.contains(key))
        throw ConfigError(std::string("config missing required field \"") + key +
                          "\"");
    if (!j[key].is_number_integer())
        throw ConfigError(std::string("config field \"") + key +
                          "\" must be an integer");
    return j[key].get<int>();
}

std::vector<char> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    return bytes;
}

json read_descriptor(const std::string& path) {
    const std::string sidecar = path + ".json";
    std::ifstream in(sidecar);
    if (!in) throw ConfigError("cannot open tensor descriptor: " + sidecar);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("bad tensor descriptor " + sidecar + ": " + e.what());
    }
    if (!j.contains("dims") || !j.contains("dtype"))
        throw ConfigError("tensor descriptor " + sidecar +
                          " must contain \"dims\" and \"dtype\"");
    return j;
}

void write_descriptor(const std::string& path, const std::vector<int>& dims,
                      const char* dtype) {
    json j;
    j["dims"] = dims;
    j["dtype"] = dtype;
    std::ofstream out(path + ".json");
    if (!out) throw ConfigError("cannot write tensor descriptor: " + path + ".json");
    out << j.dump(2) << "\n";
}

std::vector<std::int8_t> read_i8_payload(const std::string& path,
                                         std::size_t expected) {
    const std::vector<char> bytes = read_file_bytes(path);
    if (bytes.size() != expected)
        throw ConfigError(path + ": expected " + std::to_string(expected) +
                          " bytes, found " + std::to_string(bytes.size()));
    return {bytes.begin(), bytes.end()};
}

std::vector<std::int32_t> read_i32_payload(const std::string& path,
                                           std::size_t expected_words) {
    const std::vector<char> bytes = read_file_bytes(path);
    if (bytes.size() != expected_words * 4)
        throw ConfigError(path + ": expected " + std::to_string(expected_words * 4) +
                          " bytes, found " + std::to_string(bytes.size()));
    std::vector<std::int32_t> words(expected_words);
    for (std::size_t w = 0; w < expected_words; ++w) {
        std::uint32_t u = 0;
        for (int b = 3; b >= 0; --b)
            u = (u << 8) | static_cast<std::uint8_t>(bytes[w * 4 + b]);
        words[w] = static_cast<std::int32_t>(u);
    }
    return words;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    RunConfig config;
    config.spec.height = require_int(j, "H");
    config.spec.width = require_int(j, "W");
    config.spec.channels = require_int(j, "C");
    config.spec.kernels = require_int(j, "K");
    if (j.contains("clock_mhz")) {
        if (!j["clock_mhz"].is_number())
            throw ConfigError("config field \"clock_mhz\" must be a number");
        config.spec.clock_mhz = j["clock_mhz"].get<double>();
    }
    if (j.contains("requant_shift"))
        config.spec.requant_shift = require_int(j, "requant_shift");
    if (j.contains("bank_capacity"))
        config.spec.bank_capacity =
            static_cast<std::uint32_t>(require_int(j, "bank_capacity"));
    if (j.contains("bus_bytes"))
        config.dma.bus_bytes_per_cycle = require_int(j, "bus_bytes");
    if (j.contains("pipelined")) {
        if (!j["pipelined"].is_boolean())
            throw ConfigError("config field \"pipelined\" must be a boolean");
        config.pipelined = j["pipelined"].get<bool>();
    }
    if (j.contains("inputs")) {
        const json& inputs = j["inputs"];
        if (inputs.contains("random_seed")) {
            if (!inputs["random_seed"].is_number_unsigned() &&
                !inputs["random_seed"].is_number_integer())
                throw ConfigError("inputs.random_seed must be an integer");
            config.seed = inputs["random_seed"].get<std::uint64_t>();
        } else {
            for (const char* key : {"image", "kernels", "bias"})
                if (!inputs.contains(key) || !inputs[key].is_string())
                    throw ConfigError(std::string("inputs.") + key +
                                      " path missing (or use random_seed)");
            config.image_path = inputs["image"].get<std::string>();
            config.kernels_path = inputs["kernels"].get<std::string>();
            config.bias_path = inputs["bias"].get<std::string>();
        }
    }
    config.spec.validate();
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

// ---------------------------------------------------------------------------
// Tensor files
// ---------------------------------------------------------------------------

void write_tensor_i8(const std::string& path, const std::vector<std::int8_t>& data,
                     const std::vector<int>& dims) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write tensor file: " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    write_descriptor(path, dims, "i8");
}

void write_tensor_i32(const std::string& path, const std::vector<std::int32_t>& data,
                      const std::vector<int>& dims) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write tensor file: " + path);
    for (std::int32_t word : data) {
        const std::uint32_t u = static_cast<std::uint32_t>(word);
        const char bytes[4] = {static_cast<char>(u & 0xFF),
                               static_cast<char>((u >> 8) & 0xFF),
                               static_cast<char>((u >> 16) & 0xFF),
                               static_cast<char>((u >> 24) & 0xFF)};
        out.write(bytes, 4);
    }
    write_descriptor(path, dims, "i32");
}

QuantTensor3D read_image_file(const std::string& path) {
    const json desc = read_descriptor(path);
    if (desc["dtype"] != "i8")
        throw ConfigError(path + ": image dtype must be i8");
    const auto dims = desc["dims"].get<std::vector<int>>();
    if (dims.size() != 3)
        throw ConfigError(path + ": image dims must be [H, W, C]");
    const auto data = read_i8_payload(
        path, static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
    return QuantTensor3D(dims[0], dims[1], dims[2], data);
}

KernelTensor4D read_kernels_file(const std::string& path) {
    const json desc = read_descriptor(path);
    if (desc["dtype"] != "i8")
        throw ConfigError(path + ": kernel dtype must be i8");
    const auto dims = desc["dims"].get<std::vector<int>>();
    if (dims.size() != 4 || dims[2] != 3 || dims[3] != 3)
        throw ConfigError(path + ": kernel dims must be [K, C, 3, 3]");
    const auto data = read_i8_payload(
        path, static_cast<std::size_t>(dims[0]) * dims[1] * 9);
    return KernelTensor4D(dims[0], dims[1], data);
}

BiasVector read_bias_file(const std::string& path) {
    const json desc = read_descriptor(path);
    if (desc["dtype"] != "i32")
        throw ConfigError(path + ": bias dtype must be i32");
    const auto dims = desc["dims"].get<std::vector<int>>();
    if (dims.size() != 1)
        throw ConfigError(path + ": bias dims must be [K]");
    return BiasVector(read_i32_payload(path, static_cast<std::size_t>(dims[0])));
}

GeneratedInputs load_inputs(const RunConfig& config) {
    if (config.image_path) {
        QuantTensor3D image = read_image_file(*config.image_path);
        KernelTensor4D kernels = read_kernels_file(*config.kernels_path);
        BiasVector bias = read_bias_file(*config.bias_path);
        if (image.height() != config.spec.height ||
            image.width() != config.spec.width ||
            image.channels() != config.spec.channels)
            throw ConfigError("image file dimensions do not match config");
        if (kernels.kernels() != config.spec.kernels ||
            kernels.channels() != config.spec.channels)
            throw ConfigError("kernel file dimensions do not match config");
        if (bias.size() != config.spec.kernels)
            throw ConfigError("bias file length does not match config");
        return {std::move(image), std::move(kernels), std::move(bias)};
    }
    if (config.seed) return generate_inputs(*config.seed, config.spec);
    throw ConfigError("no inputs: provide tensor paths or a random seed");
}

// ---------------------------------------------------------------------------
// Verification and reports
// ---------------------------------------------------------------------------

Verdict compare_psums(const PsumTensor3D& got, const PsumTensor3D& expected) {
    Verdict v;
    for (int k = 0; k < expected.kernels(); ++k)
        for (int i = 0; i < expected.out_height(); ++i)
            for (int j = 0; j < expected.out_width(); ++j)
                if (got.at(k, i, j) != expected.at(k, i, j)) {
                    v.pass = false;
                    v.k = k;
                    v.i = i;
                    v.j = j;
                    v.expected = expected.at(k, i, j);
                    v.got = got.at(k, i, j);
                    return v;
                }
    return v;
}

std::string Report::to_json() const {
    json j;
    j["spec"]["H"] = spec.height;
    j["spec"]["W"] = spec.width;
    j["spec"]["C"] = spec.channels;
    j["spec"]["K"] = spec.kernels;
    j["spec"]["clock_mhz"] = spec.clock_mhz;
    j["spec"]["bank_capacity"] = spec.bank_capacity;
    if (spec.requant_shift)
        j["spec"]["requant_shift"] = *spec.requant_shift;
    j["pipelined"] = pipelined;
    j["bus_bytes"] = bus_bytes;
    j["psum_count"] = psums;
    j["steps"] = steps;
    j["cycles"]["dma_in"] = stats.dma_in_cycles;
    j["cycles"]["bias_preload"] = stats.bias_preload_cycles;
    j["cycles"]["fill"] = stats.pipeline_fill_cycles;
    j["cycles"]["compute"] = stats.compute_cycles;
    j["cycles"]["dma_out"] = stats.dma_out_cycles;
    j["cycles"]["total"] = stats.total_cycles;
    j["latency_s"] = stats.latency_s;
    j["latency_total_s"] = stats.latency_total_s;
    j["gops_psum"] = stats.gops_psum;
    j["gops_mac"] = stats.gops_mac;
    j["audit"]["port_uses"] = audit.port_uses;
    j["audit"]["port_peak"] = audit.port_peak;
    j["audit"]["weight_loads"] = audit.weight_loads;
    if (verdict) {
        j["verify"]["pass"] = verdict->pass;
        if (!verdict->pass) {
            j["verify"]["k"] = verdict->k;
            j["verify"]["i"] = verdict->i;
            j["verify"]["j"] = verdict->j;
            j["verify"]["expected"] = verdict->expected;
            j["verify"]["got"] = verdict->got;
        }
    }
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

namespace {

void dump_bank(const BmgBank& bank, const fs::path& dir) {
    const fs::path bin = dir / (bank.name() + ".bin");
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw ConfigError("cannot write bank dump: " + bin.string());
    const int bytes_per_word = bank.word_width() / 8;
    for (std::int32_t word : bank.storage()) {
        const std::uint32_t u = static_cast<std::uint32_t>(word);
        for (int b = 0; b < bytes_per_word; ++b)
            out.put(static_cast<char>((u >> (8 * b)) & 0xFF));
    }
    json desc;
    desc["depth"] = bank.depth();
    desc["word_width"] = bank.word_width();
    std::ofstream meta(dir / (bank.name() + ".json"));
    meta << desc.dump(2) << "\n";
}

// Rebuilds the bank images for dumping. The run itself does not keep its
// banks alive, and a re-run here would double the simulation time.
void dump_banks_for(const RunConfig& config, const GeneratedInputs& inputs,
                    const RunResult& result) {
    const fs::path dir = fs::path(config.out_dir) / "banks";
    fs::create_directories(dir);
    ImageBankSet image_banks(config.spec);
    image_banks.load(inputs.image);
    WeightBankGrid weight_grid(config.spec);
    weight_grid.load(inputs.kernels);
    OutputBankSet output_banks(config.spec);
    output_banks.preload_bias(inputs.bias);
    // Final output state: replay the computed psums into the output words.
    for (int k = 0; k < config.spec.kernels; ++k)
        for (int i = 0; i < config.spec.out_height(); ++i)
            for (int j = 0; j < config.spec.out_width(); ++j) {
                const BankAddress a = output_map(k, i, j, config.spec);
                output_banks.bank(a.bank).poke(a.addr, result.psums.at(k, i, j));
            }
    for (int q = 0; q < 4; ++q) dump_bank(image_banks.bank(q), dir);
    for (int g = 0; g < 4; ++g)
        for (int j = 0; j < 4; ++j) dump_bank(weight_grid.bank(g, j), dir);
    for (int q = 0; q < 4; ++q) dump_bank(output_banks.bank(q), dir);
}

int run_impl(const RunConfig& config, std::ostream& out, bool emit_trace_file) {
    config.spec.validate();
    if (config.trace_range) {
        const std::uint64_t steps = step_count(config.spec);
        if (config.trace_range->first > config.trace_range->second ||
            config.trace_range->second >= steps)
            throw ConfigError("trace range out of bounds: layer has " +
                              std::to_string(steps) + " steps");
    }

    const GeneratedInputs inputs = load_inputs(config);

    RunOptions options;
    options.pipelined = config.pipelined;
    options.dma = config.dma;
    options.trace_range = config.trace_range;
    options.fault = config.fault;

    const RunResult result =
        run_layer(config.spec, inputs.image, inputs.kernels, inputs.bias, options);

    fs::create_directories(config.out_dir);
    const fs::path out_dir(config.out_dir);

    const std::vector<int> out_dims = {config.spec.out_height(),
                                       config.spec.out_width(),
                                       config.spec.kernels};
    write_tensor_i32((out_dir / "output_psums.bin").string(),
                     result.psums.data(), out_dims);
    if (result.requantized)
        write_tensor_i8((out_dir / "output_requant.bin").string(),
                        result.requantized->data(), out_dims);

    if (emit_trace_file && config.trace_range) {
        std::ofstream trace_out(out_dir / "trace.csv");
        trace_out << trace_to_csv(result.trace);
    }
    if (config.dump_banks) dump_banks_for(config, inputs, result);

    Report report;
    report.spec = config.spec;
    report.pipelined = config.pipelined;
    report.bus_bytes = config.dma.bus_bytes_per_cycle;
    report.psums = psum_count(config.spec);
    report.steps = step_count(config.spec);
    report.stats = result.stats;
    report.audit = result.audit;
    if (config.verify) {
        const PsumTensor3D expected =
            conv2d_layer(inputs.image, inputs.kernels, inputs.bias);
        report.verdict = compare_psums(result.psums, expected);
    }

    const std::string report_json = report.to_json();
    std::ofstream report_out(out_dir / "report.json");
    report_out << report_json << "\n";
    out << report_json << "\n";

    if (report.verdict && !report.verdict->pass) return kExitMismatch;
    return kExitPass;
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out) {
    return run_impl(config, out, /*emit_trace_file=*/true);
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
    RunConfig verified = config;
    verified.verify = true;
    return run_impl(verified, out, /*emit_trace_file=*/true);
}

int cmd_sweep(const std::string& specs_path, std::ostream& csv_out,
              std::ostream& err) {
    std::ifstream in(specs_path);
    if (!in) throw ConfigError("cannot open specs file: " + specs_path);
    json specs;
    try {
        in >> specs;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("specs parse error: ") + e.what());
    }
    if (!specs.is_array())
        throw ConfigError("specs file must contain a JSON array");

    csv_out << "H,W,C,K,steps,compute_cycles,latency_s,gops_psum,gops_mac\n";
    int failures = 0;
    for (std::size_t row = 0; row < specs.size(); ++row) {
        try {
            const RunConfig config = parse_config_text(specs[row].dump());
            const LayerSpec& spec = config.spec;
            CycleStats stats;
            stats.compute_cycles = compute_cycles(spec);
            stats.clock_mhz = spec.clock_mhz;
            const Throughput t = throughput(stats, spec);
            csv_out << spec.height << ',' << spec.width << ',' << spec.channels
                    << ',' << spec.kernels << ',' << step_count(spec) << ','
                    << stats.compute_cycles << ',' << format_double(t.latency_s)
                    << ',' << format_double(t.gops_psum) << ','
                    << format_double(t.gops_mac) << '\n';
        } catch (const ConfigError& e) {
            err << "row " << row << ": " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? kExitPass : kExitConfig;
}

int cmd_trace(const RunConfig& config, std::ostream& csv_out) {
    if (!config.trace_range)
        throw ConfigError("trace command requires a step range (--trace a..b)");
    config.spec.validate();
    const std::uint64_t steps = step_count(config.spec);
    if (config.trace_range->first > config.trace_range->second ||
        config.trace_range->second >= steps)
        throw ConfigError("trace range out of bounds: layer has " +
                          std::to_string(steps) + " steps");

    const GeneratedInputs inputs = load_inputs(config);
    RunOptions options;
    options.pipelined = config.pipelined;
    options.dma = config.dma;
    options.trace_range = config.trace_range;
    options.fault = config.fault;
    const RunResult result =
        run_layer(config.spec, inputs.image, inputs.kernels, inputs.bias, options);
    csv_out << trace_to_csv(result.trace);
    return kExitPass;
}

int cmd_gen(const RunConfig& config, std::ostream& out) {
    config.spec.validate();
    if (!config.seed) throw ConfigError("gen requires --seed");
    const GeneratedInputs inputs = generate_inputs(*config.seed, config.spec);
    fs::create_directories(config.out_dir);
    const fs::path dir(config.out_dir);
    write_tensor_i8((dir / "image.bin").string(), inputs.image.data(),
                    {config.spec.height, config.spec.width, config.spec.channels});
    write_tensor_i8((dir / "kernels.bin").string(), inputs.kernels.data(),
                    {config.spec.kernels, config.spec.channels, 3, 3});
    write_tensor_i32((dir / "bias.bin").string(), inputs.bias.data(),
                     {config.spec.kernels});
    out << "wrote image.bin, kernels.bin, bias.bin to " << config.out_dir << "\n";
    return kExitPass;
}

}  // namespace convsim
