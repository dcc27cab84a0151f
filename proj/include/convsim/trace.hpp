#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "convsim/datapath.hpp"

namespace convsim {

// One trace row per step, mirroring the waveform signals of core 0:
// feature0..feature2 are the tile rows (3 bytes each), weight0..weight3 the
// four loader slots (9 bytes each), psum0..psum3 core 0's partial sums and
// delta0..delta3 the cross-core accumulation deltas.
struct TraceRow {
    std::uint64_t cycle = 0;  // compute-stage start cycle of the step
    std::uint64_t step = 0;
    int kernel_group = 0;
    int channel_offset = 0;
    int out_i = 0;
    int out_j = 0;
    ImageTile tile0{};
    WeightReg reg0{};
    std::array<std::int32_t, 4> psum0{};
    std::array<std::int32_t, 4> delta{};
};

inline constexpr const char* kTraceCsvHeader =
    "cycle,step,kernel_group,channel_offset,out_i,out_j,"
    "feature0,feature1,feature2,weight0,weight1,weight2,weight3,"
    "psum0,psum1,psum2,psum3,delta0,delta1,delta2,delta3";

// Bytes to fixed-width lowercase hex, first byte leftmost ("05f2a1").
std::string hex_bytes(std::span<const std::int8_t> bytes);

// Inverse of hex_bytes; throws ConfigError on odd length or bad digits.
std::vector<std::int8_t> parse_hex_bytes(const std::string& hex);

std::string format_trace_row(const TraceRow& row);

std::string trace_to_csv(const std::vector<TraceRow>& rows);

}  // namespace convsim
