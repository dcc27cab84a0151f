#include "convsim/trace.hpp"

#include <cstdio>

#include "convsim/types.hpp"

namespace convsim {

std::string hex_bytes(std::span<const std::int8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::int8_t b : bytes) {
        const unsigned u = static_cast<std::uint8_t>(b);
        out.push_back(digits[u >> 4]);
        out.push_back(digits[u & 0xF]);
    }
    return out;
}

std::vector<std::int8_t> parse_hex_bytes(const std::string& hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw ConfigError(std::string("bad hex digit '") + c + "'");
    };
    if (hex.size() % 2 != 0)
        throw ConfigError("hex string must have even length");
    std::vector<std::int8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<std::int8_t>((nibble(hex[i]) << 4) |
                                               nibble(hex[i + 1])));
    return out;
}

std::string format_trace_row(const TraceRow& row) {
    char head[160];
    std::snprintf(head, sizeof(head), "%llu,%llu,%d,%d,%d,%d",
                  static_cast<unsigned long long>(row.cycle),
                  static_cast<unsigned long long>(row.step), row.kernel_group,
                  row.channel_offset, row.out_i, row.out_j);
    std::string out = head;
    for (int r = 0; r < 3; ++r) {
        out.push_back(',');
        out += hex_bytes(std::span<const std::int8_t>(row.tile0.data() + 3 * r, 3));
    }
    for (int p = 0; p < 4; ++p) {
        out.push_back(',');
        out += hex_bytes(row.reg0[p]);
    }
    char num[16];
    for (int p = 0; p < 4; ++p) {
        std::snprintf(num, sizeof(num), ",%d", row.psum0[p]);
        out += num;
    }
    for (int p = 0; p < 4; ++p) {
        std::snprintf(num, sizeof(num), ",%d", row.delta[p]);
        out += num;
    }
    return out;
}

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
    std::string out = kTraceCsvHeader;
    out.push_back('\n');
    for (const TraceRow& row : rows) {
        out += format_trace_row(row);
        out.push_back('\n');
    }
    return out;
}

}  // namespace convsim
