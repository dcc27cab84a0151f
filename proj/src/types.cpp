#include "convsim/types.hpp"

#include <cstdint>

namespace convsim {

std::optional<double> clock_preset_mhz(const std::string& name) {
    if (name == "z7020-400") return kClockZ7020Clg400Mhz;
    if (name == "z7020-484") return kClockZ7020Clg484Mhz;
    if (name == "zu3eg") return kClockZu3egMhz;
    return std::nullopt;
}

void LayerSpec::validate() const {
    if (height < 3) throw ConfigError("H >= 3 required");
    if (width < 3) throw ConfigError("W >= 3 required");
    if (channels < 4 || channels % 4 != 0)
        throw ConfigError("C must be a multiple of 4");
    if (kernels < 4 || kernels % 4 != 0)
        throw ConfigError("K must be a multiple of 4");
    // 9*C*127*128 must stay below 2^31 for exact 32-bit accumulation.
    if (channels > 8192) throw ConfigError("C must be <= 8192");
    if (clock_mhz <= 0.0) throw ConfigError("clock_mhz must be positive");
    if (requant_shift && (*requant_shift < 0 || *requant_shift > 31))
        throw ConfigError("requant_shift must lie in [0, 31]");
    const std::uint64_t quarter_words = static_cast<std::uint64_t>(height) *
                                        width * (channels / 4);
    if (quarter_words > bank_capacity)
        throw ConfigError(
            "image exceeds bank capacity: H*W*(C/4) = " +
            std::to_string(quarter_words) + " > B = " +
            std::to_string(bank_capacity));
}

}  // namespace convsim
