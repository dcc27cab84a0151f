#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace convsim {

// ---------------------------------------------------------------------------
// Error categories. ConfigError covers bad user input (CLI exit code 2),
// StructuralError covers internal model violations such as port-budget
// overruns or out-of-range bank addresses (CLI exit code 3).
// ---------------------------------------------------------------------------
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : SimError {
    using SimError::SimError;
};

struct StructuralError : SimError {
    using SimError::SimError;
};

// ---------------------------------------------------------------------------
// Clock presets, MHz. Max operating frequencies of the supported devices.
// ---------------------------------------------------------------------------
inline constexpr double kClockZ7020Clg400Mhz = 112.0;
inline constexpr double kClockZ7020Clg484Mhz = 93.0;
inline constexpr double kClockZu3egMhz = 161.0;

std::optional<double> clock_preset_mhz(const std::string& name);

// Words per image bank. Default sizes the pool for a 224x224x8 feature map
// (224*224*2 words per bank); smaller layers leave redundant slots.
inline constexpr std::uint32_t kDefaultBankCapacity = 100352;

// ---------------------------------------------------------------------------
// LayerSpec: one convolution layer as the IP core sees it.
//   - C and K must be multiples of 4 (channel/kernel quarters).
//   - The image quarter H*W*(C/4) must fit one bank.
//   - requant_shift, when set, enables the shift-saturate output stage.
// ---------------------------------------------------------------------------
struct LayerSpec {
    int height = 0;
    int width = 0;
    int channels = 0;
    int kernels = 0;
    double clock_mhz = kClockZ7020Clg400Mhz;
    std::optional<int> requant_shift;
    std::uint32_t bank_capacity = kDefaultBankCapacity;

    int out_height() const { return height - 2; }
    int out_width() const { return width - 2; }
    int channel_quarter() const { return channels / 4; }
    int kernel_quarter() const { return kernels / 4; }

    // Throws ConfigError naming the offending field.
    void validate() const;
};

}  // namespace convsim
