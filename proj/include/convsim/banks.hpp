#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "convsim/tensor.hpp"
#include "convsim/types.hpp"

namespace convsim {

// ---------------------------------------------------------------------------
// BMG memory pool model: a bank is a word-addressed array with two ports.
// Any mix of two reads/writes may land in one cycle; a third use is a
// structural error. A read concurrent with a same-address write returns the
// pre-write value (read-before-write).
//
// DMA-phase traffic (tensor load, bias preload, result drain) moves data in
// bulk and is costed by the DMA cycle model instead of the port ledger; the
// ledger audits the pipelined compute loop, where port contention is
// actually possible.
// ---------------------------------------------------------------------------

// Per-bank port accounting. Cycles arrive in roughly increasing order, so a
// sliding window of recent cycles is enough; revisiting a cycle evicted from
// the window would itself be a scheduling bug.
class PortLedger {
public:
    static constexpr int kMaxUsesPerCycle = 2;
    static constexpr int kWindow = 64;

    // Records one port use; throws StructuralError on the third use in a
    // cycle, naming `owner`.
    void record(std::uint64_t cycle, const std::string& owner);

    std::uint64_t total_uses() const { return total_uses_; }
    std::uint64_t cycles_touched() const { return cycles_touched_; }
    int peak_uses() const { return peak_uses_; }

private:
    struct Slot {
        std::uint64_t cycle = ~0ull;
        int uses = 0;
    };
    std::array<Slot, kWindow> window_{};
    std::uint64_t total_uses_ = 0;
    std::uint64_t cycles_touched_ = 0;
    int peak_uses_ = 0;
};

class BmgBank {
public:
    BmgBank(std::uint32_t depth, int word_width_bits, std::string name);

    std::uint32_t depth() const { return depth_; }
    int word_width() const { return word_width_; }
    const std::string& name() const { return name_; }

    // Ledgered dual-port accesses.
    std::int32_t read(std::uint32_t addr, std::uint64_t cycle);
    void write(std::uint32_t addr, std::int32_t word, std::uint64_t cycle);

    // Read-modify-write of one accumulation delta. The read and the write
    // must land on distinct cycles of the step (cycle_read < cycle_write).
    void accumulate(std::uint32_t addr, std::int32_t delta,
                    std::uint64_t cycle_read, std::uint64_t cycle_write);

    // DMA-phase accesses: no port accounting.
    std::int32_t peek(std::uint32_t addr) const;
    void poke(std::uint32_t addr, std::int32_t word);

    const PortLedger& ledger() const { return ledger_; }
    const std::vector<std::int32_t>& storage() const { return storage_; }

private:
    void check_addr(std::uint32_t addr) const;

    std::uint32_t depth_;
    int word_width_;
    std::string name_;
    std::vector<std::int32_t> storage_;
    PortLedger ledger_;

    // Same-cycle write shadow for read-before-write ordering.
    struct ShadowWrite {
        std::uint32_t addr;
        std::int32_t old_word;
    };
    std::uint64_t shadow_cycle_ = ~0ull;
    std::vector<ShadowWrite> shadow_;
};

// ---------------------------------------------------------------------------
// Address maps. Channels, kernels and output channels are split into four
// contiguous quarters; within a bank, words are laid out channel-major then
// row-major so that a layer's output can be re-consumed as the next layer's
// input without reshuffling.
// ---------------------------------------------------------------------------

struct BankAddress {
    int bank;
    std::uint32_t addr;
    bool operator==(const BankAddress&) const = default;
};

struct WeightBankAddress {
    int row;  // channel quarter g
    int col;  // kernel quarter j
    std::uint32_t addr;
    bool operator==(const WeightBankAddress&) const = default;
};

// bank = c / (C/4),  addr = (c mod C/4)*H*W + i*W + j
BankAddress image_map(int c, int i, int j, const LayerSpec& spec);

// row = c / (C/4),  col = k / (K/4),
// addr = ((k mod K/4)*(C/4) + (c mod C/4))*9 + m*3 + n
WeightBankAddress weight_map(int k, int c, int m, int n, const LayerSpec& spec);

// bank = k / (K/4),  addr = (k mod K/4)*OutH*OutW + i*OutW + j
BankAddress output_map(int k, int i, int j, const LayerSpec& spec);

// ---------------------------------------------------------------------------
// Bank sets.
// ---------------------------------------------------------------------------

// Four 8-bit banks, one channel quarter each, `bank_capacity` words deep.
// Addresses past H*W*(C/4) are redundant slots and are never read.
class ImageBankSet {
public:
    explicit ImageBankSet(const LayerSpec& spec);

    void load(const QuantTensor3D& image);
    QuantTensor3D gather() const;

    std::int32_t read(int c, int i, int j, std::uint64_t cycle);

    BmgBank& bank(int q) { return banks_[q]; }
    const BmgBank& bank(int q) const { return banks_[q]; }
    const LayerSpec& spec() const { return spec_; }

private:
    LayerSpec spec_;
    std::vector<BmgBank> banks_;
};

// 4x4 grid of 8-bit banks; bank (g, j) holds channel quarter g of kernel
// quarter j. The four kernels processed together always come from the four
// distinct banks of one row, so one read port per bank suffices.
class WeightBankGrid {
public:
    explicit WeightBankGrid(const LayerSpec& spec);

    void load(const KernelTensor4D& kernels);

    std::int32_t read(int k, int c, int m, int n, std::uint64_t cycle);

    BmgBank& bank(int g, int j) { return banks_[g * 4 + j]; }
    const BmgBank& bank(int g, int j) const { return banks_[g * 4 + j]; }
    const LayerSpec& spec() const { return spec_; }

    // Debug fault hook: overwrite one word, bypassing the ledger.
    void corrupt(int g, int j, std::uint32_t addr, std::int32_t word);

private:
    LayerSpec spec_;
    std::vector<BmgBank> banks_;
};

// Four 32-bit banks mirroring the image layout, so output channel quarters
// line up with the next layer's input quarters. Bias is preloaded into every
// output word before compute; accumulation then folds it in for free.
class OutputBankSet {
public:
    explicit OutputBankSet(const LayerSpec& spec);

    void preload_bias(const BiasVector& bias);
    PsumTensor3D gather() const;

    void accumulate(int k, int i, int j, std::int32_t delta,
                    std::uint64_t cycle_read, std::uint64_t cycle_write);

    BmgBank& bank(int q) { return banks_[q]; }
    const BmgBank& bank(int q) const { return banks_[q]; }
    const LayerSpec& spec() const { return spec_; }

private:
    LayerSpec spec_;
    std::vector<BmgBank> banks_;
};

}  // namespace convsim
