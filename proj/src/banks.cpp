#include "convsim/banks.hpp"

#include <string>

namespace convsim {

// ---------------------------------------------------------------------------
// PortLedger
// ---------------------------------------------------------------------------

void PortLedger::record(std::uint64_t cycle, const std::string& owner) {
    Slot& slot = window_[cycle % kWindow];
    if (slot.cycle != cycle) {
        slot.cycle = cycle;
        slot.uses = 0;
        ++cycles_touched_;
    }
    ++slot.uses;
    ++total_uses_;
    if (slot.uses > peak_uses_) peak_uses_ = slot.uses;
    if (slot.uses > kMaxUsesPerCycle)
        throw StructuralError("port budget exceeded: " + owner + " used " +
                              std::to_string(slot.uses) + " ports in cycle " +
                              std::to_string(cycle));
}

// ---------------------------------------------------------------------------
// BmgBank
// ---------------------------------------------------------------------------

BmgBank::BmgBank(std::uint32_t depth, int word_width_bits, std::string name)
    : depth_(depth), word_width_(word_width_bits), name_(std::move(name)),
      storage_(depth, 0) {}

void BmgBank::check_addr(std::uint32_t addr) const {
    if (addr >= depth_)
        throw StructuralError(name_ + ": address " + std::to_string(addr) +
                              " out of range (depth " + std::to_string(depth_) +
                              ")");
}

std::int32_t BmgBank::read(std::uint32_t addr, std::uint64_t cycle) {
    check_addr(addr);
    ledger_.record(cycle, name_);
    if (cycle == shadow_cycle_) {
        // Same-cycle write to this address: return the pre-write value.
        for (const ShadowWrite& w : shadow_)
            if (w.addr == addr) return w.old_word;
    }
    return storage_[addr];
}

void BmgBank::write(std::uint32_t addr, std::int32_t word, std::uint64_t cycle) {
    check_addr(addr);
    ledger_.record(cycle, name_);
    if (cycle != shadow_cycle_) {
        shadow_cycle_ = cycle;
        shadow_.clear();
    }
    shadow_.push_back({addr, storage_[addr]});
    storage_[addr] = word;
}

void BmgBank::accumulate(std::uint32_t addr, std::int32_t delta,
                         std::uint64_t cycle_read, std::uint64_t cycle_write) {
    if (cycle_read >= cycle_write)
        throw StructuralError(name_ + ": accumulate read cycle " +
                              std::to_string(cycle_read) +
                              " must precede write cycle " +
                              std::to_string(cycle_write));
    const std::int32_t old = read(addr, cycle_read);
    write(addr, old + delta, cycle_write);
}

std::int32_t BmgBank::peek(std::uint32_t addr) const {
    check_addr(addr);
    return storage_[addr];
}

void BmgBank::poke(std::uint32_t addr, std::int32_t word) {
    check_addr(addr);
    storage_[addr] = word;
}

// ---------------------------------------------------------------------------
// Address maps
// ---------------------------------------------------------------------------

namespace {

void check_range(int v, int bound, const char* what) {
    if (v < 0 || v >= bound)
        throw StructuralError(std::string(what) + " index " + std::to_string(v) +
                              " out of range [0, " + std::to_string(bound) + ")");
}

}  // namespace

BankAddress image_map(int c, int i, int j, const LayerSpec& spec) {
    check_range(c, spec.channels, "channel");
    check_range(i, spec.height, "row");
    check_range(j, spec.width, "col");
    const int quarter = spec.channel_quarter();
    return {c / quarter,
            static_cast<std::uint32_t>((c % quarter) * spec.height * spec.width +
                                       i * spec.width + j)};
}

WeightBankAddress weight_map(int k, int c, int m, int n, const LayerSpec& spec) {
    check_range(k, spec.kernels, "kernel");
    check_range(c, spec.channels, "channel");
    check_range(m, 3, "kernel row");
    check_range(n, 3, "kernel col");
    const int cq = spec.channel_quarter();
    const int kq = spec.kernel_quarter();
    return {c / cq, k / kq,
            static_cast<std::uint32_t>(((k % kq) * cq + (c % cq)) * 9 + m * 3 + n)};
}

BankAddress output_map(int k, int i, int j, const LayerSpec& spec) {
    check_range(k, spec.kernels, "kernel");
    check_range(i, spec.out_height(), "row");
    check_range(j, spec.out_width(), "col");
    const int quarter = spec.kernel_quarter();
    return {k / quarter,
            static_cast<std::uint32_t>((k % quarter) * spec.out_height() *
                                           spec.out_width() +
                                       i * spec.out_width() + j)};
}

// ---------------------------------------------------------------------------
// ImageBankSet
// ---------------------------------------------------------------------------

ImageBankSet::ImageBankSet(const LayerSpec& spec) : spec_(spec) {
    spec_.validate();
    banks_.reserve(4);
    for (int q = 0; q < 4; ++q)
        banks_.emplace_back(spec.bank_capacity, 8, "image_bank" + std::to_string(q));
}

void ImageBankSet::load(const QuantTensor3D& image) {
    if (image.height() != spec_.height || image.width() != spec_.width ||
        image.channels() != spec_.channels)
        throw ConfigError("image dimensions do not match layer spec");
    for (int c = 0; c < spec_.channels; ++c)
        for (int i = 0; i < spec_.height; ++i)
            for (int j = 0; j < spec_.width; ++j) {
                const BankAddress a = image_map(c, i, j, spec_);
                banks_[a.bank].poke(a.addr, image.at(c, i, j));
            }
}

QuantTensor3D ImageBankSet::gather() const {
    QuantTensor3D out(spec_.height, spec_.width, spec_.channels);
    for (int c = 0; c < spec_.channels; ++c)
        for (int i = 0; i < spec_.height; ++i)
            for (int j = 0; j < spec_.width; ++j) {
                const BankAddress a = image_map(c, i, j, spec_);
                out.at(c, i, j) = static_cast<std::int8_t>(banks_[a.bank].peek(a.addr));
            }
    return out;
}

std::int32_t ImageBankSet::read(int c, int i, int j, std::uint64_t cycle) {
    const BankAddress a = image_map(c, i, j, spec_);
    return banks_[a.bank].read(a.addr, cycle);
}

// ---------------------------------------------------------------------------
// WeightBankGrid
// ---------------------------------------------------------------------------

WeightBankGrid::WeightBankGrid(const LayerSpec& spec) : spec_(spec) {
    spec_.validate();
    const std::uint32_t depth = static_cast<std::uint32_t>(
        spec.kernel_quarter() * spec.channel_quarter() * 9);
    banks_.reserve(16);
    for (int g = 0; g < 4; ++g)
        for (int j = 0; j < 4; ++j)
            banks_.emplace_back(depth, 8, "weight_bank" + std::to_string(g) +
                                              std::to_string(j));
}

void WeightBankGrid::load(const KernelTensor4D& kernels) {
    if (kernels.kernels() != spec_.kernels || kernels.channels() != spec_.channels)
        throw ConfigError("kernel dimensions do not match layer spec");
    for (int k = 0; k < spec_.kernels; ++k)
        for (int c = 0; c < spec_.channels; ++c)
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n) {
                    const WeightBankAddress a = weight_map(k, c, m, n, spec_);
                    bank(a.row, a.col).poke(a.addr, kernels.at(k, c, m, n));
                }
}

std::int32_t WeightBankGrid::read(int k, int c, int m, int n, std::uint64_t cycle) {
    const WeightBankAddress a = weight_map(k, c, m, n, spec_);
    return bank(a.row, a.col).read(a.addr, cycle);
}

void WeightBankGrid::corrupt(int g, int j, std::uint32_t addr, std::int32_t word) {
    if (g < 0 || g >= 4 || j < 0 || j >= 4)
        throw ConfigError("corrupt: bank coordinates must lie in [0, 4)");
    bank(g, j).poke(addr, word);
}

// ---------------------------------------------------------------------------
// OutputBankSet
// ---------------------------------------------------------------------------

OutputBankSet::OutputBankSet(const LayerSpec& spec) : spec_(spec) {
    spec_.validate();
    const std::uint32_t depth = static_cast<std::uint32_t>(
        spec.kernel_quarter() * spec.out_height() * spec.out_width());
    banks_.reserve(4);
    for (int q = 0; q < 4; ++q)
        banks_.emplace_back(depth, 32, "output_bank" + std::to_string(q));
}

void OutputBankSet::preload_bias(const BiasVector& bias) {
    if (bias.size() != spec_.kernels)
        throw ConfigError("bias length " + std::to_string(bias.size()) +
                          " does not match K = " + std::to_string(spec_.kernels));
    for (int k = 0; k < spec_.kernels; ++k)
        for (int i = 0; i < spec_.out_height(); ++i)
            for (int j = 0; j < spec_.out_width(); ++j) {
                const BankAddress a = output_map(k, i, j, spec_);
                banks_[a.bank].poke(a.addr, bias.at(k));
            }
}

PsumTensor3D OutputBankSet::gather() const {
    PsumTensor3D out(spec_.out_height(), spec_.out_width(), spec_.kernels);
    for (int k = 0; k < spec_.kernels; ++k)
        for (int i = 0; i < spec_.out_height(); ++i)
            for (int j = 0; j < spec_.out_width(); ++j) {
                const BankAddress a = output_map(k, i, j, spec_);
                out.at(k, i, j) = banks_[a.bank].peek(a.addr);
            }
    return out;
}

void OutputBankSet::accumulate(int k, int i, int j, std::int32_t delta,
                               std::uint64_t cycle_read, std::uint64_t cycle_write) {
    const BankAddress a = output_map(k, i, j, spec_);
    banks_[a.bank].accumulate(a.addr, delta, cycle_read, cycle_write);
}

}  // namespace convsim
