#include "convsim/prng.hpp"

namespace convsim {

GeneratedInputs generate_inputs(std::uint64_t seed, const LayerSpec& spec) {
    SplitMix64 rng(seed);
    QuantTensor3D image(spec.height, spec.width, spec.channels);
    for (auto& v : image.data()) v = rng.next_i8();
    KernelTensor4D kernels(spec.kernels, spec.channels);
    for (auto& v : kernels.data()) v = rng.next_i8();
    std::vector<std::int32_t> bias(spec.kernels);
    for (auto& v : bias) v = rng.next_bias();
    return {std::move(image), std::move(kernels), BiasVector(std::move(bias))};
}

}  // namespace convsim
