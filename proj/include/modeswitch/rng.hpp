#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace modeswitch {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed, e.g. one stream per tree or per CV fold.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The standard distributions are not (their algorithms are
/// implementation-defined), so every transform below is written out here
/// and results are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer on [0, n). Rejection sampling, no modulo bias.
    std::size_t uniform_index(std::size_t n);

    // Standard normal via Box-Muller (cosine branch only, no cached state).
    double normal();

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace modeswitch
