#include "modeswitch/error.hpp"
#include "modeswitch/rng.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>

namespace modeswitch {

namespace {

std::mutex g_handler_mutex;
WarningHandler g_handler;

} // namespace

void warn(const std::string& message) {
    std::lock_guard lock(g_handler_mutex);
    if (g_handler)
        g_handler(message);
    else
        std::cerr << "warning: " << message << '\n';
}

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(g_handler_mutex);
    std::swap(g_handler, handler);
    return handler;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::size_t Rng::uniform_index(std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    // Largest multiple of n representable; draws at or above it are rejected.
    const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
    std::uint64_t draw;
    do {
        draw = engine_();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
}

double Rng::normal() {
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace modeswitch
