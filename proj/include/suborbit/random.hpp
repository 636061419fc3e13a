#pragma once

#include <cstdint>
#include <random>

namespace suborbit {

/// Seeded generator with portable uniform and normal draws (the standard
/// distributions are implementation-defined, which would break bit-identical
/// output across toolchains).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for task `index` derived from `seed`.
    static Rng split(std::uint64_t seed, std::uint64_t index);

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal (Box-Muller, one draw per call).
    double normal();

  private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace suborbit
