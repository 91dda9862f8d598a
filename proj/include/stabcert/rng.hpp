#ifndef STABCERT_RNG_HPP
#define STABCERT_RNG_HPP

#include <cstdint>

namespace stabcert {

/// SplitMix64 stream. Substreams are derived by counter so that per-item
/// generators (one per trajectory, probe, pair, ...) are identical no
/// matter how work is split across threads.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Independent substream for item `index` under the same seed.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        mix.next_u64();
        mix.next_u64();
        return mix;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  private:
    std::uint64_t state_;
};

}  // namespace stabcert

#endif
