#ifndef PLATOON_RNG_HPP
#define PLATOON_RNG_HPP

#include <cstdint>

namespace platoon {

/// Small deterministic PRNG (splitmix64). Used instead of <random> engines
/// so that campaign outputs are bit-identical across standard libraries and
/// independent of execution order: streams are derived hierarchically from
/// the master seed, never shared.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller on two uniform draws.
    double gaussian();

    /// Derive an independent child stream keyed by an index.
    Rng derive(std::uint64_t key) const {
        Rng mixer(state_ ^ (0xd1342543de82ef95ULL * (key + 1)));
        return Rng(mixer.next_u64());
    }

private:
    std::uint64_t state_;
};

}  // namespace platoon

#endif
