#pragma once

#include <cmath>
#include <cstdint>

namespace rlrs {

// Counter-free splittable generator. All randomness in the library flows
// through this type so experiments are bit-reproducible for a fixed seed.
// Normal variates come from Box-Muller over 53-bit uniforms, so streams do
// not depend on the standard library's distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed)) {}

    // Independent stream derived from (seed, stream index). Streams for
    // distinct indices are order-independent, which keeps parallel sampling
    // deterministic.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        return Rng(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ull)));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform on (0, 1)
    double uniform01() {
        double u;
        do {
            u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        } while (u <= 0.0);
        return u;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * M_PI * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

private:
    explicit Rng(std::uint64_t raw, int) : state_(raw) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDull;
        z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ull;
        return z ^ (z >> 33);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace rlrs
