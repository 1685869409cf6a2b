#ifndef NBGAME_RNG_HPP
#define NBGAME_RNG_HPP

#include <cmath>
#include <cstdint>

namespace nbgame {

// Counter-based generator built on the splitmix64 finalizer. A draw is a
// pure function of (seed, stream, counter), so seeds are portable across
// platforms and languages, and streams can be sampled out of order:
//
//   value(seed, stream, n) = finalize(seed ^ finalize(stream)
//                                     + (n+1) * 0x9E3779B97F4A7C15)
//
// where finalize is the splitmix64 output mix. Streams index independent
// quantities (a channel link, a user's mask); the counter indexes the bin,
// so extending a scenario with more bins never perturbs earlier draws.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(seed ^ finalize(stream)) {}

    static std::uint64_t finalize(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        return finalize(base_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Rayleigh variate with the given mean; scale = mean * sqrt(2/pi).
    double rayleigh_mean(double mean) {
        if (mean <= 0.0) return 0.0;
        const double scale = mean * std::sqrt(2.0 / M_PI);
        const double u = uniform();
        return scale * std::sqrt(-2.0 * std::log1p(-u));
    }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace nbgame

#endif
