#ifndef NBGAME_SCENARIO_HPP
#define NBGAME_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbgame/channel_model.hpp"

namespace nbgame {

struct MaskSpec {
    enum class Kind { Const, Uniform, Rayleigh };
    Kind kind = Kind::Const;
    double a = 1.0;  // Const value, Uniform lo, or Rayleigh mean
    double b = 1.0;  // Uniform hi
};

/// Declarative description of a random scenario. cross_means is users x
/// users row-major; entry (j, i) is the Rayleigh mean of the channel from
/// transmitter j to receiver i, the diagonal is ignored in favor of
/// desired_mean. A mean of zero produces a zero channel (no interference).
struct ScenarioSpec {
    std::size_t users = 2;
    std::size_t bins = 4;
    double noise = 0.01;
    double desired_mean = 1.0;
    std::vector<double> cross_means;  // users x users; empty = all zero
    MaskSpec mask;
    std::vector<double> tpc;  // per-user sum-power limits; empty = none
    std::uint64_t seed = 0;
    Disagreement disagreement = Disagreement::NashEquilibrium;

    void validate() const;
};

/// Deterministically expands a spec into a concrete instance. Draws are
/// keyed by (stream = quantity id, counter = bin), so a spec with more
/// bins extends a smaller one without changing the shared prefix.
GameInstance generate_scenario(const ScenarioSpec& spec, std::uint64_t seed);

/// Parses the key = value config format (see docs/config.md and the
/// configs/ directory). Throws ConfigError with a line diagnostic.
ScenarioSpec parse_scenario(std::istream& in, const std::string& origin);
ScenarioSpec load_scenario_file(const std::string& path);

}  // namespace nbgame

#endif
