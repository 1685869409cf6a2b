#ifndef NBGAME_CHANNEL_MODEL_HPP
#define NBGAME_CHANNEL_MODEL_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "nbgame/errors.hpp"

namespace nbgame {

/// Per-user, per-bin channel magnitudes and noise powers for an M-user
/// system on N flat-fading frequency bins. gain(j, i, k) is the magnitude
/// of the channel from transmitter j to receiver i on bin k.
class ChannelSet {
public:
    ChannelSet(std::size_t users, std::size_t bins,
               std::vector<double> gains, std::vector<double> noise);

    std::size_t users() const { return users_; }
    std::size_t bins() const { return bins_; }

    double gain(std::size_t tx, std::size_t rx, std::size_t bin) const {
        return gains_[(tx * users_ + rx) * bins_ + bin];
    }
    double noise(std::size_t user) const { return noise_[user]; }

private:
    std::size_t users_;
    std::size_t bins_;
    std::vector<double> gains_;  // users x users x bins, row-major
    std::vector<double> noise_;
};

/// Per-bin transmit power caps p_i^max(k), all strictly positive.
class SpectralMask {
public:
    SpectralMask(std::size_t users, std::size_t bins, std::vector<double> pmax);

    std::size_t users() const { return users_; }
    std::size_t bins() const { return bins_; }
    double pmax(std::size_t user, std::size_t bin) const {
        return pmax_[user * bins_ + bin];
    }
    double mask_sum(std::size_t user) const;

private:
    std::size_t users_;
    std::size_t bins_;
    std::vector<double> pmax_;  // users x bins
};

enum class Disagreement { NashEquilibrium, Origin };

/// A complete game: channels, masks, optional per-user sum-power limits,
/// and the disagreement rule. Immutable after construction.
class GameInstance {
public:
    GameInstance(ChannelSet channels, SpectralMask mask,
                 std::optional<std::vector<double>> total_power,
                 Disagreement disagreement);

    const ChannelSet& channels() const { return channels_; }
    const SpectralMask& mask() const { return mask_; }
    bool has_tpc() const { return total_power_.has_value(); }
    double total_power(std::size_t user) const { return (*total_power_)[user]; }
    Disagreement disagreement() const { return disagreement_; }

    std::size_t users() const { return channels_.users(); }
    std::size_t bins() const { return channels_.bins(); }

private:
    ChannelSet channels_;
    SpectralMask mask_;
    std::optional<std::vector<double>> total_power_;
    Disagreement disagreement_;
};

/// Rate (nats) user i gets on bin k alone with power p:
/// ln(1 + |g_ii(k)|^2 p / sigma_i^2). Throws on p outside [0, pmax].
double exclusive_rate(const GameInstance& inst, std::size_t user,
                      std::size_t bin, double power);

/// Non-cooperative equilibrium rates: every user transmits at the full
/// mask on every bin and treats the others' signals as noise.
std::vector<double> ne_rates(const GameInstance& inst);

/// Rates at the configured disagreement point (NE or the origin).
std::vector<double> disagreement_rates(const GameInstance& inst);

}  // namespace nbgame

#endif
