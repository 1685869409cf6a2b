#include "nbgame/channel_model.hpp"

#include <cmath>

namespace nbgame {

ChannelSet::ChannelSet(std::size_t users, std::size_t bins,
                       std::vector<double> gains, std::vector<double> noise)
    : users_(users), bins_(bins), gains_(std::move(gains)),
      noise_(std::move(noise)) {
    if (users_ == 0 || bins_ == 0)
        throw ConfigError("ChannelSet: need at least one user and one bin");
    if (gains_.size() != users_ * users_ * bins_)
        throw ConfigError("ChannelSet: gain array must be users x users x bins");
    if (noise_.size() != users_)
        throw ConfigError("ChannelSet: need one noise power per user");
    for (double g : gains_)
        if (!(g >= 0.0) || !std::isfinite(g))
            throw ConfigError("ChannelSet: gains must be finite and >= 0");
    for (double n : noise_)
        if (!(n > 0.0) || !std::isfinite(n))
            throw ConfigError("ChannelSet: noise powers must be positive");
}

SpectralMask::SpectralMask(std::size_t users, std::size_t bins,
                           std::vector<double> pmax)
    : users_(users), bins_(bins), pmax_(std::move(pmax)) {
    if (pmax_.size() != users_ * bins_)
        throw ConfigError("SpectralMask: cap array must be users x bins");
    for (double p : pmax_)
        if (!(p > 0.0) || !std::isfinite(p))
            throw ConfigError("SpectralMask: caps must be positive");
}

double SpectralMask::mask_sum(std::size_t user) const {
    double s = 0.0;
    for (std::size_t k = 0; k < bins_; ++k) s += pmax(user, k);
    return s;
}

GameInstance::GameInstance(ChannelSet channels, SpectralMask mask,
                           std::optional<std::vector<double>> total_power,
                           Disagreement disagreement)
    : channels_(std::move(channels)), mask_(std::move(mask)),
      total_power_(std::move(total_power)), disagreement_(disagreement) {
    if (mask_.users() != channels_.users() || mask_.bins() != channels_.bins())
        throw ConfigError("GameInstance: mask dimensions do not match channels");
    if (total_power_) {
        if (total_power_->size() != channels_.users())
            throw ConfigError("GameInstance: need one total-power limit per user");
        for (std::size_t i = 0; i < channels_.users(); ++i) {
            const double p = (*total_power_)[i];
            if (!(p > 0.0))
                throw ConfigError("GameInstance: total-power limits must be positive");
            if (p > mask_.mask_sum(i))
                throw ConfigError(
                    "GameInstance: a total-power limit above the mask sum "
                    "is not tight; drop it instead");
        }
        if (disagreement_ != Disagreement::Origin)
            throw ConfigError(
                "GameInstance: games with total-power limits use the origin "
                "disagreement point");
    }
}

double exclusive_rate(const GameInstance& inst, std::size_t user,
                      std::size_t bin, double power) {
    const double cap = inst.mask().pmax(user, bin);
    if (!(power >= 0.0) || power > cap + 1e-15)
        throw std::domain_error("exclusive_rate: power outside [0, pmax]");
    const double g = inst.channels().gain(user, user, bin);
    return std::log1p(g * g * power / inst.channels().noise(user));
}

std::vector<double> ne_rates(const GameInstance& inst) {
    const auto& ch = inst.channels();
    const auto& mask = inst.mask();
    const std::size_t m = ch.users(), n = ch.bins();
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            double denom = ch.noise(i);
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                const double g = ch.gain(j, i, k);
                denom += g * g * mask.pmax(j, k);
            }
            const double g = ch.gain(i, i, k);
            out[i] += std::log1p(g * g * mask.pmax(i, k) / denom);
        }
    }
    return out;
}

std::vector<double> disagreement_rates(const GameInstance& inst) {
    if (inst.disagreement() == Disagreement::Origin)
        return std::vector<double>(inst.users(), 0.0);
    return ne_rates(inst);
}

}  // namespace nbgame
