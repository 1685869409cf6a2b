#include "nbgame/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nbgame/rng.hpp"

namespace nbgame {

void ScenarioSpec::validate() const {
    if (users == 0 || bins == 0)
        throw ConfigError("scenario: users and bins must be positive");
    if (!(noise > 0.0)) throw ConfigError("scenario: noise must be positive");
    if (!(desired_mean > 0.0))
        throw ConfigError("scenario: desired_mean must be positive");
    if (!cross_means.empty() && cross_means.size() != users * users)
        throw ConfigError("scenario: cross_means must be users x users");
    for (double c : cross_means)
        if (!(c >= 0.0)) throw ConfigError("scenario: cross means must be >= 0");
    switch (mask.kind) {
        case MaskSpec::Kind::Const:
            if (!(mask.a > 0.0)) throw ConfigError("scenario: mask value must be positive");
            break;
        case MaskSpec::Kind::Uniform:
            if (!(mask.a > 0.0) || !(mask.b >= mask.a))
                throw ConfigError("scenario: mask uniform needs 0 < lo <= hi");
            break;
        case MaskSpec::Kind::Rayleigh:
            if (!(mask.a > 0.0))
                throw ConfigError("scenario: mask rayleigh mean must be positive");
            break;
    }
    if (!tpc.empty()) {
        if (tpc.size() != users)
            throw ConfigError("scenario: tpc needs one limit per user");
        for (double p : tpc)
            if (!(p > 0.0)) throw ConfigError("scenario: tpc limits must be positive");
    }
}

namespace {

// Stream ids for the counter RNG; each (quantity, pair) gets its own
// stream and bins advance the counter, so draws nest across bin counts.
std::uint64_t link_stream(std::size_t tx, std::size_t rx) {
    return 1 + tx * 0x10000ULL + rx;
}
std::uint64_t mask_stream(std::size_t user) { return 0xA000000ULL + user; }

}  // namespace

GameInstance generate_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t m = spec.users, n = spec.bins;

    std::vector<double> gains(m * m * n, 0.0);
    for (std::size_t tx = 0; tx < m; ++tx) {
        for (std::size_t rx = 0; rx < m; ++rx) {
            double mean;
            if (tx == rx) {
                mean = spec.desired_mean;
            } else if (spec.cross_means.empty()) {
                mean = 0.0;
            } else {
                mean = spec.cross_means[tx * m + rx];
            }
            CounterRng rng(seed, link_stream(tx, rx));
            for (std::size_t k = 0; k < n; ++k)
                gains[(tx * m + rx) * n + k] = rng.rayleigh_mean(mean);
        }
    }

    std::vector<double> pmax(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        CounterRng rng(seed, mask_stream(i));
        for (std::size_t k = 0; k < n; ++k) {
            double v = 0.0;
            switch (spec.mask.kind) {
                case MaskSpec::Kind::Const: v = spec.mask.a; break;
                case MaskSpec::Kind::Uniform: v = rng.uniform(spec.mask.a, spec.mask.b); break;
                case MaskSpec::Kind::Rayleigh:
                    // Rejection-free: a Rayleigh draw can be arbitrarily
                    // close to zero but is positive almost surely; floor it
                    // so the mask invariant holds.
                    v = std::max(rng.rayleigh_mean(spec.mask.a), 1e-12);
                    break;
            }
            pmax[i * n + k] = v;
        }
    }

    std::optional<std::vector<double>> tpc;
    if (!spec.tpc.empty()) tpc = spec.tpc;

    Disagreement d = spec.disagreement;
    if (tpc) d = Disagreement::Origin;

    return GameInstance(ChannelSet(m, n, std::move(gains),
                                   std::vector<double>(m, spec.noise)),
                        SpectralMask(m, n, std::move(pmax)), std::move(tpc), d);
}

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<double> parse_doubles(const std::string& s) {
    std::istringstream in(s);
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    if (!in.eof()) throw ConfigError("expected numbers, got '" + s + "'");
    return out;
}

}  // namespace

ScenarioSpec parse_scenario(std::istream& in, const std::string& origin) {
    ScenarioSpec spec;
    bool saw_disagreement = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        if (trimmed.empty()) continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        std::string key = trimmed.substr(0, eq);
        std::string value = trimmed.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        value.erase(value.find_last_not_of(" \t\r") + 1);

        try {
            if (key == "users") {
                spec.users = std::stoul(value);
            } else if (key == "bins") {
                spec.bins = std::stoul(value);
            } else if (key == "noise") {
                spec.noise = std::stod(value);
            } else if (key == "desired_mean") {
                spec.desired_mean = std::stod(value);
            } else if (key == "cross_means") {
                // rows separated by ';'
                spec.cross_means.clear();
                std::istringstream rows(value);
                std::string row;
                while (std::getline(rows, row, ';')) {
                    auto vals = parse_doubles(row);
                    spec.cross_means.insert(spec.cross_means.end(), vals.begin(),
                                            vals.end());
                }
            } else if (key == "mask") {
                std::istringstream ms(value);
                std::string kind;
                ms >> kind;
                if (kind == "const") {
                    spec.mask.kind = MaskSpec::Kind::Const;
                    if (!(ms >> spec.mask.a)) fail(origin, lineno, "mask const needs a value");
                } else if (kind == "uniform") {
                    spec.mask.kind = MaskSpec::Kind::Uniform;
                    if (!(ms >> spec.mask.a >> spec.mask.b))
                        fail(origin, lineno, "mask uniform needs lo hi");
                } else if (kind == "rayleigh") {
                    spec.mask.kind = MaskSpec::Kind::Rayleigh;
                    if (!(ms >> spec.mask.a)) fail(origin, lineno, "mask rayleigh needs a mean");
                } else {
                    fail(origin, lineno, "unknown mask kind '" + kind + "'");
                }
            } else if (key == "tpc") {
                spec.tpc = parse_doubles(value);
            } else if (key == "seed") {
                spec.seed = std::stoull(value);
            } else if (key == "disagreement") {
                saw_disagreement = true;
                if (value == "ne") spec.disagreement = Disagreement::NashEquilibrium;
                else if (value == "origin") spec.disagreement = Disagreement::Origin;
                else fail(origin, lineno, "disagreement must be 'ne' or 'origin'");
            } else {
                fail(origin, lineno, "unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail(origin, lineno, std::string("bad value for '") + key + "': " + e.what());
        }
    }
    if (!spec.tpc.empty() && !saw_disagreement)
        spec.disagreement = Disagreement::Origin;
    spec.validate();
    return spec;
}

ScenarioSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_scenario(in, path);
}

}  // namespace nbgame
