#ifndef NBGAME_ERRORS_HPP
#define NBGAME_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nbgame {

// No cooperative point strictly dominates the disagreement point.
class BelowDisagreement : public std::runtime_error {
public:
    explicit BelowDisagreement(const std::string& what)
        : std::runtime_error(what) {}
};

// The constraint set is empty (e.g. sum-power budget exceeds the caps).
class Infeasible : public std::runtime_error {
public:
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver hit its iteration cap before meeting the threshold.
class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

// Every candidate utility point has a zero coordinate; the Nash function
// is undefined with an origin disagreement point.
class DegenerateRegion : public std::runtime_error {
public:
    explicit DegenerateRegion(const std::string& what)
        : std::runtime_error(what) {}
};

// Malformed configuration file or scenario specification.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nbgame

#endif
