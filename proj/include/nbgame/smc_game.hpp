#ifndef NBGAME_SMC_GAME_HPP
#define NBGAME_SMC_GAME_HPP

#include "nbgame/report.hpp"

namespace nbgame {

/// Per-bin full-mask exclusive rates and the disagreement rates, packaged
/// for the convex M-user time-share problem.
struct ProblemView {
    std::size_t users;
    std::size_t bins;
    std::vector<double> rate;  // users x bins, exclusive rate at pmax
    std::vector<double> rne;   // disagreement rates

    double r(std::size_t i, std::size_t k) const { return rate[i * bins + k]; }
};

ProblemView mbody_problem(const GameInstance& inst);

/// Two-user bin permutation by descending ratio R1(k)/R2(k); ties keep
/// ascending bin index, R2 = 0 bins sort first, bins dead for both last.
std::vector<std::size_t> order_bins(const GameInstance& inst);
std::vector<std::size_t> order_bins_by_rate(const std::vector<double>& r1,
                                            const std::vector<double>& r2);

/// Exact two-user solver for the mask-only game: sweeps the ordered-bin
/// split and finds the shared-bin time fraction in closed form. At most
/// one bin ends up fractional. Throws BelowDisagreement when no split
/// beats the equilibrium rates.
SolveReport solve_two_user_smc(const GameInstance& inst);

/// Exact Pareto boundary of the two-user TDM/FDM rate region.
Frontier tdmfdm_frontier(const GameInstance& inst);

}  // namespace nbgame

#endif
