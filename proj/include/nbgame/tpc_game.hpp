#ifndef NBGAME_TPC_GAME_HPP
#define NBGAME_TPC_GAME_HPP

#include "nbgame/smc_game.hpp"

namespace nbgame {

struct WaterfillResult {
    std::vector<double> power;
    double rate;
};

/// Capped water-filling: maximize sum_j ln(1 + eps_j p_j) subject to
/// sum p = budget, 0 <= p_j <= cap_j. Exact breakpoint scan on the water
/// level. Throws Infeasible when the budget exceeds the caps; a
/// non-positive budget yields the zero vector.
WaterfillResult waterfill(const std::vector<double>& eps, double budget,
                          const std::vector<double>& caps);

/// Water-fill operator WF^i(X): the user's best rate on the bin subset X,
/// with the budget clamped to the subset's cap sum. Returned powers are
/// full-length with zeros off the subset.
WaterfillResult waterfill_on_set(const GameInstance& inst, std::size_t user,
                                 const std::vector<std::size_t>& bins);

/// Scans the ratio-ordered bins for a mask-frontier point both sum-power
/// budgets can afford; also reports tau = 1 - (b1 + b2) / N from the
/// users' affordable-bandwidth covers.
Classification classify(const GameInstance& inst);

/// The ratio-order greedy allocation that spends each budget on that
/// user's best bins at full mask power. Reference construction only; it
/// ignores absolute advantages and is generally not Pareto-optimal.
SolveReport comparative_advantage_allocation(const GameInstance& inst);

/// Bargains on the TPC-feasible part of the mask-only Pareto boundary
/// (time-share interval per split found in closed form).
SolveReport solve_bandwidth_dominant(const GameInstance& inst);

/// FDM plus sampled time sharing: both users water-fill everywhere, the
/// contested bins are relinquished one at a time over 2L rounds, and the
/// bargain runs on the hull of the sampled points.
SolveReport solve_power_dominant(const GameInstance& inst);

/// Log-NF gap bound for the sampled scheme, evaluated from the exact
/// FDM/TS solution's generating bin sets. +infinity when a denominator
/// rate is zero.
double theorem7_bound(const GameInstance& inst, const SolveReport& oracle);

/// Classify, then dispatch to the matching solver.
SolveReport solve_tpc(const GameInstance& inst);

}  // namespace nbgame

#endif
