#ifndef NBGAME_DUAL_DECOMP_HPP
#define NBGAME_DUAL_DECOMP_HPP

#include "nbgame/smc_game.hpp"

namespace nbgame {

struct DualConfig {
    double delta = 0.2;     // master step length
    double xi = 1e-5;       // stopping threshold on the multiplier change
    int max_iters = 100000;
    std::vector<double> lambda0;     // empty = all zeros
    bool diminishing_step = false;   // delta / sqrt(iter) when set
    bool record_trace = true;
};

/// Coordinator -> agents message for one round.
struct Broadcast {
    int round;
    std::vector<double> lambda;
};

/// Agent -> coordinator reply.
struct Response {
    int round;
    std::size_t user;
    std::vector<double> alpha;
};

struct SubproblemSolution {
    std::vector<double> alpha;
    double objective;  // ln(sum alpha r - rne) - sum lambda alpha
};

/// One user's priced time-share problem: maximize
/// ln(sum_k a_k r_k - rne) - sum_k lambda_k a_k over a in [0,1]^N.
/// Threshold structure: with t = sum a r - rne, a_k = 1 when r_k/lambda_k
/// exceeds t, 0 below, fractional only at equality. Solved exactly by a
/// breakpoint scan over the ratio-sorted bins.
SubproblemSolution solve_subproblem(const std::vector<double>& r, double rne,
                                    const std::vector<double>& lambda);

/// Projected gradient step on the master problem:
/// new_lambda(k) = max(0, lambda(k) - delta * (1 - sum_i alpha_i(k))).
std::vector<double> master_update(const std::vector<double>& lambda,
                                  const std::vector<std::vector<double>>& alphas,
                                  double delta);

/// Bulk-synchronous dual decomposition for the M-user mask-only game.
/// Stops when max_k |new_lambda - lambda| <= xi; throws NoConvergence at
/// the iteration cap. Final time shares are rescaled per bin when slight
/// primal infeasibility remains at the finite threshold.
SolveReport run_dual(const GameInstance& inst, const DualConfig& cfg = {});

}  // namespace nbgame

#endif
