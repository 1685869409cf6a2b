#ifndef NBGAME_ORACLE_HPP
#define NBGAME_ORACLE_HPP

#include "nbgame/report.hpp"
#include "nbgame/smc_game.hpp"

namespace nbgame {
namespace oracle {

/// Exhaustive (split, beta) grid search for the two-user mask-only game.
/// Shares only channel_model and log_nf with the production solver.
SolveReport grid_nb_two_user_smc(const GameInstance& inst, double beta_step);

/// Exact FDM/TS reference: water-fills every bipartition of the bins,
/// hulls the 2^N points, and bargains on the hull. Refuses N > 12. The
/// report carries the generating points, their bin sets, and lambda.
SolveReport fdm_ts_oracle(const GameInstance& inst);

struct PgResult {
    std::vector<double> alpha;  // users x bins
    double log_nf;
    int iterations;
    double residual;
};

/// Centralized projected gradient ascent on the M-user time-share
/// objective, with per-bin box-and-budget projection. Certifies the dual
/// solver; independent of its code path.
PgResult projected_gradient_reference(const ProblemView& view,
                                      int max_iters = 100000,
                                      double tol = 1e-9);

}  // namespace oracle
}  // namespace nbgame

#endif
