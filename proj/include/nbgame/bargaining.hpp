#ifndef NBGAME_BARGAINING_HPP
#define NBGAME_BARGAINING_HPP

#include <string>
#include <vector>

#include "nbgame/channel_model.hpp"

namespace nbgame {

// Feasibility tolerances: strict one for constructed objects, looser one
// for solver outputs that are exact only in the limit.
inline constexpr double kFeasTol = 1e-9;
inline constexpr double kSolverFeasTol = 1e-6;

/// A point in the users' rate space, with a provenance tag.
struct UtilityPoint {
    std::vector<double> rates;
    std::string tag;

    double r1() const { return rates[0]; }
    double r2() const { return rates[1]; }
};

/// Two-user Pareto boundary: vertices with rate 1 strictly decreasing and
/// rate 2 strictly increasing, segments implied between neighbors, and
/// non-increasing segment slopes (upper concavity).
struct Frontier {
    std::vector<UtilityPoint> vertices;
};

/// Time-share matrix alpha[i][k] in [0,1] and power matrix p[i][k].
struct Allocation {
    std::size_t users = 0;
    std::size_t bins = 0;
    std::vector<double> alpha;  // users x bins
    std::vector<double> power;  // users x bins

    Allocation() = default;
    Allocation(std::size_t users, std::size_t bins)
        : users(users), bins(bins), alpha(users * bins, 0.0),
          power(users * bins, 0.0) {}

    double& a(std::size_t i, std::size_t k) { return alpha[i * bins + k]; }
    double a(std::size_t i, std::size_t k) const { return alpha[i * bins + k]; }
    double& p(std::size_t i, std::size_t k) { return power[i * bins + k]; }
    double p(std::size_t i, std::size_t k) const { return power[i * bins + k]; }

    /// Checks 0<=alpha<=1, per-bin occupancy <= 1, mask, and (when
    /// present) the sum-power limit, all within tol.
    bool feasible(const GameInstance& inst, double tol = kFeasTol) const;

    /// Sum over bins of alpha * ln(1 + g^2 p / sigma^2) per user.
    std::vector<double> rates(const GameInstance& inst) const;
};

/// Intervals (user, begin, end) realizing an allocation on one bin.
struct ScheduleEntry {
    std::size_t user;
    double begin;
    double end;
};

struct Schedule {
    double horizon = 1.0;
    std::vector<std::vector<ScheduleEntry>> per_bin;
};

/// Log of the Nash function: sum_i ln(rates[i] - d[i]). Throws
/// BelowDisagreement unless every rate strictly exceeds its fallback.
double log_nf(const UtilityPoint& point, const UtilityPoint& disagreement);
double log_nf(const std::vector<double>& rates, const std::vector<double>& d);

/// Best time-share between two two-user points: maximizes
/// (u1(l)-d1)(u2(l)-d2) for u(l) = l*a + (1-l)*b over l in [0,1], via the
/// closed-form stationary point of the quadratic. Ties go to smaller l.
struct SegmentBargain {
    double lambda;
    UtilityPoint point;
};
SegmentBargain nb_on_segment(const UtilityPoint& a, const UtilityPoint& b,
                             const UtilityPoint& d);

/// Upper-right convex-hull chain of a two-user point set; dominated points
/// and collinear interior vertices are dropped.
Frontier pareto_frontier(std::vector<UtilityPoint> points);

/// Best NB point over a frontier (vertices and segments), disagreement d.
/// Throws BelowDisagreement if nothing on the frontier dominates d.
struct FrontierBargain {
    UtilityPoint point;
    std::size_t segment_a;  // indices of the generating vertices
    std::size_t segment_b;
    double lambda;          // point = lambda * v[a] + (1-lambda) * v[b]
};
FrontierBargain nb_on_frontier(const Frontier& frontier, const UtilityPoint& d);

/// Packs users left-to-right in index order on each bin; any residue
/// (1 - sum_i alpha_i(k)) * T is left idle at the end.
Schedule realize_schedule(const Allocation& alloc, double horizon);

}  // namespace nbgame

#endif
