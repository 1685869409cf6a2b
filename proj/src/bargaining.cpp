#include "nbgame/bargaining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nbgame {

bool Allocation::feasible(const GameInstance& inst, double tol) const {
    if (users != inst.users() || bins != inst.bins()) return false;
    for (std::size_t i = 0; i < users; ++i)
        for (std::size_t k = 0; k < bins; ++k) {
            if (a(i, k) < -tol || a(i, k) > 1.0 + tol) return false;
            if (p(i, k) < -tol || p(i, k) > inst.mask().pmax(i, k) + tol)
                return false;
        }
    for (std::size_t k = 0; k < bins; ++k) {
        double occ = 0.0;
        for (std::size_t i = 0; i < users; ++i) occ += a(i, k);
        if (occ > 1.0 + tol) return false;
    }
    if (inst.has_tpc()) {
        for (std::size_t i = 0; i < users; ++i) {
            double spent = 0.0;
            for (std::size_t k = 0; k < bins; ++k) spent += a(i, k) * p(i, k);
            if (spent > inst.total_power(i) + tol) return false;
        }
    }
    return true;
}

std::vector<double> Allocation::rates(const GameInstance& inst) const {
    std::vector<double> out(users, 0.0);
    for (std::size_t i = 0; i < users; ++i)
        for (std::size_t k = 0; k < bins; ++k) {
            if (a(i, k) <= 0.0) continue;
            const double g = inst.channels().gain(i, i, k);
            out[i] += a(i, k) *
                      std::log1p(g * g * p(i, k) / inst.channels().noise(i));
        }
    return out;
}

double log_nf(const std::vector<double>& rates, const std::vector<double>& d) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double gap = rates[i] - d[i];
        if (!(gap > 0.0))
            throw BelowDisagreement("rate of user " + std::to_string(i + 1) +
                                    " does not exceed its disagreement rate");
        sum += std::log(gap);
    }
    return sum;
}

double log_nf(const UtilityPoint& point, const UtilityPoint& disagreement) {
    return log_nf(point.rates, disagreement.rates);
}

namespace {

UtilityPoint mix(const UtilityPoint& a, const UtilityPoint& b, double lambda) {
    UtilityPoint out;
    out.rates.resize(a.rates.size());
    for (std::size_t i = 0; i < a.rates.size(); ++i)
        out.rates[i] = lambda * a.rates[i] + (1.0 - lambda) * b.rates[i];
    out.tag = "mix";
    return out;
}

double product_gap(const UtilityPoint& a, const UtilityPoint& b,
                   const UtilityPoint& d, double lambda) {
    const double g1 = lambda * a.r1() + (1.0 - lambda) * b.r1() - d.r1();
    const double g2 = lambda * a.r2() + (1.0 - lambda) * b.r2() - d.r2();
    if (!(g1 > 0.0) || !(g2 > 0.0)) return -std::numeric_limits<double>::infinity();
    return g1 * g2;
}

}  // namespace

SegmentBargain nb_on_segment(const UtilityPoint& a, const UtilityPoint& b,
                             const UtilityPoint& d) {
    // (B + A*l)(D + C*l), quadratic in l.
    const double A = a.r1() - b.r1();
    const double B = b.r1() - d.r1();
    const double C = a.r2() - b.r2();
    const double D = b.r2() - d.r2();

    double candidates[3] = {0.0, 1.0, 0.0};
    int ncand = 2;
    const double curvature = A * C;
    if (curvature != 0.0) {
        const double stationary = -(A * D + B * C) / (2.0 * curvature);
        if (curvature < 0.0)  // interior maximum
            candidates[ncand++] = std::clamp(stationary, 0.0, 1.0);
    }

    double best_val = -std::numeric_limits<double>::infinity();
    double best_lambda = 0.0;
    bool found = false;
    for (int c = 0; c < ncand; ++c) {
        const double l = candidates[c];
        const double v = product_gap(a, b, d, l);
        if (v <= 0.0) continue;
        if (!found || v > best_val || (v == best_val && l < best_lambda)) {
            best_val = v;
            best_lambda = l;
            found = true;
        }
    }
    if (!found)
        throw BelowDisagreement(
            "no time share of the segment dominates the disagreement point");
    return SegmentBargain{best_lambda, mix(a, b, best_lambda)};
}

Frontier pareto_frontier(std::vector<UtilityPoint> points) {
    if (points.empty())
        throw std::invalid_argument("pareto_frontier: need at least one point");

    // Non-dominated staircase: sort by r1 desc (r2 desc ties), keep points
    // whose r2 strictly rises.
    std::sort(points.begin(), points.end(),
              [](const UtilityPoint& x, const UtilityPoint& y) {
                  if (x.r1() != y.r1()) return x.r1() > y.r1();
                  return x.r2() > y.r2();
              });
    std::vector<UtilityPoint> stair;
    for (auto& pt : points) {
        if (!stair.empty() && pt.r2() <= stair.back().r2()) continue;
        stair.push_back(std::move(pt));
    }

    // Convexify: drop vertices on or below the chord of their neighbors.
    std::vector<UtilityPoint> hull;
    for (auto& pt : stair) {
        while (hull.size() >= 2) {
            const auto& p0 = hull[hull.size() - 2];
            const auto& p1 = hull[hull.size() - 1];
            const double cross = (p1.r1() - p0.r1()) * (pt.r2() - p0.r2()) -
                                 (p1.r2() - p0.r2()) * (pt.r1() - p0.r1());
            // Moving right-to-left and up; keep only left turns.
            if (cross <= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(std::move(pt));
    }
    return Frontier{std::move(hull)};
}

FrontierBargain nb_on_frontier(const Frontier& frontier, const UtilityPoint& d) {
    const auto& v = frontier.vertices;
    if (v.empty()) throw std::invalid_argument("nb_on_frontier: empty frontier");

    FrontierBargain best{};
    double best_val = -std::numeric_limits<double>::infinity();
    bool found = false;

    auto consider = [&](std::size_t ia, std::size_t ib, const SegmentBargain& sb) {
        const double val = log_nf(sb.point, d);
        if (!found || val > best_val) {
            best = FrontierBargain{sb.point, ia, ib, sb.lambda};
            best_val = val;
            found = true;
        }
    };

    if (v.size() == 1) {
        try {
            consider(0, 0, SegmentBargain{1.0, v[0]});
        } catch (const BelowDisagreement&) {
        }
    }
    for (std::size_t s = 0; s + 1 < v.size(); ++s) {
        try {
            consider(s, s + 1, nb_on_segment(v[s], v[s + 1], d));
        } catch (const BelowDisagreement&) {
        }
    }
    if (!found)
        throw BelowDisagreement("no frontier point dominates the disagreement point");
    return best;
}

Schedule realize_schedule(const Allocation& alloc, double horizon) {
    Schedule sched;
    sched.horizon = horizon;
    sched.per_bin.resize(alloc.bins);
    for (std::size_t k = 0; k < alloc.bins; ++k) {
        double cursor = 0.0;
        for (std::size_t i = 0; i < alloc.users; ++i) {
            const double len = alloc.a(i, k) * horizon;
            if (len <= 0.0) continue;
            sched.per_bin[k].push_back(ScheduleEntry{i, cursor, cursor + len});
            cursor += len;
        }
    }
    return sched;
}

}  // namespace nbgame
