#include "nbgame/smc_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nbgame {

ProblemView mbody_problem(const GameInstance& inst) {
    if (inst.has_tpc())
        throw std::invalid_argument("mbody_problem: mask-only games expected");
    ProblemView view;
    view.users = inst.users();
    view.bins = inst.bins();
    view.rate.resize(view.users * view.bins);
    for (std::size_t i = 0; i < view.users; ++i)
        for (std::size_t k = 0; k < view.bins; ++k)
            view.rate[i * view.bins + k] =
                exclusive_rate(inst, i, k, inst.mask().pmax(i, k));
    view.rne = disagreement_rates(inst);
    return view;
}

std::vector<std::size_t> order_bins_by_rate(const std::vector<double>& r1,
                                            const std::vector<double>& r2) {
    const std::size_t n = r1.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Sort key: (category, -ratio, index). Category 0: r2 = 0 and r1 > 0
    // (infinite ratio); 1: finite ratio; 2: dead for both users.
    auto category = [&](std::size_t k) {
        if (r2[k] > 0.0) return 1;
        return r1[k] > 0.0 ? 0 : 2;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         const int ca = category(a), cb = category(b);
                         if (ca != cb) return ca < cb;
                         if (ca != 1) return false;  // index tie-break
                         return r1[a] * r2[b] > r1[b] * r2[a];
                     });
    return order;
}

std::vector<std::size_t> order_bins(const GameInstance& inst) {
    if (inst.users() != 2)
        throw std::invalid_argument("order_bins: two-user games only");
    const std::size_t n = inst.bins();
    std::vector<double> r1(n), r2(n);
    for (std::size_t k = 0; k < n; ++k) {
        r1[k] = exclusive_rate(inst, 0, k, inst.mask().pmax(0, k));
        r2[k] = exclusive_rate(inst, 1, k, inst.mask().pmax(1, k));
    }
    return order_bins_by_rate(r1, r2);
}

namespace {

struct SplitTables {
    std::vector<std::size_t> order;
    std::vector<double> prefix1;  // prefix1[j] = sum of r1 over first j ordered bins
    std::vector<double> suffix2;  // suffix2[j] = sum of r2 over ordered bins j..N-1
};

SplitTables split_tables(const GameInstance& inst) {
    const std::size_t n = inst.bins();
    SplitTables t;
    t.order = order_bins(inst);
    t.prefix1.assign(n + 1, 0.0);
    t.suffix2.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = t.order[j];
        t.prefix1[j + 1] =
            t.prefix1[j] + exclusive_rate(inst, 0, k, inst.mask().pmax(0, k));
    }
    for (std::size_t j = n; j-- > 0;) {
        const std::size_t k = t.order[j];
        t.suffix2[j] =
            t.suffix2[j + 1] + exclusive_rate(inst, 1, k, inst.mask().pmax(1, k));
    }
    return t;
}

// Builds the prefix/suffix full-power allocation with bin `pos` (ordered
// index) shared: user 1 holds it a `beta` fraction of the time.
Allocation poset_allocation(const GameInstance& inst, const SplitTables& t,
                            std::size_t pos, double beta) {
    const std::size_t n = inst.bins();
    Allocation alloc(2, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = t.order[j];
        double a1 = 0.0, a2 = 0.0;
        if (j < pos) {
            a1 = 1.0;
        } else if (j == pos) {
            a1 = beta;
            a2 = 1.0 - beta;
        } else {
            a2 = 1.0;
        }
        // Dead bins carry no power or time.
        const double r1k = exclusive_rate(inst, 0, k, inst.mask().pmax(0, k));
        const double r2k = exclusive_rate(inst, 1, k, inst.mask().pmax(1, k));
        if (r1k == 0.0 && r2k == 0.0) {
            a1 = a2 = 0.0;
        }
        alloc.a(0, k) = a1;
        alloc.a(1, k) = a2;
        alloc.p(0, k) = a1 > 0.0 ? inst.mask().pmax(0, k) : 0.0;
        alloc.p(1, k) = a2 > 0.0 ? inst.mask().pmax(1, k) : 0.0;
    }
    return alloc;
}

}  // namespace

SolveReport solve_two_user_smc(const GameInstance& inst) {
    if (inst.users() != 2)
        throw std::invalid_argument("solve_two_user_smc: two-user games only");
    if (inst.has_tpc())
        throw std::invalid_argument("solve_two_user_smc: mask-only games only");

    const std::size_t n = inst.bins();
    const auto t = split_tables(inst);
    const std::vector<double> d = disagreement_rates(inst);
    const UtilityPoint dpt{d, "disagreement"};

    double best_val = -std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;
    double best_beta = 0.0;
    bool found = false;

    for (std::size_t pos = 0; pos < n; ++pos) {
        // beta = 1: user 1 also takes the split bin; beta = 0: user 2 does.
        const UtilityPoint hi{{t.prefix1[pos + 1], t.suffix2[pos + 1]}, "hi"};
        const UtilityPoint lo{{t.prefix1[pos], t.suffix2[pos]}, "lo"};
        try {
            const auto sb = nb_on_segment(hi, lo, dpt);
            // Strictness against the disagreement rates.
            if (sb.point.r1() - d[0] <= 1e-12 || sb.point.r2() - d[1] <= 1e-12)
                continue;
            const double val = log_nf(sb.point, dpt);
            if (!found || val > best_val) {
                best_val = val;
                best_pos = pos;
                best_beta = sb.lambda;
                found = true;
            }
        } catch (const BelowDisagreement&) {
        }
    }
    if (!found)
        throw BelowDisagreement(
            "no TDM/FDM split gives both users more than the equilibrium");

    SolveReport report;
    report.solver = "smc-two-user";
    report.alloc = poset_allocation(inst, t, best_pos, best_beta);
    report.rates = report.alloc.rates(inst);
    report.disagreement = d;
    report.log_nf = log_nf(report.rates, d);
    report.beta = best_beta;
    report.shared_bin =
        (best_beta > 0.0 && best_beta < 1.0)
            ? static_cast<int>(t.order[best_pos])
            : -1;
    return report;
}

Frontier tdmfdm_frontier(const GameInstance& inst) {
    const std::size_t n = inst.bins();
    const auto t = split_tables(inst);
    std::vector<UtilityPoint> points;
    points.reserve(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        points.push_back(UtilityPoint{{t.prefix1[j], t.suffix2[j]},
                                      "split-" + std::to_string(j)});
    return pareto_frontier(std::move(points));
}

}  // namespace nbgame
