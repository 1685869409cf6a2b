#include "nbgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nbgame {
namespace oracle {

// Everything here is deliberately re-derived from first principles: the
// oracles must certify the production solvers, so apart from the channel
// model and log_nf they share no code with them. Water-filling is done by
// bisection (the solver uses a breakpoint scan), hulls by a monotone
// chain, and segment bargains by ternary search (the solver is closed
// form).

namespace {

struct WfPoint {
    std::vector<double> power;
    double rate = 0.0;
};

WfPoint bisect_waterfill(const std::vector<double>& eps, double budget,
                         const std::vector<double>& caps) {
    const std::size_t n = eps.size();
    WfPoint out;
    out.power.assign(n, 0.0);
    double cap_sum = 0.0, level_hi = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (eps[j] <= 0.0) continue;
        cap_sum += caps[j];
        level_hi = std::max(level_hi, 1.0 / eps[j] + caps[j]);
    }
    budget = std::min(budget, cap_sum);
    if (budget <= 0.0) return out;

    auto spent = [&](double mu) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (eps[j] > 0.0)
                s += std::clamp(mu - 1.0 / eps[j], 0.0, caps[j]);
        return s;
    };
    double lo = 0.0, hi = level_hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (spent(mid) < budget ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    for (std::size_t j = 0; j < n; ++j) {
        if (eps[j] <= 0.0) continue;
        out.power[j] = std::clamp(mu - 1.0 / eps[j], 0.0, caps[j]);
        out.rate += std::log1p(eps[j] * out.power[j]);
    }
    return out;
}

double user_rate_on_subset(const GameInstance& inst, std::size_t user,
                           const std::vector<std::size_t>& bins,
                           std::vector<std::size_t>* support) {
    std::vector<double> eps(bins.size()), caps(bins.size());
    double cap_sum = 0.0;
    for (std::size_t j = 0; j < bins.size(); ++j) {
        const double g = inst.channels().gain(user, user, bins[j]);
        eps[j] = g * g / inst.channels().noise(user);
        caps[j] = inst.mask().pmax(user, bins[j]);
        cap_sum += caps[j];
    }
    const double budget =
        inst.has_tpc() ? std::min(inst.total_power(user), cap_sum) : cap_sum;
    const WfPoint wf = bisect_waterfill(eps, budget, caps);
    if (support) {
        support->clear();
        for (std::size_t j = 0; j < bins.size(); ++j)
            if (wf.power[j] > 1e-12) support->push_back(bins[j]);
    }
    return wf.rate;
}

}  // namespace

SolveReport grid_nb_two_user_smc(const GameInstance& inst, double beta_step) {
    if (inst.users() != 2)
        throw std::invalid_argument("grid_nb_two_user_smc: two-user games only");
    if (inst.has_tpc())
        throw std::invalid_argument("grid_nb_two_user_smc: mask-only games only");
    if (!(beta_step > 0.0) || beta_step > 1.0)
        throw std::invalid_argument("grid_nb_two_user_smc: beta_step in (0,1]");

    const std::size_t n = inst.bins();
    std::vector<double> r1(n), r2(n);
    for (std::size_t k = 0; k < n; ++k) {
        r1[k] = exclusive_rate(inst, 0, k, inst.mask().pmax(0, k));
        r2[k] = exclusive_rate(inst, 1, k, inst.mask().pmax(1, k));
    }
    const std::vector<double> d = disagreement_rates(inst);

    // Own ratio sort, kept separate from the solver's ordering code.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double qa = r2[a] > 0.0 ? r1[a] / r2[a]
                                      : (r1[a] > 0.0
                                             ? std::numeric_limits<double>::infinity()
                                             : -1.0);
        const double qb = r2[b] > 0.0 ? r1[b] / r2[b]
                                      : (r1[b] > 0.0
                                             ? std::numeric_limits<double>::infinity()
                                             : -1.0);
        if (qa != qb) return qa > qb;
        return a < b;
    });

    std::vector<double> pref(n + 1, 0.0), suff(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        pref[j + 1] = pref[j] + r1[order[j]];
    for (std::size_t j = n; j-- > 0;) suff[j] = suff[j + 1] + r2[order[j]];

    const int steps = static_cast<int>(std::ceil(1.0 / beta_step));
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;
    double best_beta = 0.0;
    bool found = false;
    for (std::size_t pos = 0; pos < n; ++pos) {
        for (int s = 0; s <= steps; ++s) {
            const double beta = std::min(1.0, s * beta_step);
            const double u1 = pref[pos] + beta * r1[order[pos]] - d[0];
            const double u2 = suff[pos + 1] + (1.0 - beta) * r2[order[pos]] - d[1];
            if (!(u1 > 0.0) || !(u2 > 0.0)) continue;
            const double val = std::log(u1) + std::log(u2);
            if (!found || val > best) {
                best = val;
                best_pos = pos;
                best_beta = beta;
                found = true;
            }
        }
    }
    if (!found)
        throw BelowDisagreement(
            "grid search found no point above the disagreement rates");

    SolveReport report;
    report.solver = "oracle-grid";
    report.rates = {pref[best_pos] + best_beta * r1[order[best_pos]],
                    suff[best_pos + 1] + (1.0 - best_beta) * r2[order[best_pos]]};
    report.disagreement = d;
    report.log_nf = log_nf(report.rates, d);
    report.beta = best_beta;
    report.shared_bin = (best_beta > 0.0 && best_beta < 1.0)
                            ? static_cast<int>(order[best_pos])
                            : -1;
    return report;
}

SolveReport fdm_ts_oracle(const GameInstance& inst) {
    if (inst.users() != 2)
        throw std::invalid_argument("fdm_ts_oracle: two-user games only");
    const std::size_t n = inst.bins();
    if (n > 12)
        throw std::invalid_argument(
            "fdm_ts_oracle: exhaustive bipartition search is limited to 12 bins");

    struct Candidate {
        double r1, r2;
        std::uint32_t mask;  // bins of user 1
    };
    std::vector<Candidate> cands;
    cands.reserve(std::size_t(1) << n);
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
        std::vector<std::size_t> bins1, bins2;
        for (std::size_t k = 0; k < n; ++k)
            ((mask >> k) & 1 ? bins1 : bins2).push_back(k);
        cands.push_back({user_rate_on_subset(inst, 0, bins1, nullptr),
                         user_rate_on_subset(inst, 1, bins2, nullptr), mask});
    }

    // Upper-right convex hull by monotone chain over r1-ascending order.
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.r1 != b.r1) return a.r1 < b.r1;
        return a.r2 < b.r2;
    });
    std::vector<Candidate> hull;
    for (const Candidate& c : cands) {
        if (!hull.empty() && hull.back().r1 == c.r1) hull.pop_back();
        while (hull.size() >= 2) {
            const Candidate& p = hull[hull.size() - 2];
            const Candidate& q = hull.back();
            const double cross = (q.r1 - p.r1) * (c.r2 - p.r2) -
                                 (q.r2 - p.r2) * (c.r1 - p.r1);
            if (cross >= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(c);
    }
    // Trim the lower tail: keep only the part where r2 decreases as r1
    // grows (Pareto boundary of the hull).
    std::size_t start = 0;
    for (std::size_t j = 1; j < hull.size(); ++j)
        if (hull[j].r2 >= hull[start].r2) start = j;
    hull.erase(hull.begin(), hull.begin() + start);

    const std::vector<double> d = disagreement_rates(inst);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_seg = 0;
    double best_lambda = 1.0;  // weight on the left (smaller-r1) endpoint
    bool found = false;

    auto value_at = [&](const Candidate& a, const Candidate& b, double l) {
        const double u1 = l * a.r1 + (1.0 - l) * b.r1 - d[0];
        const double u2 = l * a.r2 + (1.0 - l) * b.r2 - d[1];
        if (!(u1 > 0.0) || !(u2 > 0.0))
            return -std::numeric_limits<double>::infinity();
        return std::log(u1) + std::log(u2);
    };
    auto consider = [&](std::size_t seg, double l, double v) {
        if (v == -std::numeric_limits<double>::infinity()) return;
        if (!found || v > best) {
            best = v;
            best_seg = seg;
            best_lambda = l;
            found = true;
        }
    };
    if (hull.size() == 1)
        consider(0, 1.0, value_at(hull[0], hull[0], 1.0));
    for (std::size_t seg = 0; seg + 1 < hull.size(); ++seg) {
        const Candidate& a = hull[seg];
        const Candidate& b = hull[seg + 1];
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (value_at(a, b, m1) < value_at(a, b, m2))
                lo = m1;
            else
                hi = m2;
        }
        const double l = 0.5 * (lo + hi);
        consider(seg, 0.0, value_at(a, b, 0.0));
        consider(seg, 1.0, value_at(a, b, 1.0));
        consider(seg, l, value_at(a, b, l));
    }
    if (!found)
        throw BelowDisagreement(
            "no FDM/TS point dominates the disagreement point");

    auto make_share = [&](const Candidate& c) {
        SharePoint pt;
        pt.alloc = Allocation(2, n);
        std::vector<std::size_t> bins1, bins2;
        for (std::size_t k = 0; k < n; ++k)
            ((c.mask >> k) & 1 ? bins1 : bins2).push_back(k);
        std::vector<std::size_t> s1, s2;
        user_rate_on_subset(inst, 0, bins1, &s1);
        user_rate_on_subset(inst, 1, bins2, &s2);
        pt.bins_user1 = s1;
        pt.bins_user2 = s2;
        for (std::size_t k : s1) pt.alloc.a(0, k) = 1.0;
        for (std::size_t k : s2) pt.alloc.a(1, k) = 1.0;
        pt.rates = {c.r1, c.r2};
        return pt;
    };

    const Candidate& left = hull[best_seg];
    const Candidate& right =
        hull.size() == 1 ? hull[best_seg] : hull[best_seg + 1];

    SolveReport report;
    report.solver = "oracle-fdm-ts";
    report.rates = {best_lambda * left.r1 + (1.0 - best_lambda) * right.r1,
                    best_lambda * left.r2 + (1.0 - best_lambda) * right.r2};
    report.disagreement = d;
    report.log_nf = best;
    // share_a favors user 1: on this hull the left endpoint has smaller r1.
    report.share_a = make_share(right);
    report.share_b = make_share(left);
    report.lambda = 1.0 - best_lambda;
    return report;
}

namespace {

// Euclidean projection of one bin's column onto {0 <= x <= 1, sum x <= 1}.
// The box caps stay inside the shift search; clipping first would discard
// a capped coordinate's surplus and fabricate spurious fixed points.
void project_bin(std::vector<double>& x) {
    double boxed_sum = 0.0, top = 0.0;
    for (double v : x) {
        boxed_sum += std::clamp(v, 0.0, 1.0);
        top = std::max(top, v);
    }
    if (boxed_sum <= 1.0) {
        for (double& v : x) v = std::clamp(v, 0.0, 1.0);
        return;
    }
    double lo = 0.0, hi = top;
    for (int it = 0; it < 100; ++it) {
        const double theta = 0.5 * (lo + hi);
        double t = 0.0;
        for (double v : x) t += std::clamp(v - theta, 0.0, 1.0);
        (t > 1.0 ? lo : hi) = theta;
    }
    const double theta = 0.5 * (lo + hi);
    for (double& v : x) v = std::clamp(v - theta, 0.0, 1.0);
}

}  // namespace

PgResult projected_gradient_reference(const ProblemView& view, int max_iters,
                                      double tol) {
    const std::size_t m = view.users, n = view.bins;
    std::vector<double> alpha(m * n, 1.0 / static_cast<double>(m));

    auto gaps = [&](const std::vector<double>& a, std::vector<double>& t) {
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a[i * n + k] * view.r(i, k);
            t[i] = s - view.rne[i];
        }
    };
    auto objective = [&](const std::vector<double>& a) {
        std::vector<double> t(m);
        gaps(a, t);
        double v = 0.0;
        for (double g : t) {
            if (!(g > 0.0)) return -std::numeric_limits<double>::infinity();
            v += std::log(g);
        }
        return v;
    };
    auto project = [&](std::vector<double>& a) {
        std::vector<double> col(m);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < m; ++i) col[i] = a[i * n + k];
            project_bin(col);
            for (std::size_t i = 0; i < m; ++i) a[i * n + k] = col[i];
        }
    };

    // Phase 1 if the even split leaves someone at or below the fallback:
    // push along the worst user's rate row until all gaps clear.
    {
        std::vector<double> t(m);
        gaps(alpha, t);
        int guard = 0;
        while (*std::min_element(t.begin(), t.end()) <= 1e-9 && guard++ < 10000) {
            const std::size_t worst = static_cast<std::size_t>(
                std::min_element(t.begin(), t.end()) - t.begin());
            double norm = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                norm += view.r(worst, k) * view.r(worst, k);
            if (norm <= 0.0) break;
            const double s = 0.05 / std::sqrt(norm);
            for (std::size_t k = 0; k < n; ++k)
                alpha[worst * n + k] += s * view.r(worst, k);
            project(alpha);
            gaps(alpha, t);
        }
        if (*std::min_element(t.begin(), t.end()) <= 0.0)
            throw Infeasible(
                "projected gradient reference found no strictly feasible start");
    }

    // Stationarity is measured by the gradient mapping at a fixed probe
    // step, independent of the adaptive line-search step, so a backtracked
    // (small) step cannot masquerade as convergence.
    const double probe_step = 1e-2;
    double step = 1e-2;
    double fx = objective(alpha);
    double residual = std::numeric_limits<double>::infinity();
    int iter = 0;
    std::vector<double> t(m), grad(m * n), cand;
    while (iter < max_iters) {
        ++iter;
        gaps(alpha, t);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < n; ++k)
                grad[i * n + k] = view.r(i, k) / t[i];

        cand = alpha;
        for (std::size_t j = 0; j < m * n; ++j) cand[j] += probe_step * grad[j];
        project(cand);
        residual = 0.0;
        for (std::size_t j = 0; j < m * n; ++j)
            residual = std::max(residual, std::abs(cand[j] - alpha[j]));
        if (residual <= tol) break;

        bool moved = false;
        while (step > 1e-14) {
            cand = alpha;
            for (std::size_t j = 0; j < m * n; ++j) cand[j] += step * grad[j];
            project(cand);
            const double fc = objective(cand);
            if (fc > fx) {
                alpha.swap(cand);
                fx = fc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
        step = std::min(step * 2.0, 1.0);
    }

    return PgResult{std::move(alpha), fx, iter, residual};
}

}  // namespace oracle
}  // namespace nbgame
