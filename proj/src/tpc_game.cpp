#include "nbgame/tpc_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nbgame {

namespace {
constexpr double kSupportTol = 1e-12;
}

WaterfillResult waterfill(const std::vector<double>& eps, double budget,
                          const std::vector<double>& caps) {
    const std::size_t n = eps.size();
    if (caps.size() != n)
        throw std::invalid_argument("waterfill: shape mismatch");
    for (double e : eps)
        if (!(e >= 0.0)) throw std::invalid_argument("waterfill: eps must be >= 0");

    WaterfillResult out;
    out.power.assign(n, 0.0);
    out.rate = 0.0;
    if (budget <= 0.0) return out;

    double cap_total = 0.0;
    for (double c : caps) cap_total += c;
    if (budget > cap_total + 1e-12)
        throw Infeasible("waterfill: budget exceeds the sum of the caps");

    // Only bins with positive measure can carry useful power; anything the
    // live bins cannot absorb would be wasted and is dropped.
    double live_cap = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        if (eps[j] > 0.0 && caps[j] > 0.0) live_cap += caps[j];
    const double target = std::min(budget, live_cap);
    if (target <= 0.0) return out;

    // Exact breakpoint scan on the water level mu:
    // p_j(mu) = clip(mu - 1/eps_j, 0, cap_j) is piecewise linear in mu
    // with kinks at activation (1/eps_j) and saturation (1/eps_j + cap_j).
    struct Event {
        double mu;
        int slope_delta;
    };
    std::vector<Event> events;
    events.reserve(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        if (eps[j] <= 0.0 || caps[j] <= 0.0) continue;
        const double a = 1.0 / eps[j];
        events.push_back({a, +1});
        events.push_back({a + caps[j], -1});
    }
    std::sort(events.begin(), events.end(),
              [](const Event& x, const Event& y) { return x.mu < y.mu; });

    double mu = events.front().mu;
    double total = 0.0;
    int slope = 0;
    double level = mu;
    bool crossed = false;
    for (const Event& ev : events) {
        const double gain = slope * (ev.mu - mu);
        if (total + gain >= target && slope > 0) {
            level = mu + (target - total) / slope;
            crossed = true;
            break;
        }
        total += gain;
        mu = ev.mu;
        slope += ev.slope_delta;
    }
    if (!crossed) level = events.back().mu;  // target == live_cap

    for (std::size_t j = 0; j < n; ++j) {
        if (eps[j] <= 0.0 || caps[j] <= 0.0) continue;
        const double p = std::clamp(level - 1.0 / eps[j], 0.0, caps[j]);
        out.power[j] = p;
        out.rate += std::log1p(eps[j] * p);
    }
    return out;
}

WaterfillResult waterfill_on_set(const GameInstance& inst, std::size_t user,
                                 const std::vector<std::size_t>& bins) {
    WaterfillResult out;
    out.power.assign(inst.bins(), 0.0);
    out.rate = 0.0;
    if (bins.empty()) return out;

    std::vector<double> eps(bins.size()), caps(bins.size());
    double cap_sum = 0.0;
    for (std::size_t j = 0; j < bins.size(); ++j) {
        const std::size_t k = bins[j];
        const double g = inst.channels().gain(user, user, k);
        eps[j] = g * g / inst.channels().noise(user);
        caps[j] = inst.mask().pmax(user, k);
        cap_sum += caps[j];
    }
    const double budget =
        std::min(inst.has_tpc() ? inst.total_power(user) : cap_sum, cap_sum);
    auto wf = waterfill(eps, budget, caps);
    for (std::size_t j = 0; j < bins.size(); ++j) out.power[bins[j]] = wf.power[j];
    out.rate = wf.rate;
    return out;
}

namespace {

struct OrderedCaps {
    std::vector<std::size_t> order;
    std::vector<double> p1;       // caps of user 1 in ratio order
    std::vector<double> p2;
    std::vector<double> pref1;    // pref1[j] = sum of p1[0..j)
    std::vector<double> suff2;    // suff2[j] = sum of p2[j..n)
    std::vector<double> rpref1;   // cumulative exclusive rates, user 1
    std::vector<double> rsuff2;
};

OrderedCaps ordered_caps(const GameInstance& inst) {
    const std::size_t n = inst.bins();
    OrderedCaps oc;
    oc.order = order_bins(inst);
    oc.p1.resize(n);
    oc.p2.resize(n);
    oc.pref1.assign(n + 1, 0.0);
    oc.suff2.assign(n + 1, 0.0);
    oc.rpref1.assign(n + 1, 0.0);
    oc.rsuff2.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = oc.order[j];
        oc.p1[j] = inst.mask().pmax(0, k);
        oc.p2[j] = inst.mask().pmax(1, k);
        oc.pref1[j + 1] = oc.pref1[j] + oc.p1[j];
        oc.rpref1[j + 1] = oc.rpref1[j] + exclusive_rate(inst, 0, k, oc.p1[j]);
    }
    for (std::size_t j = n; j-- > 0;) {
        const std::size_t k = oc.order[j];
        oc.suff2[j] = oc.suff2[j + 1] + oc.p2[j];
        oc.rsuff2[j] =
            oc.rsuff2[j + 1] + exclusive_rate(inst, 1, k, oc.p2[j]);
    }
    return oc;
}

void require_two_user_tpc(const GameInstance& inst, const char* who) {
    if (inst.users() != 2)
        throw std::invalid_argument(std::string(who) + ": two-user games only");
    if (!inst.has_tpc())
        throw std::invalid_argument(std::string(who) +
                                    ": needs total-power limits");
}

}  // namespace

Classification classify(const GameInstance& inst) {
    require_two_user_tpc(inst, "classify");
    const std::size_t n = inst.bins();
    const auto oc = ordered_caps(inst);
    const double P1 = inst.total_power(0), P2 = inst.total_power(1);

    Classification cls;
    cls.bin_order = oc.order;

    for (std::size_t pos = 0; pos < n && !cls.witness_bin; ++pos) {
        const double lhs = std::min(1.0, (P1 - oc.pref1[pos]) / oc.p1[pos]);
        const double rhs =
            std::max(0.0, (oc.suff2[pos] - P2) / oc.p2[pos]);
        if (lhs >= rhs && lhs >= 0.0 && rhs <= 1.0) {
            cls.witness_bin = pos;
            cls.witness_lo = std::clamp(rhs, 0.0, 1.0);
            cls.witness_hi = std::clamp(lhs, 0.0, 1.0);
        }
    }
    cls.kind = cls.witness_bin ? SystemKind::BandwidthDominant
                               : SystemKind::PowerDominant;

    // Affordable-bandwidth covers: user 1 buys bins from the front of the
    // ratio order, user 2 from the back, fractional last bin included.
    std::size_t k1 = 0;
    while (k1 < n && oc.pref1[k1 + 1] <= P1) ++k1;
    double b1 = k1 < n ? k1 + (P1 - oc.pref1[k1]) / oc.p1[k1]
                       : static_cast<double>(n);
    std::size_t k2 = 0;
    while (k2 < n && oc.suff2[n - k2 - 1] <= P2) ++k2;
    double b2 = k2 < n
                    ? k2 + (P2 - oc.suff2[n - k2]) / oc.p2[n - k2 - 1]
                    : static_cast<double>(n);
    cls.tau = 1.0 - (b1 + b2) / static_cast<double>(n);
    return cls;
}

SolveReport comparative_advantage_allocation(const GameInstance& inst) {
    require_two_user_tpc(inst, "comparative_advantage_allocation");
    const std::size_t n = inst.bins();
    const auto oc = ordered_caps(inst);

    Allocation alloc(2, n);
    double budget1 = inst.total_power(0);
    for (std::size_t j = 0; j < n && budget1 > 0.0; ++j) {
        const double a = std::min(1.0, budget1 / oc.p1[j]);
        alloc.a(0, oc.order[j]) = a;
        alloc.p(0, oc.order[j]) = inst.mask().pmax(0, oc.order[j]);
        budget1 -= a * oc.p1[j];
    }
    double budget2 = inst.total_power(1);
    for (std::size_t j = n; j-- > 0 && budget2 > 0.0;) {
        double a = std::min(1.0, budget2 / oc.p2[j]);
        a = std::min(a, 1.0 - alloc.a(0, oc.order[j]));
        if (a <= 0.0) break;
        alloc.a(1, oc.order[j]) = a;
        alloc.p(1, oc.order[j]) = inst.mask().pmax(1, oc.order[j]);
        budget2 -= a * oc.p2[j];
    }

    SolveReport report;
    report.solver = "comparative-advantage";
    report.alloc = std::move(alloc);
    report.rates = report.alloc.rates(inst);
    report.disagreement.assign(2, 0.0);
    return report;
}

SolveReport solve_bandwidth_dominant(const GameInstance& inst) {
    require_two_user_tpc(inst, "solve_bandwidth_dominant");
    const std::size_t n = inst.bins();
    const auto oc = ordered_caps(inst);
    const double P1 = inst.total_power(0), P2 = inst.total_power(1);
    const UtilityPoint origin{{0.0, 0.0}, "origin"};

    double best_val = -std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;
    double best_beta = 0.0;
    bool found = false;

    for (std::size_t pos = 0; pos < n; ++pos) {
        const double beta_lo =
            std::max(0.0, (oc.suff2[pos] - P2) / oc.p2[pos]);
        const double beta_hi =
            std::min(1.0, (P1 - oc.pref1[pos]) / oc.p1[pos]);
        if (beta_hi < beta_lo) continue;

        const std::size_t k = oc.order[pos];
        const double r1k = exclusive_rate(inst, 0, k, oc.p1[pos]);
        const double r2k = exclusive_rate(inst, 1, k, oc.p2[pos]);
        const UtilityPoint hi{
            {oc.rpref1[pos] + beta_hi * r1k, oc.rsuff2[pos + 1] + (1.0 - beta_hi) * r2k},
            "hi"};
        const UtilityPoint lo{
            {oc.rpref1[pos] + beta_lo * r1k, oc.rsuff2[pos + 1] + (1.0 - beta_lo) * r2k},
            "lo"};
        try {
            const auto sb = nb_on_segment(hi, lo, origin);
            const double val = log_nf(sb.point, origin);
            if (!found || val > best_val) {
                best_val = val;
                best_pos = pos;
                best_beta = beta_lo + sb.lambda * (beta_hi - beta_lo);
                found = true;
            }
        } catch (const BelowDisagreement&) {
        }
    }
    if (!found)
        throw DegenerateRegion(
            "bandwidth-dominant boundary holds no point with positive rates");

    Allocation alloc(2, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = oc.order[j];
        double a1 = 0.0, a2 = 0.0;
        if (j < best_pos) a1 = 1.0;
        else if (j == best_pos) { a1 = best_beta; a2 = 1.0 - best_beta; }
        else a2 = 1.0;
        alloc.a(0, k) = a1;
        alloc.a(1, k) = a2;
        alloc.p(0, k) = a1 > 0.0 ? inst.mask().pmax(0, k) : 0.0;
        alloc.p(1, k) = a2 > 0.0 ? inst.mask().pmax(1, k) : 0.0;
    }

    SolveReport report;
    report.solver = "tpc-bandwidth-dominant";
    report.alloc = std::move(alloc);
    report.rates = report.alloc.rates(inst);
    report.disagreement.assign(2, 0.0);
    report.log_nf = log_nf(report.rates, report.disagreement);
    report.beta = best_beta;
    report.shared_bin = (best_beta > 0.0 && best_beta < 1.0)
                            ? static_cast<int>(oc.order[best_pos])
                            : -1;
    return report;
}

namespace {

std::vector<std::size_t> support_of(const std::vector<double>& power) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < power.size(); ++k)
        if (power[k] > kSupportTol) out.push_back(k);
    return out;
}

std::vector<std::size_t> all_bins(std::size_t n) {
    std::vector<std::size_t> out(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::vector<std::size_t> minus_set(std::size_t n,
                                   const std::vector<std::size_t>& drop) {
    std::vector<char> gone(n, 0);
    for (std::size_t k : drop) gone[k] = 1;
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k)
        if (!gone[k]) out.push_back(k);
    return out;
}

SharePoint share_point(const GameInstance& inst, const WaterfillResult& wf1,
                       const WaterfillResult& wf2) {
    SharePoint pt;
    const std::size_t n = inst.bins();
    pt.alloc = Allocation(2, n);
    pt.bins_user1 = support_of(wf1.power);
    pt.bins_user2 = support_of(wf2.power);
    for (std::size_t k : pt.bins_user1) {
        pt.alloc.a(0, k) = 1.0;
        pt.alloc.p(0, k) = wf1.power[k];
    }
    for (std::size_t k : pt.bins_user2) {
        pt.alloc.a(1, k) = 1.0;
        pt.alloc.p(1, k) = wf2.power[k];
    }
    pt.rates = {wf1.rate, wf2.rate};
    return pt;
}

}  // namespace

SolveReport solve_power_dominant(const GameInstance& inst) {
    require_two_user_tpc(inst, "solve_power_dominant");
    const std::size_t n = inst.bins();
    const auto everything = all_bins(n);

    const auto wf_full_1 = waterfill_on_set(inst, 0, everything);
    const auto wf_full_2 = waterfill_on_set(inst, 1, everything);
    const auto supp1 = support_of(wf_full_1.power);
    const auto supp2 = support_of(wf_full_2.power);

    std::vector<std::size_t> contested;
    {
        std::vector<char> in1(n, 0);
        for (std::size_t k : supp1) in1[k] = 1;
        for (std::size_t k : supp2)
            if (in1[k]) contested.push_back(k);
    }
    const std::size_t rounds = std::max<std::size_t>(1, contested.size());

    std::vector<SharePoint> points;
    points.reserve(2 * rounds);

    // One side of the sampling: `first` keeps its preferred bins and
    // relinquishes its weakest contested ones round by round; `second`
    // water-fills on whatever `first` left unused.
    auto play_side = [&](std::size_t first, std::size_t second,
                         const std::vector<std::size_t>& first_support) {
        std::vector<std::size_t> by_gain = contested;
        std::sort(by_gain.begin(), by_gain.end(),
                  [&](std::size_t a, std::size_t b) {
                      const double ga = inst.channels().gain(first, first, a);
                      const double gb = inst.channels().gain(first, first, b);
                      if (ga != gb) return ga < gb;
                      return a < b;
                  });
        for (std::size_t round = 0; round < rounds; ++round) {
            WaterfillResult wf_first;
            if (round == 0) {
                wf_first = waterfill_on_set(inst, first, first_support);
            } else {
                const std::vector<std::size_t> relinquish(
                    by_gain.begin(), by_gain.begin() + round);
                wf_first =
                    waterfill_on_set(inst, first, minus_set(n, relinquish));
            }
            const auto wf_second = waterfill_on_set(
                inst, second, minus_set(n, support_of(wf_first.power)));
            points.push_back(first == 0 ? share_point(inst, wf_first, wf_second)
                                        : share_point(inst, wf_second, wf_first));
        }
    };
    play_side(0, 1, supp1);
    play_side(1, 0, supp2);

    std::vector<UtilityPoint> utility;
    utility.reserve(points.size());
    for (std::size_t idx = 0; idx < points.size(); ++idx)
        utility.push_back(
            UtilityPoint{points[idx].rates, std::to_string(idx)});
    const Frontier frontier = pareto_frontier(utility);

    const UtilityPoint origin{{0.0, 0.0}, "origin"};
    FrontierBargain fb;
    try {
        fb = nb_on_frontier(frontier, origin);
    } catch (const BelowDisagreement&) {
        throw DegenerateRegion(
            "every sampled point leaves one user at zero rate");
    }

    SolveReport report;
    report.solver = "tpc-power-dominant";
    report.rates = fb.point.rates;
    report.disagreement.assign(2, 0.0);
    report.log_nf = log_nf(report.rates, report.disagreement);
    report.lambda = fb.lambda;
    report.share_a = points[std::stoul(frontier.vertices[fb.segment_a].tag)];
    report.share_b = points[std::stoul(frontier.vertices[fb.segment_b].tag)];
    return report;
}

double theorem7_bound(const GameInstance& inst, const SolveReport& oracle) {
    require_two_user_tpc(inst, "theorem7_bound");
    if (!oracle.share_a || !oracle.share_b)
        throw std::invalid_argument(
            "theorem7_bound: oracle report lacks its generating points");
    const std::size_t n = inst.bins();

    const auto supp1 =
        support_of(waterfill_on_set(inst, 0, all_bins(n)).power);
    const auto supp2 =
        support_of(waterfill_on_set(inst, 1, all_bins(n)).power);

    // share_a favors user 1 (frontier order), share_b favors user 2.
    const double num2 =
        waterfill_on_set(inst, 1, oracle.share_b->bins_user2).rate;
    const double den2 = waterfill_on_set(inst, 1, minus_set(n, supp2)).rate;
    const double num1 =
        waterfill_on_set(inst, 0, oracle.share_a->bins_user1).rate;
    const double den1 = waterfill_on_set(inst, 0, minus_set(n, supp1)).rate;

    const double inf = std::numeric_limits<double>::infinity();
    const double term2 = den2 > 0.0 ? std::log(num2 / den2) : inf;
    const double term1 = den1 > 0.0 ? std::log(num1 / den1) : inf;
    return std::min(term1, term2);
}

SolveReport solve_tpc(const GameInstance& inst) {
    require_two_user_tpc(inst, "solve_tpc");
    const Classification cls = classify(inst);
    SolveReport report = cls.kind == SystemKind::BandwidthDominant
                             ? solve_bandwidth_dominant(inst)
                             : solve_power_dominant(inst);
    report.classification = cls;
    return report;
}

}  // namespace nbgame
