#include "nbgame/dual_decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nbgame {

SubproblemSolution solve_subproblem(const std::vector<double>& r, double rne,
                                    const std::vector<double>& lambda) {
    const std::size_t n = r.size();
    if (lambda.size() != n)
        throw std::invalid_argument("solve_subproblem: shape mismatch");

    double total = 0.0;
    for (double v : r) total += v;
    if (!(total > rne))
        throw Infeasible("no time share can lift the rate above the fallback");

    std::vector<double> alpha(n, 0.0);

    // Bins with no rate contribute nothing: free ones default to 1,
    // priced ones to 0.
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < n; ++k) {
        if (r[k] > 0.0) {
            active.push_back(k);
        } else if (lambda[k] == 0.0) {
            alpha[k] = 1.0;
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    auto ratio = [&](std::size_t k) {
        return lambda[k] > 0.0 ? r[k] / lambda[k] : inf;
    };
    std::stable_sort(active.begin(), active.end(),
                     [&](std::size_t a, std::size_t b) {
                         return ratio(a) > ratio(b);
                     });

    // Self-consistency scan: with threshold t = sum(alpha r) - rne, bin k
    // is fully on when r_k/lambda_k > t. The step function of included
    // rate crosses the identity once; the crossing is either inside a
    // plateau (all-integer alpha) or at a kink (one fractional bin).
    const std::size_t kcnt = active.size();
    double cum = 0.0;
    double t_star = -1.0;
    bool solved = false;
    for (std::size_t m = 0; m <= kcnt && !solved; ++m) {
        const double t = cum - rne;
        const double lo = m < kcnt ? ratio(active[m]) : 0.0;
        const double hi = m > 0 ? ratio(active[m - 1]) : inf;
        if (t > 0.0 && t >= lo && t <= hi) {
            for (std::size_t j = 0; j < m; ++j) alpha[active[j]] = 1.0;
            t_star = t;
            solved = true;
            break;
        }
        if (m < kcnt) {
            const double kink = ratio(active[m]);
            if (std::isfinite(kink) && kink > 0.0 && cum - rne <= kink &&
                cum + r[active[m]] - rne >= kink) {
                for (std::size_t j = 0; j < m; ++j) alpha[active[j]] = 1.0;
                alpha[active[m]] =
                    std::clamp((kink + rne - cum) / r[active[m]], 0.0, 1.0);
                t_star = kink;
                solved = true;
                break;
            }
            cum += r[active[m]];
        }
    }
    if (!solved)
        throw Infeasible("subproblem threshold scan found no positive gap");

    double penalty = 0.0;
    for (std::size_t k = 0; k < n; ++k) penalty += lambda[k] * alpha[k];
    return SubproblemSolution{std::move(alpha), std::log(t_star) - penalty};
}

std::vector<double> master_update(const std::vector<double>& lambda,
                                  const std::vector<std::vector<double>>& alphas,
                                  double delta) {
    std::vector<double> out(lambda.size());
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        double occ = 0.0;
        for (const auto& a : alphas) occ += a[k];
        out[k] = std::max(0.0, lambda[k] - delta * (1.0 - occ));
    }
    return out;
}

SolveReport run_dual(const GameInstance& inst, const DualConfig& cfg) {
    const ProblemView view = mbody_problem(inst);
    const std::size_t m = view.users, n = view.bins;

    std::vector<double> lambda =
        cfg.lambda0.empty() ? std::vector<double>(n, 0.0) : cfg.lambda0;
    if (lambda.size() != n)
        throw std::invalid_argument("run_dual: lambda0 has wrong length");

    SolveReport report;
    report.solver = "dual-decomposition";
    report.disagreement = view.rne;

    std::vector<std::vector<double>> alphas(m);
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iter = 0;

    while (iter < cfg.max_iters) {
        ++iter;
        // One bulk-synchronous round: broadcast, independent agent
        // solves, gather, master step.
        const Broadcast bc{iter, lambda};
        double dual_obj = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> ri(view.rate.begin() + i * n,
                                   view.rate.begin() + (i + 1) * n);
            auto sol = solve_subproblem(ri, view.rne[i], bc.lambda);
            dual_obj += sol.objective;
            Response resp{bc.round, i, std::move(sol.alpha)};
            alphas[resp.user] = std::move(resp.alpha);
        }
        for (double l : lambda) dual_obj += l;

        const double step =
            cfg.diminishing_step ? cfg.delta / std::sqrt(double(iter)) : cfg.delta;
        std::vector<double> next = master_update(lambda, alphas, step);
        residual = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            residual = std::max(residual, std::abs(next[k] - lambda[k]));

        if (cfg.record_trace) {
            IterSample sample;
            sample.iter = iter;
            sample.rates.resize(m);
            double primal = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double rate = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    rate += alphas[i][k] * view.r(i, k);
                sample.rates[i] = rate;
                primal += std::log(rate - view.rne[i]);
            }
            sample.log_nf = primal;
            sample.dual_objective = dual_obj;
            sample.residual = residual;
            report.trace.push_back(std::move(sample));
        }

        if (residual <= cfg.xi) {
            converged = true;
            break;
        }
        lambda = std::move(next);
    }

    report.iterations = iter;
    report.residual = residual;
    if (!converged)
        throw NoConvergence("dual decomposition hit the iteration cap", residual);

    // Recover a primal-feasible point: scale each oversubscribed bin back.
    Allocation alloc(m, n);
    for (std::size_t k = 0; k < n; ++k) {
        double occ = 0.0;
        for (std::size_t i = 0; i < m; ++i) occ += alphas[i][k];
        const double scale = occ > 1.0 ? 1.0 / occ : 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            alloc.a(i, k) = alphas[i][k] * scale;
            alloc.p(i, k) = alloc.a(i, k) > 0.0 ? inst.mask().pmax(i, k) : 0.0;
        }
    }
    report.alloc = std::move(alloc);
    report.rates = report.alloc.rates(inst);
    report.log_nf = log_nf(report.rates, view.rne);
    return report;
}

}  // namespace nbgame
