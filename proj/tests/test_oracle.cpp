#include <cmath>
#include <random>

#include "doctest.h"
#include "nbgame/dual_decomp.hpp"
#include "nbgame/oracle.hpp"
#include "nbgame/scenario.hpp"
#include "nbgame/smc_game.hpp"
#include "nbgame/tpc_game.hpp"
#include "test_util.hpp"

using namespace nbgame;
using nbgame_test::two_user_from_rates;

TEST_CASE("grid search agrees with the exact split solver") {
    auto inst = two_user_from_rates({2.0, 1.0}, {1.0, 2.0},
                                    Disagreement::Origin);
    auto grid = oracle::grid_nb_two_user_smc(inst, 1e-3);
    auto exact = solve_two_user_smc(inst);
    CHECK(grid.log_nf == doctest::Approx(exact.log_nf).epsilon(1e-6));
    CHECK(grid.rates[0] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("grid search refines towards the exact value") {
    auto inst = two_user_from_rates({1.3, 0.4, 0.9}, {0.5, 1.1, 0.8},
                                    Disagreement::Origin);
    auto exact = solve_two_user_smc(inst);
    auto coarse = oracle::grid_nb_two_user_smc(inst, 1e-2);
    auto fine = oracle::grid_nb_two_user_smc(inst, 1e-4);
    CHECK(coarse.log_nf <= exact.log_nf + 1e-12);
    CHECK(fine.log_nf <= exact.log_nf + 1e-12);
    CHECK(fine.log_nf >= coarse.log_nf - 1e-12);
    CHECK(exact.log_nf - fine.log_nf < 1e-6);
}

TEST_CASE("single-bin bipartition reference splits the exchange segment") {
    auto inst = two_user_from_rates({1.0}, {1.0}, {1.0}, {1.0},
                                    std::vector<double>{0.8, 0.8});
    auto ref = oracle::fdm_ts_oracle(inst);
    // The hull is the segment (R1,0)-(0,R2); symmetric users meet at the
    // midpoint.
    CHECK(ref.rates[0] == doctest::Approx(ref.rates[1]).epsilon(1e-6));
    CHECK(ref.lambda == doctest::Approx(0.5).epsilon(1e-6));
    REQUIRE(ref.share_a.has_value());
    REQUIRE(ref.share_b.has_value());
}

TEST_CASE("bipartition reference carries consistent generating points") {
    ScenarioSpec spec;
    spec.users = 2;
    spec.bins = 5;
    spec.noise = 0.01;
    spec.mask.kind = MaskSpec::Kind::Uniform;
    spec.mask.a = 1.2;
    spec.mask.b = 1.25;
    spec.tpc = {2.0, 2.0};
    auto inst = generate_scenario(spec, 3);
    auto ref = oracle::fdm_ts_oracle(inst);
    REQUIRE(ref.share_a.has_value());
    REQUIRE(ref.share_b.has_value());
    // Mixing the endpoint rates with the reported weight gives the point.
    for (int i = 0; i < 2; ++i)
        CHECK(ref.rates[i] ==
              doctest::Approx(ref.lambda * ref.share_a->rates[i] +
                              (1 - ref.lambda) * ref.share_b->rates[i])
                  .epsilon(1e-9));
    // Each endpoint's bin sets are disjoint and its allocation feasible.
    std::vector<char> seen(inst.bins(), 0);
    for (std::size_t k : ref.share_a->bins_user1) seen[k] += 1;
    for (std::size_t k : ref.share_a->bins_user2) seen[k] += 1;
    for (char c : seen) CHECK(c <= 1);
    CHECK(ref.share_a->alloc.feasible(inst, 1e-9));
    CHECK(ref.share_b->alloc.feasible(inst, 1e-9));
}

TEST_CASE("bipartition reference dominates the sampled scheme") {
    ScenarioSpec spec;
    spec.users = 2;
    spec.bins = 6;
    spec.noise = 0.01;
    spec.mask.kind = MaskSpec::Kind::Uniform;
    spec.mask.a = 1.2;
    spec.mask.b = 1.25;
    spec.tpc = {2.0, 2.0};
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 15 && checked < 6; ++seed) {
        auto inst = generate_scenario(spec, seed);
        if (classify(inst).kind != SystemKind::PowerDominant) continue;
        SolveReport sts;
        try {
            sts = solve_power_dominant(inst);
        } catch (const DegenerateRegion&) {
            continue;
        }
        auto ref = oracle::fdm_ts_oracle(inst);
        const double gap = ref.log_nf - sts.log_nf;
        CHECK(gap >= -1e-9);
        CHECK(gap <= theorem7_bound(inst, ref) + 1e-9);
        ++checked;
    }
    CHECK(checked >= 4);
}

TEST_CASE("bipartition reference refuses oversized instances") {
    std::vector<double> r(14, 1.0);
    auto inst = two_user_from_rates(r, r, std::vector<double>(14, 1.0),
                                    std::vector<double>(14, 1.0),
                                    std::vector<double>{3.0, 3.0});
    CHECK_THROWS(oracle::fdm_ts_oracle(inst));
}

TEST_CASE("gradient reference solves the single-user problem") {
    ProblemView view;
    view.users = 1;
    view.bins = 3;
    view.rate = {1.0, 0.5, 2.0};
    view.rne = {0.3};
    auto pg = oracle::projected_gradient_reference(view);
    for (double a : pg.alpha) CHECK(a == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(pg.log_nf == doctest::Approx(std::log(3.5 - 0.3)).epsilon(1e-6));
}

TEST_CASE("gradient reference agrees with the exact two-user solver") {
    std::mt19937 gen(41);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> r1(4), r2(4);
        for (int k = 0; k < 4; ++k) {
            r1[k] = u(gen);
            r2[k] = u(gen);
        }
        auto inst = two_user_from_rates(r1, r2, Disagreement::Origin);
        auto exact = solve_two_user_smc(inst);
        auto pg = oracle::projected_gradient_reference(mbody_problem(inst));
        CHECK(pg.log_nf == doctest::Approx(exact.log_nf).epsilon(1e-4));
    }
}

TEST_CASE("gradient reference output is feasible and stationary") {
    ScenarioSpec spec;
    spec.users = 3;
    spec.bins = 4;
    spec.noise = 0.01;
    spec.cross_means.assign(9, 0.7);
    spec.mask.kind = MaskSpec::Kind::Rayleigh;
    auto inst = generate_scenario(spec, 6);
    auto view = mbody_problem(inst);
    auto pg = oracle::projected_gradient_reference(view);
    CHECK(pg.residual <= 1e-6);
    for (std::size_t k = 0; k < view.bins; ++k) {
        double occ = 0.0;
        for (std::size_t i = 0; i < view.users; ++i) {
            const double a = pg.alpha[i * view.bins + k];
            CHECK(a >= -1e-9);
            CHECK(a <= 1.0 + 1e-9);
            occ += a;
        }
        CHECK(occ <= 1.0 + 1e-6);
    }
    // Every user clears their fallback with room to spare.
    for (std::size_t i = 0; i < view.users; ++i) {
        double rate = 0.0;
        for (std::size_t k = 0; k < view.bins; ++k)
            rate += pg.alpha[i * view.bins + k] * view.r(i, k);
        CHECK(rate > view.rne[i]);
    }
}
