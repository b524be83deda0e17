#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "telegate/dv_montecarlo.hpp"

using namespace telegate;

TEST_CASE("rng streams are deterministic and independent") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    bool identical = true, differs = false;
    for (int i = 0; i < 100; ++i) {
        double va = a.uniform01();
        identical = identical && (va == b.uniform01());
        differs = differs || (va != c.uniform01());
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("factory constants") {
    CHECK(kBellFactory.photons_per_attempt == 4);
    CHECK(kBellFactory.success_prob == Catch::Approx(3.0 / 16.0));
    CHECK(kGhz3Factory.photons_per_attempt == 6);
    CHECK(kGhz3Factory.success_prob == Catch::Approx(1.0 / 32.0));
    CHECK(kKnillCsign.success_prob == Catch::Approx(2.0 / 27.0));
    CHECK(kAdvancedBm.success_prob == 0.75);
    CHECK(kStandardBm.success_prob == 0.5);
}

TEST_CASE("analytic expected costs") {
    CHECK(expected_cost_res_state(ResRoute::knill) == Catch::Approx(603.0).epsilon(1e-12));
    CHECK(expected_cost_res_state(ResRoute::cluster_std) ==
          Catch::Approx(768.0).epsilon(1e-12));
    CHECK(expected_cost_res_state(ResRoute::cluster_adv) ==
          Catch::Approx(1552.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mean Monte-Carlo cost tracks the expectation") {
    for (ResRoute route :
         {ResRoute::knill, ResRoute::cluster_std, ResRoute::cluster_adv}) {
        double mc = mean_cost_per_res(route, 20000, 42);
        CHECK(mc == Catch::Approx(expected_cost_res_state(route)).epsilon(0.05));
    }
}

TEST_CASE("route names round-trip") {
    for (ResRoute route :
         {ResRoute::knill, ResRoute::cluster_std, ResRoute::cluster_adv})
        CHECK(route_from_name(route_name(route)) == route);
    CHECK_THROWS_AS(route_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("resource curve basics") {
    std::vector<long long> grid{0, 500, 1000, 2000, 4000, 6000};
    ResourceCurve curve = simulate_res_state_curve(ResRoute::cluster_adv, grid, 2000, 7);
    REQUIRE(curve.samples.size() == grid.size());
    CHECK(curve.samples[0].success_prob == 0.0);
    CHECK(curve.samples.back().success_prob > 0.99);
    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
        double slack = 3.0 * (curve.samples[i].stderr_ + curve.samples[i - 1].stderr_);
        CHECK(curve.samples[i].success_prob >=
              curve.samples[i - 1].success_prob - slack);
    }
}

TEST_CASE("curves are reproducible at fixed seed") {
    std::vector<long long> grid{200, 800, 1600};
    ResourceCurve a = simulate_res_state_curve(ResRoute::knill, grid, 3000, 123);
    ResourceCurve b = simulate_res_state_curve(ResRoute::knill, grid, 3000, 123);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.samples[i].success_prob == b.samples[i].success_prob);
        CHECK(a.samples[i].stderr_ == b.samples[i].stderr_);
    }
}

TEST_CASE("GHZ joining") {
    CHECK(ghz_join(3, 3, true) == 4);
    CHECK(ghz_join(2, 2, true) == 2);
    CHECK(ghz_join(5, 4, true) == 7);
    CHECK(ghz_join(3, 3, false) == 0);
    CHECK_THROWS_AS(ghz_join(1, 3, true), std::invalid_argument);
}

TEST_CASE("analytic ancilla-cost estimate") {
    CHECK(grice_cost_estimate(4) == Catch::Approx(200.0 * std::pow(8.0 / 3.0, 3)));
    CHECK(grice_cost_estimate(4) == Catch::Approx(3792.6).margin(0.1));
    CHECK(grice_cost_estimate(5) == Catch::Approx(10113.6).margin(0.1));
    CHECK_THROWS_AS(grice_cost_estimate(3), std::invalid_argument);
}

TEST_CASE("boosted-BM trial behavior") {
    // N = 1: no ancillae needed, the standard Bell measurement remains
    RngStream rng0(1, 0);
    GriceTrialStats st1 = run_grice_trial(1, 0, rng0);
    CHECK(st1.p_bm == 0.5);
    CHECK(st1.injected == 0);

    // unlimited budget always completes at the 1 - 2^-N asymptote
    for (int t = 0; t < 20; ++t) {
        RngStream rng(9, t);
        GriceTrialStats st = run_grice_trial(4, -1, rng);
        CHECK(st.complete);
        CHECK(st.p_bm == Catch::Approx(1.0 - std::pow(2.0, -4)));
        CHECK(st.books_balance());
    }

    // photon bookkeeping holds on truncated budgets too
    for (int t = 0; t < 50; ++t) {
        RngStream rng(10, t);
        GriceTrialStats st = run_grice_trial(5, 400 + 37 * t, rng);
        CHECK(st.books_balance());
        CHECK(st.p_bm >= 0.5);
        CHECK(st.p_bm <= 1.0 - std::pow(2.0, -5));
    }
}

TEST_CASE("boosted-BM curve approaches the asymptote") {
    std::vector<long long> grid{0, 2000, 8000, 40000};
    ResourceCurve curve = simulate_grice_cost(4, grid, 400, 5);
    CHECK(curve.samples.front().success_prob == Catch::Approx(0.5).margin(1e-12));
    CHECK(curve.samples.back().success_prob ==
          Catch::Approx(1.0 - std::pow(2.0, -4)).margin(0.005));
}

TEST_CASE("completion-cost statistics") {
    double mean = grice_completion_cost(5, 400, 42);
    long long q80 = grice_required_sources(5, 400, 42, 0.8);
    CHECK(mean > grice_cost_estimate(5));      // attrition above the ideal count
    CHECK(q80 > static_cast<long long>(mean));  // right-skewed distribution
    CHECK(grice_required_sources(5, 400, 42, 0.8) == q80);  // deterministic
}

TEST_CASE("gate quality") {
    CHECK(dv_quality(1.0, 0.5) == 0.25);
    CHECK(dv_quality(1.0, 0.75) == Catch::Approx(0.5625));
    CHECK(dv_quality(0.0, 0.9) == 0.0);
    CHECK_THROWS_AS(dv_quality(1.2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(dv_quality(0.5, -0.1), std::invalid_argument);
}
