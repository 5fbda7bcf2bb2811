#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "gosx/errors.hpp"
#include "gosx/gos.hpp"
#include "gosx/montecarlo.hpp"

using namespace gosx;

namespace {

SimConfig base_config(Regime regime, int r, int s, int n, double m, double k) {
    SimConfig cfg;
    cfg.params = make_params(m, k, n);
    cfg.model = DistributionModel::exponential(1.0);
    cfg.ranks = RankPair{r, s, regime};
    cfg.index = IndexSpec::parse("fixed");
    cfg.replications = 40000;
    cfg.seed = 99;
    cfg.threads = 0;
    return cfg;
}

}  // namespace

TEST_CASE("generator streams are deterministic, distinct and open-interval uniform") {
    Rng a(7, 0);
    Rng b(7, 0);
    Rng c(7, 1);
    Rng d(8, 0);
    std::set<std::uint64_t> firsts;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next();
        CHECK(va == b.next());
        firsts.insert(va);
    }
    CHECK(firsts.size() == 100);
    CHECK(Rng(7, 0).next() != c.next());
    CHECK(Rng(7, 0).next() != d.next());
    Rng u(1, 2);
    double sum = 0.0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        const double x = u.uniform();
        REQUIRE(x > 0.0);
        REQUIRE(x < 1.0);
        sum += x;
    }
    CHECK(std::fabs(sum / draws - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / draws));
}

TEST_CASE("index specifications") {
    CHECK(IndexSpec::parse("fixed").mode == IndexMode::fixed);
    CHECK(IndexSpec::parse("geometric").limit_law().kind() == IndexLaw::Kind::unit_exponential);
    const IndexSpec dep = IndexSpec::parse("dependent:0.5:1.5");
    CHECK(dep.mode == IndexMode::dependent);
    CHECK(dep.limit_law().cdf(1.0) == doctest::Approx(0.5));
    CHECK(IndexSpec::parse("dependent:2").limit_law().kind() == IndexLaw::Kind::degenerate);
    CHECK(IndexSpec::parse(dep.describe()).t_high == 1.5);
    CHECK_THROWS(IndexSpec::parse("dependent:1.5:0.5"));
    CHECK_THROWS(IndexSpec::parse("random"));
}

TEST_CASE("geometric index over n is asymptotically unit exponential") {
    const IndexSpec geo = IndexSpec::parse("geometric");
    const int n = 1000;
    const int draws = 100000;
    Rng rng(3, 0);
    std::vector<double> z(draws);
    for (int i = 0; i < draws; ++i) {
        z[i] = sample_random_index(geo, n, 1, rng) / static_cast<double>(n);
        REQUIRE(z[i] >= 1.0 / n);
    }
    for (double q : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        const double p = 1.0 - std::exp(-q);
        const double got = std::count_if(z.begin(), z.end(), [&](double v) { return v <= q; }) / static_cast<double>(draws);
        CHECK(std::fabs(got - p) < 4.0 * std::sqrt(p * (1.0 - p) / draws) + 1.0 / n);
    }
    Rng other(3, 1);
    CHECK(sample_random_index(geo, 5, 50, other) >= 50);
}

TEST_CASE("dependent index stays within its support and reports its uniform") {
    const IndexSpec dep = IndexSpec::parse("dependent:0.5:1.5");
    Rng rng(4, 0);
    for (int i = 0; i < 1000; ++i) {
        double v = -1.0;
        const int nu = sample_random_index(dep, 200, 2, rng, &v);
        CHECK(nu >= 100);
        CHECK(nu <= 300);
        CHECK(nu == static_cast<int>(std::ceil(200 * (0.5 + v))));
    }
}

TEST_CASE("sequential uniform samples are ordered with the uniform order-statistic mean") {
    const GosParams p = make_params(0.0, 1.0, 9);
    Rng rng(5, 0);
    double top = 0.0;
    const int reps = 40000;
    for (int i = 0; i < reps; ++i) {
        const auto u = sample_uniform_gos(p, p.n, rng);
        REQUIRE(std::is_sorted(u.begin(), u.end()));
        top += u.back();
    }
    // E[U(n:n)] = n / (n + 1), Var = n / ((n + 1)^2 (n + 2))
    const double se = std::sqrt(9.0 / (100.0 * 11.0) / reps);
    CHECK(std::fabs(top / reps - 0.9) < 4.0 * se);
}

TEST_CASE("fixed-size simulation matches the exact joint df in every regime") {
    struct Case {
        Regime regime;
        int r;
        int s;
    };
    for (const Case c : {Case{Regime::upper_upper, 3, 1}, Case{Regime::lower_lower, 1, 2}, Case{Regime::lower_upper, 2, 1}}) {
        for (double m : {-0.4, 0.0, 1.0}) {
            SimConfig cfg = base_config(c.regime, c.r, c.s, 20, m, 1.7);
            cfg.grid = {{-0.5, 0.5}, {0.0, 1.5}, {1.0, 1.0}, {0.7, -0.2}};
            const auto nc = norming_constants(cfg.model, cfg.params);
            const auto empirical = simulate_empirical_df(cfg);
            const int n = cfg.params.n;
            for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
                const auto [x, y] = cfg.grid[i];
                double exact = 0.0;
                switch (c.regime) {
                    case Regime::upper_upper:
                        exact = joint_upper_df(cfg.params, cfg.model, cfg.ranks, nc.a * x + nc.b, nc.a * y + nc.b);
                        break;
                    case Regime::lower_lower:
                        exact = joint_df_direct(cfg.params, cfg.model, c.r, c.s, nc.c * x + nc.d, nc.c * y + nc.d);
                        break;
                    case Regime::lower_upper:
                        exact = joint_df_direct(cfg.params, cfg.model, c.r, n - c.s + 1, nc.c * x + nc.d, nc.a * y + nc.b);
                        break;
                }
                CAPTURE(to_string(c.regime));
                CAPTURE(m);
                CAPTURE(i);
                const double se = std::sqrt(std::max(exact * (1.0 - exact), 1e-6) / cfg.replications);
                CHECK(std::fabs(empirical[i] - exact) < 4.5 * se);
            }
        }
    }
}

TEST_CASE("reports do not depend on the thread count") {
    SimConfig cfg = base_config(Regime::upper_upper, 2, 1, 300, 0.5, 1.0);
    cfg.index = IndexSpec::parse("geometric");
    cfg.replications = 5000;
    cfg.grid = {{0.0, 0.5}, {1.0, 2.0}};
    cfg.threads = 1;
    const SimulationReport one = run_bivariate_sim(cfg);
    cfg.threads = 7;
    const SimulationReport seven = run_bivariate_sim(cfg);
    CHECK(one.empirical == seven.empirical);
    CHECK(one.to_csv() == seven.to_csv());
    cfg.seed = 100;
    CHECK(run_bivariate_sim(cfg).empirical != one.empirical);
    const auto draws = simulate_normalized(cfg);
    CHECK(draws.size() == 5000u);
    CHECK(draws == simulate_normalized(cfg));
}

TEST_CASE("report carries analytic, fixed limit and standard errors") {
    SimConfig cfg = base_config(Regime::upper_upper, 2, 1, 500, 0.0, 1.0);
    cfg.index = IndexSpec::parse("geometric");
    cfg.replications = 20000;
    cfg.seed = 2024;
    cfg.grid.clear();
    for (double y = -2.0; y <= 4.0; y += 0.5) cfg.grid.push_back({std::numeric_limits<double>::infinity(), y});
    const SimulationReport report = run_bivariate_sim(cfg);
    REQUIRE(report.analytic.size() == cfg.grid.size());
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        CHECK(report.analytic[i] == doctest::Approx(1.0 / (1.0 + std::exp(-cfg.grid[i].y))).epsilon(1e-9));
        CHECK(report.fixed_limit[i] == doctest::Approx(std::exp(-std::exp(-cfg.grid[i].y))).epsilon(1e-9));
    }
    CHECK(report.sup_distance <= 3.0 * report.max_standard_error);
    CHECK(report.sup_distance_fixed > 3.0 * report.max_standard_error);
    CHECK(report.sup_distance == doctest::Approx(ks_distance(report.empirical, report.analytic)));
    const std::string json = report.to_json();
    CHECK(json.find("\"config\"") != std::string::npos);
    CHECK(json.find("\"seed\"") != std::string::npos);
    CHECK(report.to_csv().rfind("x,y,empirical,analytic,fixed_limit,standard_error", 0) == 0);
}

TEST_CASE("configuration validation") {
    SimConfig cfg = base_config(Regime::upper_upper, 2, 1, 50, 0.0, 1.0);
    cfg.grid = {{0.0, 0.0}};
    cfg.replications = 0;
    CHECK_THROWS(run_bivariate_sim(cfg));
    cfg.replications = 10;
    cfg.ranks = RankPair{60, 1, Regime::upper_upper};
    CHECK_THROWS(run_bivariate_sim(cfg));
    CHECK(ks_distance({0.1, 0.5}, {0.2, 0.2}) == doctest::Approx(0.3));
    CHECK_THROWS(ks_distance({0.1}, {0.2, 0.2}));
}
