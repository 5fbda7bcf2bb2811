#include <boost/math/distributions/beta.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gosx/errors.hpp"
#include "gosx/gos.hpp"
#include "gosx/montecarlo.hpp"

using namespace gosx;

namespace {

// P(X_{p1} <= x, X_{p2} <= y), lower ranks p1 < p2, from the product form:
// Lbar_m(X_{p1}) ~ Beta(ell+n-p1, p1) and Lbar_m(X_{p2}) = Lbar_m(X_{p1}) B with
// B ~ Beta(ell+n-p2, p2-p1) independent. X <= x iff Lbar_m(X) >= Lbar_m(x).
double product_oracle(const GosParams& p, const DistributionModel& model, int p1, int p2, double x, double y) {
    if (x > y) x = y;
    const double alpha = lm_bar(p, model, x);
    const double beta = lm_bar(p, model, y);
    if (alpha <= 0.0) return 1.0;
    const boost::math::beta_distribution<> first(p.ell() + p.n - p1, p1);
    const double a2 = p.ell() + p.n - p2;
    const double b2 = p2 - p1;
    auto integrand = [&](double t) { return pdf(first, t) * boost::math::ibetac(a2, b2, std::min(1.0, beta / t)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, alpha, 1.0, 12, 1e-12);
}

double multinomial(int n, int r, int s, double fx, double fy) {
    if (fx > fy) fx = fy;
    double total = 0.0;
    for (int j = s; j <= n; ++j) {
        for (int i = r; i <= j; ++i) {
            total += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(j - i + 1.0) -
                              std::lgamma(n - j + 1.0)) *
                     std::pow(fx, i) * std::pow(fy - fx, j - i) * std::pow(1.0 - fy, n - j);
        }
    }
    return total;
}

const DistributionModel kExpo = DistributionModel::exponential(1.0);

}  // namespace

TEST_CASE("exact joint df against the product oracle, the direct integral and the multinomial count") {
    const std::vector<double> grid{0.3, 0.9, 1.6, 2.7};
    double worst_direct = 0.0;
    double worst_oracle = 0.0;
    for (double m : {0.0, 1.0, -0.5}) {
        for (double k : {1.0, 2.0}) {
            for (int n : {4, 5, 6}) {
                const GosParams p = make_params(m, k, n);
                for (auto [r, s] : {std::pair{2, 1}, {3, 1}, {4, 2}}) {
                    const RankPair pair{r, s, Regime::upper_upper};
                    for (double x : grid) {
                        for (double y : grid) {
                            const double got = joint_upper_df(p, kExpo, pair, x, y);
                            worst_direct = std::max(worst_direct, std::fabs(got - joint_df_direct(p, kExpo, n - r + 1, n - s + 1, x, y)));
                            worst_oracle = std::max(worst_oracle, std::fabs(got - product_oracle(p, kExpo, n - r + 1, n - s + 1, x, y)));
                            if (m == 0.0 && k == 1.0) {
                                CHECK(got == doctest::Approx(multinomial(n, n - r + 1, n - s + 1, kExpo.cdf(x), kExpo.cdf(y))).epsilon(1e-12));
                            }
                        }
                    }
                }
            }
        }
    }
    CHECK(worst_direct < 1e-7);
    CHECK(worst_oracle < 1e-10);
}

TEST_CASE("exact joint df at larger n against the product oracle") {
    const DistributionModel model = DistributionModel::normal();
    for (double m : {-0.3, 0.0, 2.0}) {
        for (int n : {50, 2000}) {
            const GosParams p = make_params(m, 1.5, n);
            const auto nc = norming_constants(model, p);
            for (double x : {-1.0, 0.0, 1.5}) {
                for (double y : {-0.5, 0.5, 2.0}) {
                    const double X = nc.a * x + nc.b;
                    const double Y = nc.a * y + nc.b;
                    CHECK(joint_upper_df(p, model, {3, 1, Regime::upper_upper}, X, Y) ==
                          doctest::Approx(product_oracle(p, model, n - 2, n, X, Y)).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("marginals are incomplete beta ratios") {
    for (double m : {-0.5, 0.0, 1.0}) {
        const GosParams p = make_params(m, 2.0, 30);
        for (double x : {0.1, 1.0, 3.0, 5.0}) {
            const double L = lm(p, kExpo, x);
            for (int r : {1, 2, 5}) {
                CHECK(marginal_lower_df(p, kExpo, r, x) ==
                      doctest::Approx(boost::math::ibeta(r, p.big_n() - r + 1, L)).epsilon(1e-12));
                CHECK(marginal_upper_df(p, kExpo, r, x) ==
                      doctest::Approx(boost::math::ibeta(p.big_n() - p.effective_rank(r) + 1, p.effective_rank(r), L)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("joint df reduces to the marginal of the larger member when x > y") {
    const GosParams p = make_params(0.5, 1.0, 12);
    const RankPair pair{3, 1, Regime::upper_upper};
    for (double y : {0.5, 1.5, 3.0}) {
        CHECK(joint_upper_df(p, kExpo, pair, y + 1.0, y) == doctest::Approx(marginal_upper_df(p, kExpo, 1, y)).epsilon(1e-12));
        CHECK(joint_upper_df(p, kExpo, pair, 1e9, y) == doctest::Approx(marginal_upper_df(p, kExpo, 1, y)).epsilon(1e-12));
    }
    CHECK(joint_upper_df(p, kExpo, pair, 40.0, 50.0) == doctest::Approx(1.0));
    CHECK(joint_upper_df(p, kExpo, pair, 0.0, 1.0) == 0.0);
}

TEST_CASE("joint df is monotone and 2-increasing on random rectangles") {
    Rng rng(77, 0);
    for (int trial = 0; trial < 60; ++trial) {
        const GosParams p = make_params(-0.5 + 2.0 * rng.uniform(), 0.5 + 2.0 * rng.uniform(), 8);
        const RankPair pair{2 + static_cast<int>(rng.uniform() * 3), 1, Regime::upper_upper};
        double x1 = 4.0 * rng.uniform();
        double x2 = 4.0 * rng.uniform();
        double y1 = 4.0 * rng.uniform();
        double y2 = 4.0 * rng.uniform();
        if (x1 > x2) std::swap(x1, x2);
        if (y1 > y2) std::swap(y1, y2);
        const double f22 = joint_upper_df(p, kExpo, pair, x2, y2);
        const double f12 = joint_upper_df(p, kExpo, pair, x1, y2);
        const double f21 = joint_upper_df(p, kExpo, pair, x2, y1);
        const double f11 = joint_upper_df(p, kExpo, pair, x1, y1);
        CHECK(f22 - f12 - f21 + f11 >= -1e-9);
        CHECK(f22 >= f12 - 1e-12);
        CHECK(f22 >= f21 - 1e-12);
        CHECK(f11 >= 0.0);
        CHECK(f22 <= 1.0);
    }
}

TEST_CASE("gamma-kernel representation is only asymptotically exact") {
    const RankPair pair{2, 1, Regime::upper_upper};
    std::vector<double> gaps;
    for (int n : {5, 50, 500, 5000}) {
        const GosParams p = make_params(0.0, 1.0, n);
        const auto nc = norming_constants(kExpo, p);
        double gap = 0.0;
        for (double x : {-0.5, 0.5}) {
            for (double y : {0.0, 1.0}) {
                const double X = nc.a * x + nc.b;
                const double Y = nc.a * y + nc.b;
                gap = std::max(gap, std::fabs(joint_upper_df_gamma_kernel(p, kExpo, pair, X, Y) - joint_upper_df(p, kExpo, pair, X, Y)));
            }
        }
        gaps.push_back(gap);
    }
    CHECK(gaps[0] > 1e-3);
    for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] < gaps[i - 1]);
    CHECK(gaps.back() < 1e-3);
}

TEST_CASE("marginal approaches the incomplete-gamma form as n grows") {
    for (int r : {1, 2, 4}) {
        double prev = 1.0;
        for (int n : {100, 1000, 10000}) {
            const GosParams p = make_params(0.5, 1.0, n);
            const auto nc = norming_constants(kExpo, p);
            double gap = 0.0;
            for (double x : {-1.0, 0.0, 1.0, 2.0}) {
                const double X = nc.a * x + nc.b;
                gap = std::max(gap, std::fabs(marginal_upper_df(p, kExpo, r, X) -
                                              boost::math::gamma_q(p.effective_rank(r), p.big_n() * lm_bar(p, kExpo, X))));
            }
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("Monte Carlo of the sequential construction matches the exact df") {
    const GosParams p = make_params(0.7, 1.3, 7);
    const RankPair pair{3, 1, Regime::upper_upper};
    const std::vector<std::pair<double, double>> points{{0.6, 1.2}, {0.9, 2.0}, {1.3, 1.6}};
    std::vector<int> hits(points.size(), 0);
    const int reps = 100000;
    Rng rng(2024, 9);
    for (int i = 0; i < reps; ++i) {
        const auto u = sample_uniform_gos(p, p.n, rng);
        const double third = kExpo.quantile(u[p.n - 3]);
        const double top = kExpo.quantile(u[p.n - 1]);
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (third <= points[j].first && top <= points[j].second) ++hits[j];
        }
    }
    for (std::size_t j = 0; j < points.size(); ++j) {
        const double exact = joint_upper_df(p, kExpo, pair, points[j].first, points[j].second);
        const double se = std::sqrt(exact * (1.0 - exact) / reps);
        CHECK(std::fabs(hits[j] / static_cast<double>(reps) - exact) < 4.0 * se);
    }
}

TEST_CASE("rank validation") {
    CHECK_THROWS_AS((RankPair{1, 2, Regime::upper_upper}.validate()), RegimeError);
    CHECK_THROWS_AS((RankPair{3, 2, Regime::lower_lower}.validate()), RegimeError);
    CHECK_THROWS_AS((RankPair{7, 1, Regime::upper_upper}.validate(6)), RegimeError);
    CHECK_NOTHROW((RankPair{1, 1, Regime::lower_upper}.validate(6)));
    CHECK(parse_regime("ll") == Regime::lower_lower);
    CHECK(to_string(Regime::lower_upper) == "lu");
    CHECK_THROWS(parse_regime("xx"));
    CHECK_THROWS_AS(joint_df_direct(make_params(0.0, 1.0, 5), kExpo, 3, 2, 1.0, 2.0), RegimeError);
}
