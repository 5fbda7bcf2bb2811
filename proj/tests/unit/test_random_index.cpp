#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "gosx/errors.hpp"
#include "gosx/limit_laws.hpp"
#include "gosx/montecarlo.hpp"
#include "gosx/random_index.hpp"

using namespace gosx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
double exp_mixture(const F& f) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double z) { return f(z) * std::exp(-z); }, 1e-13);
}

template <class F>
double uniform_mixture(const F& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13) / (b - a);
}

MixtureQuery uu_query(const GosParams& p, int r, int s, double k1, double k2, const IndexLaw& law) {
    return MixtureQuery{p, RankPair{r, s, Regime::upper_upper}, LimitPoint{k1, k2}, law};
}

}  // namespace

TEST_CASE("exponential mixtures of the marginals are geometric-type closed forms") {
    // int (1 - Gamma_R(z t)) e^{-z} dz = 1 - (t / (1 + t))^R and
    // int Gamma_r(z rho) e^{-z} dz = (rho / (1 + rho))^r.
    const IndexLaw law = IndexLaw::unit_exponential();
    for (double m : {-0.5, 0.0, 1.0}) {
        for (double k : {0.4, 1.0, 2.5}) {
            const GosParams p = make_params(m, k, 10);
            for (int r : {1, 2, 5}) {
                for (double v : {0.05, 0.8, 3.0, 20.0}) {
                    const double t = std::pow(v, m + 1.0);
                    CHECK(mixture_marginal(ExtremeSide::upper, p, r, v, law) ==
                          doctest::Approx(1.0 - std::pow(t / (1.0 + t), p.effective_rank(r))).epsilon(1e-10));
                    CHECK(mixture_marginal(ExtremeSide::lower, p, r, v, law) ==
                          doctest::Approx(std::pow(v / (1.0 + v), r)).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("max under the geometric index is logistic") {
    const GosParams p = make_params(0.0, 1.0, 10);
    const IndexLaw law = IndexLaw::unit_exponential();
    for (double x = -6.0; x <= 6.0; x += 0.5) {
        const double got = mixture(uu_query(p, 2, 1, 0.0, std::exp(-x), law));
        CHECK(got == doctest::Approx(1.0 / (1.0 + std::exp(-x))).epsilon(1e-10));
    }
}

TEST_CASE("joint mixtures against direct quadrature over z") {
    const IndexLaw expo = IndexLaw::unit_exponential();
    const IndexLaw flat = IndexLaw::parse("uniform:0.5:1.5");
    for (double m : {-0.5, 0.0, 1.0}) {
        const GosParams p = make_params(m, 1.5, 10);
        const double m1 = m + 1.0;
        for (double k1 : {0.3, 1.2, 2.5}) {
            for (double k2 : {0.1, 0.9}) {
                const double t1 = std::pow(k1, m1);
                const double t2 = std::pow(k2, m1);
                auto uu = [&](double z) { return omega_uu_powered(p, 3, 1, z * t1, z * t2); };
                CHECK(mixture(uu_query(p, 3, 1, k1, k2, expo)) == doctest::Approx(exp_mixture(uu)).epsilon(1e-9));
                CHECK(mixture(uu_query(p, 3, 1, k1, k2, flat)) == doctest::Approx(uniform_mixture(uu, 0.5, 1.5)).epsilon(1e-9));

                auto ll = [&](double z) { return omega_ll(1, 3, z * k1, z * (k1 + k2)); };
                const MixtureQuery lq{p, RankPair{1, 3, Regime::lower_lower}, LimitPoint{k1, k1 + k2}, expo};
                CHECK(mixture(lq) == doctest::Approx(exp_mixture(ll)).epsilon(1e-9));

                auto lu = [&](double z) { return boost::math::gamma_p(2, z * k1) * boost::math::gamma_q(p.effective_rank(1), z * t2); };
                const MixtureQuery luq{p, RankPair{2, 1, Regime::lower_upper}, LimitPoint{k1, k2}, expo};
                CHECK(mixture_lu_joint(luq) == doctest::Approx(exp_mixture(lu)).epsilon(1e-9));
                const double product = mixture_marginal(ExtremeSide::lower, p, 2, k1, expo) *
                                       mixture_marginal(ExtremeSide::upper, p, 1, k2, expo);
                CHECK(mixture_lu(luq) == doctest::Approx(product).epsilon(1e-12));
                CHECK(std::fabs(mixture_lu(luq) - mixture_lu_joint(luq)) > 1e-6);
            }
        }
    }
}

TEST_CASE("degenerate index at one reduces every mixture to the fixed-size limit") {
    Rng rng(11, 3);
    const IndexLaw one = IndexLaw::degenerate(1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double m = -0.6 + 2.5 * rng.uniform();
        const double k = 0.2 + 3.0 * rng.uniform();
        const GosParams p = make_params(m, k, 10);
        const int s = 1 + static_cast<int>(3 * rng.uniform());
        const int r = s + 1 + static_cast<int>(3 * rng.uniform());
        const double v1 = 4.0 * rng.uniform();
        const double v2 = 4.0 * rng.uniform();
        CHECK(mixture(uu_query(p, r, s, v1, v2, one)) == doctest::Approx(omega_uu(p, r, s, v1, v2)).epsilon(1e-12));
        CHECK(mixture(MixtureQuery{p, RankPair{s, r, Regime::lower_lower}, LimitPoint{v1, v2}, one}) ==
              doctest::Approx(omega_ll(s, r, v1, v2)).epsilon(1e-12));
        const MixtureQuery luq{p, RankPair{r, s, Regime::lower_upper}, LimitPoint{v1, v2}, one};
        CHECK(mixture_lu(luq) == doctest::Approx(omega_lu_product(p, r, s, v1, v2)).epsilon(1e-12));
        CHECK(mixture_lu_joint(luq) == doctest::Approx(omega_lu_product(p, r, s, v1, v2)).epsilon(1e-12));
    }
}

TEST_CASE("mixtures are distribution functions") {
    const GosParams p = make_params(0.5, 1.0, 10);
    const IndexLaw law = IndexLaw::unit_exponential();
    double prev = 0.0;
    for (double x = -5.0; x <= 8.0; x += 0.25) {
        const double v = mixture(uu_query(p, 2, 1, std::exp(-x), std::exp(-x - 0.3), law));
        CHECK(v >= prev - 1e-12);
        CHECK(v <= 1.0 + 1e-12);
        prev = v;
    }
    CHECK(prev > 0.999);
    CHECK(mixture(uu_query(p, 2, 1, kInf, 1.0, law)) == doctest::Approx(0.0));
}

TEST_CASE("index laws: grammar, df and tabulated files") {
    CHECK(IndexLaw::parse("degenerate:2").kind() == IndexLaw::Kind::degenerate);
    CHECK(IndexLaw::parse("degenerate:2").point() == 2.0);
    CHECK(IndexLaw::parse("exponential").cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
    const IndexLaw flat = IndexLaw::parse("uniform:0.5:1.5");
    CHECK(flat.cdf(0.4) == 0.0);
    CHECK(flat.cdf(1.0) == doctest::Approx(0.5));
    CHECK(flat.cdf(2.0) == 1.0);
    CHECK(h_cdf(IndexLaw::degenerate(1.0), 0.999) == 0.0);
    CHECK(h_cdf(IndexLaw::degenerate(1.0), 1.0) == 1.0);
    CHECK(flat.integrate([](double z) { return z * z; }) == doctest::Approx((1.5 * 1.5 * 1.5 - 0.125) / 3.0).epsilon(1e-12));

    const auto path = std::filesystem::temp_directory_path() / "gosx_index_law_test.csv";
    {
        std::ofstream out(path);
        out << "z,H\n0,0\n0.5,0\n1.5,1\n";
    }
    const IndexLaw from_file = IndexLaw::parse("tabulated:" + path.string());
    CHECK(from_file.kind() == IndexLaw::Kind::tabulated);
    CHECK(from_file.cdf(0.75) == doctest::Approx(0.25));
    std::filesystem::remove(path);

    CHECK_THROWS(IndexLaw::parse("poisson"));
    CHECK_THROWS(IndexLaw::parse("degenerate:-1"));
    CHECK_THROWS(IndexLaw::tabulated({{0.0, 0.0}, {1.0, 0.5}}));
    CHECK_THROWS(IndexLaw::tabulated({{0.0, 0.0}, {1.0, 0.7}, {0.5, 1.0}}));
    CHECK_THROWS(IndexLaw::from_csv("/nonexistent/gosx.csv"));
}
