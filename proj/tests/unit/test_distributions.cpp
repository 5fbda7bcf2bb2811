#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/cauchy.hpp>
#include <boost/math/distributions/exponential.hpp>
#include <boost/math/distributions/laplace.hpp>
#include <boost/math/distributions/logistic.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/pareto.hpp>
#include <boost/math/distributions/rayleigh.hpp>
#include <boost/math/distributions/uniform.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "gosx/distributions.hpp"
#include "gosx/errors.hpp"
#include "gosx/gos.hpp"
#include "gosx/limit_laws.hpp"

using namespace gosx;

namespace {

struct Oracle {
    const char* spec;
    std::function<double(double)> cdf;
    std::function<double(double)> quantile;
};

std::vector<Oracle> oracles() {
    namespace bm = boost::math;
    return {
        {"cauchy", [](double x) { return cdf(bm::cauchy_distribution<>(), x); },
         [](double p) { return quantile(bm::cauchy_distribution<>(), p); }},
        {"pareto(sigma=2.5)", [](double x) { return cdf(bm::pareto_distribution<>(1.0, 2.5), x); },
         [](double p) { return quantile(bm::pareto_distribution<>(1.0, 2.5), p); }},
        {"uniform(theta=3)", [](double x) { return cdf(bm::uniform_distribution<>(-3.0, 3.0), x); },
         [](double p) { return quantile(bm::uniform_distribution<>(-3.0, 3.0), p); }},
        {"beta(alpha=2,beta=0.7)", [](double x) { return cdf(bm::beta_distribution<>(2.0, 0.7), x); },
         [](double p) { return quantile(bm::beta_distribution<>(2.0, 0.7), p); }},
        {"power(alpha=3)", [](double x) { return cdf(bm::beta_distribution<>(3.0, 1.0), x); },
         [](double p) { return quantile(bm::beta_distribution<>(3.0, 1.0), p); }},
        {"normal", [](double x) { return cdf(bm::normal_distribution<>(), x); },
         [](double p) { return quantile(bm::normal_distribution<>(), p); }},
        {"logistic", [](double x) { return cdf(bm::logistic_distribution<>(), x); },
         [](double p) { return quantile(bm::logistic_distribution<>(), p); }},
        {"laplace", [](double x) { return cdf(bm::laplace_distribution<>(), x); },
         [](double p) { return quantile(bm::laplace_distribution<>(), p); }},
        {"lognormal", [](double x) { return cdf(bm::lognormal_distribution<>(), x); },
         [](double p) { return quantile(bm::lognormal_distribution<>(), p); }},
        {"exponential(sigma=2)", [](double x) { return cdf(bm::exponential_distribution<>(0.5), x); },
         [](double p) { return quantile(bm::exponential_distribution<>(0.5), p); }},
        {"rayleigh(sigma=1.5)", [](double x) { return cdf(bm::rayleigh_distribution<>(1.5), x); },
         [](double p) { return quantile(bm::rayleigh_distribution<>(1.5), p); }},
    };
}

}  // namespace

TEST_CASE("cdf and quantile agree with Boost for every family") {
    for (const auto& o : oracles()) {
        CAPTURE(std::string(o.spec));
        const auto model = DistributionModel::parse(o.spec);
        for (int i = 1; i <= 99; ++i) {
            const double p = i / 100.0;
            const double x = o.quantile(p);
            CHECK(model.cdf(x) == doctest::Approx(o.cdf(x)).epsilon(1e-12));
            CHECK(model.quantile(p) == doctest::Approx(x).epsilon(1e-9));
            CHECK(std::fabs(model.cdf(model.quantile(p)) - p) < 1e-9);
        }
    }
}

TEST_CASE("survival keeps relative accuracy in the upper tail") {
    for (const auto& o : oracles()) {
        CAPTURE(std::string(o.spec));
        const auto model = DistributionModel::parse(o.spec);
        for (double q : {1e-6, 1e-10, 1e-14}) {
            const double x = model.inverse_survival(q);
            CHECK(model.survival(x) == doctest::Approx(q).epsilon(1e-8));
            CHECK(model.from_log_survival(std::log(q)) == doctest::Approx(x).epsilon(1e-10));
        }
    }
}

TEST_CASE("distribution spec grammar") {
    CHECK(DistributionModel::parse("Pareto(sigma=2)").spec() == "pareto(sigma=2)");
    CHECK(DistributionModel::parse(" NORMAL ").family() == Family::normal);
    CHECK(DistributionModel::parse("beta(beta=3, alpha=2)").param(0) == 2.0);
    CHECK(DistributionModel::parse("beta(beta=3, alpha=2)").param(1) == 3.0);
    CHECK(DistributionModel::parse("exponential").param(0) == 1.0);
    CHECK(DistributionModel::parse("uniform(theta=ln4)").param(0) == doctest::Approx(std::log(4.0)));
    CHECK_THROWS_AS(DistributionModel::parse("gamma(shape=2)"), DomainError);
    CHECK_THROWS_AS(DistributionModel::parse("pareto(alpha=2)"), DomainError);
    CHECK_THROWS_AS(DistributionModel::parse("pareto(sigma=-1)"), DomainError);
    CHECK_THROWS_AS(DistributionModel::parse("normal("), DomainError);
    try {
        DistributionModel::parse("weird");
        FAIL("expected an error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("rayleigh") != std::string::npos);
    }
    for (const auto& name : DistributionModel::family_names()) {
        const auto base = name.substr(0, name.find('('));
        CHECK(DistributionModel::parse(DistributionModel::parse(base).spec()).spec() == DistributionModel::parse(base).spec());
    }
}

TEST_CASE("symbolic reals") {
    CHECK(parse_real("ln4") == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(parse_real("-ln2") == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
    CHECK(parse_real("pi") == std::numbers::pi);
    CHECK(parse_real("sqrt2") == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(parse_real("exp1") == doctest::Approx(std::numbers::e).epsilon(1e-15));
    CHECK(std::isinf(parse_real("inf")));
    CHECK(parse_real("1e-3") == 1e-3);
    CHECK_THROWS_AS(parse_real("four"), DomainError);
    CHECK_THROWS_AS(parse_real(""), DomainError);
}

TEST_CASE("attraction types") {
    CHECK(DistributionModel::cauchy().attraction(ExtremeSide::upper).type == TailType::frechet);
    CHECK(DistributionModel::pareto(2.0).attraction(ExtremeSide::upper).alpha == 2.0);
    CHECK(DistributionModel::uniform(1.0).attraction(ExtremeSide::lower).type == TailType::weibull);
    CHECK(DistributionModel::beta(2.0, 3.0).attraction(ExtremeSide::upper).alpha == 3.0);
    CHECK(DistributionModel::beta(2.0, 3.0).attraction(ExtremeSide::lower).alpha == 2.0);
    CHECK(DistributionModel::normal().attraction(ExtremeSide::lower).type == TailType::gumbel);
    CHECK(DistributionModel::rayleigh(1.0).attraction(ExtremeSide::lower).alpha == 2.0);
}

TEST_CASE("norming constants drive N Lbar_m to the tail transform") {
    const std::vector<const char*> specs{"cauchy", "pareto(sigma=2)", "uniform(theta=1)", "beta(alpha=2,beta=3)",
                                         "power(alpha=2)", "normal", "logistic", "laplace", "lognormal",
                                         "exponential", "rayleigh"};
    for (const char* spec : specs) {
        const auto model = DistributionModel::parse(spec);
        for (double m : {-0.5, 0.0, 1.0}) {
            const std::string spec_name = spec;
            CAPTURE(spec_name);
            CAPTURE(m);
            const TailTransform up = model.attraction(ExtremeSide::upper);
            const TailTransform low = model.attraction(ExtremeSide::lower);
            double prev_up = 1e300;
            double prev_low = 1e300;
            for (int n : {1000, 100000, 10000000}) {
                const GosParams p = make_params(m, 1.0, n);
                const auto nc = norming_constants(model, p);
                // a x + b is not representable once a drops below ~1e-8 |b|
                if (nc.a < 1e-8 * std::max(1.0, std::fabs(nc.b))) continue;
                double err_up = 0.0;
                double err_low = 0.0;
                for (double tau : {0.25, 0.5, 1.0, 2.0, 3.0}) {
                    double x = 0.0;
                    if (up.type == TailType::gumbel) x = -std::log(tau);
                    else if (up.type == TailType::frechet) x = std::pow(tau, -1.0 / up.alpha);
                    else x = -std::pow(tau, 1.0 / up.alpha);
                    const double want = std::pow(tau, m + 1.0);
                    err_up = std::max(err_up, std::fabs(p.big_n() * lm_bar(p, model, nc.a * x + nc.b) / want - 1.0));
                    const double w = rho_inverse(low, tau);
                    err_low = std::max(err_low, std::fabs(p.big_n() * lm(p, model, nc.c * w + nc.d) / tau - 1.0));
                }
                // exact tails stay at rounding level; the rest shrink strictly
                CAPTURE(err_up);
                CAPTURE(prev_up);
                CHECK((err_up < 1e-8 || err_up < prev_up));
                CHECK((err_low < 1e-8 || err_low < prev_low));
                prev_up = err_up;
                prev_low = err_low;
            }
            CHECK(prev_up < 1.0);
            CHECK(prev_low < 0.3);
        }
    }
}

TEST_CASE("classical normal constants") {
    const GosParams p = make_params(0.0, 1.0, 1000);
    const auto nc = norming_constants(DistributionModel::normal(), p);
    const double s = std::sqrt(2.0 * std::log(1000.0));
    CHECK(nc.a == doctest::Approx(1.0 / s));
    CHECK(nc.b == doctest::Approx(s - (std::log(std::log(1000.0)) + std::log(4.0 * std::numbers::pi)) / (2.0 * s)));
    CHECK(nc.d == doctest::Approx(-nc.b));
}
