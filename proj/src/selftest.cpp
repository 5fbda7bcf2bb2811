#include "gosx/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gosx/emit.hpp"
#include "gosx/errors.hpp"
#include "gosx/gos.hpp"
#include "gosx/limit_laws.hpp"
#include "gosx/montecarlo.hpp"
#include "gosx/random_index.hpp"
#include "gosx/ranges.hpp"
#include "gosx/specfun.hpp"

namespace gosx {

namespace {

namespace sf = specfun;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
    double measure = 0.0;
    std::string detail;
    /// Checks that compare a margin rather than an error set this explicitly.
    int verdict = -1;  // -1: measure <= tolerance decides
};

class Suite {
public:
    Suite(const SelftestOptions& opts, const std::function<void(const CheckResult&)>& sink)
        : opts_(opts), sink_(sink) {}

    bool wants(const std::string& module) const {
        return opts_.modules.empty() ||
               std::find(opts_.modules.begin(), opts_.modules.end(), module) != opts_.modules.end();
    }

    template <class F>
    void check(const std::string& module, const std::string& name, double tolerance, const F& body) {
        CheckResult res{module, name, false, 0.0, tolerance, {}};
        try {
            const Outcome out = body();
            res.measure = out.measure;
            res.detail = out.detail;
            res.passed = out.verdict >= 0 ? out.verdict == 1 : (std::isfinite(out.measure) && out.measure <= tolerance);
        } catch (const std::exception& e) {
            res.passed = false;
            res.measure = std::numeric_limits<double>::quiet_NaN();
            res.detail = std::string("exception: ") + e.what();
        }
        if (sink_) sink_(res);
        checks_.push_back(std::move(res));
    }

    const SelftestOptions& options() const { return opts_; }
    std::vector<CheckResult> take() { return std::move(checks_); }

private:
    SelftestOptions opts_;
    std::function<void(const CheckResult&)> sink_;
    std::vector<CheckResult> checks_;
};

std::string fmt(double v) { return format_number(v); }

// Deterministic uniform draws for randomized grids.
struct Draw {
    Rng rng;
    explicit Draw(std::uint64_t seed) : rng(seed, 0x5e1f) {}
    double operator()(double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

double poisson_gamma(int r, double x) {
    // 1 - e^{-x} sum_{j<r} x^j / j!
    double term = std::exp(-x);
    double sum = term;
    for (int j = 1; j < r; ++j) {
        term *= x / j;
        sum += term;
    }
    return 1.0 - sum;
}

double binomial_beta(double x, int a, int b) {
    // I_x(a, b) = P(Bin(a + b - 1, x) >= a)
    const int n = a + b - 1;
    double total = 0.0;
    for (int j = a; j <= n; ++j) {
        total += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                          j * std::log(x) + (n - j) * std::log1p(-x));
    }
    return total;
}

// P(X_{r:n} <= x, X_{s:n} <= y) for iid samples, r < s, by counting cells.
double multinomial_joint(int n, int r, int s, double fx, double fy) {
    if (fx > fy) fx = fy;
    double total = 0.0;
    for (int j = s; j <= n; ++j) {
        for (int i = r; i <= j; ++i) {
            const double log_coef = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(j - i + 1.0) -
                                    std::lgamma(n - j + 1.0);
            const double a = i == 0 ? 1.0 : std::pow(fx, i);
            const double b = j - i == 0 ? 1.0 : std::pow(fy - fx, j - i);
            const double c = n - j == 0 ? 1.0 : std::pow(1.0 - fy, n - j);
            total += std::exp(log_coef) * a * b * c;
        }
    }
    return total;
}

// Worst violation of df shape on a grid: monotonicity in both arguments,
// bounds, and the rectangle inequality over all grid rectangles.
template <class F>
double df_shape_violation(const F& df, const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<std::vector<double>> v(xs.size(), std::vector<double>(ys.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) v[i][j] = df(xs[i], ys[j]);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            worst = std::max({worst, -v[i][j], v[i][j] - 1.0});
            if (i > 0) worst = std::max(worst, v[i - 1][j] - v[i][j]);
            if (j > 0) worst = std::max(worst, v[i][j - 1] - v[i][j]);
        }
    }
    for (std::size_t i1 = 0; i1 < xs.size(); ++i1) {
        for (std::size_t i2 = i1 + 1; i2 < xs.size(); ++i2) {
            for (std::size_t j1 = 0; j1 < ys.size(); ++j1) {
                for (std::size_t j2 = j1 + 1; j2 < ys.size(); ++j2) {
                    const double mass = v[i2][j2] - v[i1][j2] - v[i2][j1] + v[i1][j1];
                    worst = std::max(worst, -mass);
                }
            }
        }
    }
    return worst;
}

std::vector<double> sorted_draws(Draw& draw, int count, double lo, double hi) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(draw(lo, hi));
    std::sort(out.begin(), out.end());
    return out;
}

struct RankCase {
    double m;
    double k;
    int r;
    int s;
};

std::vector<RankCase> rank_grid(Regime regime) {
    std::vector<RankCase> out;
    for (double m : {-0.5, 0.0, 1.5}) {
        for (double k : {1.0, 2.5}) {
            if (regime == Regime::lower_lower) {
                for (auto [r, s] : {std::pair{1, 2}, {1, 3}, {2, 4}}) out.push_back({m, k, r, s});
            } else if (regime == Regime::upper_upper) {
                for (auto [r, s] : {std::pair{2, 1}, {3, 1}, {4, 2}}) out.push_back({m, k, r, s});
            } else {
                for (auto [r, s] : {std::pair{1, 1}, {2, 1}, {1, 3}}) out.push_back({m, k, r, s});
            }
        }
    }
    return out;
}

std::vector<DistributionModel> default_models() {
    std::vector<DistributionModel> out;
    for (const auto& name : DistributionModel::family_names()) {
        out.push_back(DistributionModel::parse(name.substr(0, name.find('('))));
    }
    return out;
}

std::string case_name(const RangeExample& ex) { return ex.model.spec() + " m=" + fmt(ex.params.m); }

// ---------------------------------------------------------------- specfun

void specfun_checks(Suite& suite) {
    const std::uint64_t seed = suite.options().seed;
    suite.check("specfun", "monotone in x and clamped to [0,1]", 0.0, [&] {
        Draw draw(seed);
        double worst = 0.0;
        for (int c = 0; c < 200; ++c) {
            const double a = std::exp(draw(-3.0, 7.0));
            const double b = std::exp(draw(-3.0, 7.0));
            double prev_g = 0.0;
            double prev_b = 0.0;
            for (int i = 0; i <= 60; ++i) {
                const double x = a * 4.0 * i / 60.0;
                const double g = sf::reg_inc_gamma(a, x);
                const double t = i / 60.0;
                const double ib = sf::reg_inc_beta(t, a, b);
                worst = std::max({worst, prev_g - g, prev_b - ib, -g, g - 1.0, -ib, ib - 1.0});
                prev_g = g;
                prev_b = ib;
            }
        }
        return Outcome{worst, "200 parameter pairs, 61 points each"};
    });
    suite.check("specfun", "complement identity I_x(a,b) + I_{1-x}(b,a) = 1", 1e-12, [&] {
        Draw draw(seed + 1);
        double worst = 0.0;
        for (int c = 0; c < 4000; ++c) {
            const double a = std::exp(draw(-2.0, 6.0));
            const double b = std::exp(draw(-2.0, 6.0));
            const double x = draw(0.0, 1.0);
            worst = std::max(worst, std::fabs(sf::reg_inc_beta(x, a, b) + sf::reg_inc_beta(1.0 - x, b, a) - 1.0));
            worst = std::max(worst, std::fabs(sf::reg_inc_gamma(a, x * 3 * a) + sf::reg_inc_gamma_upper(a, x * 3 * a) - 1.0));
        }
        return Outcome{worst, "4000 random (a, b, x), plus the gamma upper/lower pair"};
    });
    // Below r = 0.5 the tail at r + 40 sqrt(r) exceeds 1e-10 (about 3e-8 at r = 0.1).
    suite.check("specfun", "Gamma_r(x) > 1 - 1e-10 for x >= r + 40 sqrt(r)", 1e-10, [&] {
        double worst = 0.0;
        for (double r : {0.5, 0.75, 1.0, 2.5, 10.0, 57.3, 400.0, 5000.0, 1e5}) {
            const double x = r + 40.0 * std::sqrt(r);
            worst = std::max(worst, 1.0 - sf::reg_inc_gamma(r, x));
        }
        return Outcome{worst, "r from 0.5 to 1e5"};
    });
    suite.check("specfun", "integer parameters match Poisson and binomial sums", 1e-12, [&] {
        Draw draw(seed + 2);
        double worst = 0.0;
        for (int c = 0; c < 3000; ++c) {
            const int r = draw.integer(1, 40);
            const double x = draw(0.0, 2.5 * r + 5.0);
            worst = std::max(worst, std::fabs(sf::reg_inc_gamma(r, x) - poisson_gamma(r, x)));
            const int a = draw.integer(1, 30);
            const int b = draw.integer(1, 30);
            const double t = draw(0.0, 1.0);
            worst = std::max(worst, std::fabs(sf::reg_inc_beta(t, a, b) - binomial_beta(t, a, b)));
        }
        return Outcome{worst, "3000 gamma and 3000 beta cases"};
    });
}

// ---------------------------------------------------------- distributions

void distribution_checks(Suite& suite) {
    suite.check("distributions", "N Lbar_m(a x + b) and N L_m(c x + d) approach the tail transform", 0.0, [&] {
        int bad = 0;
        int sides = 0;
        std::ostringstream notes;
        for (const auto& model : default_models()) {
            const std::string name = model.spec();
            for (double m : {0.0, 1.0}) {
                for (ExtremeSide side : {ExtremeSide::upper, ExtremeSide::lower}) {
                    TailTransform tt;
                    try {
                        tt = model.attraction(side);
                    } catch (const NoAttractionError&) {
                        continue;
                    }
                    std::vector<double> errs;
                    for (double n : {1e3, 1e5, 1e7}) {
                        const GosParams p = make_params(m, 1.0, static_cast<int>(n));
                        const NormingConstants nc = norming_constants(model, p);
                        double worst = 0.0;
                        for (double tau : {0.2, 0.5, 1.0, 2.0, 4.0}) {
                            double x = 0.0;
                            double got = 0.0;
                            double want = 0.0;
                            if (side == ExtremeSide::upper) {
                                if (tt.type == TailType::gumbel) x = -std::log(tau);
                                else if (tt.type == TailType::frechet) x = std::pow(tau, -1.0 / tt.alpha);
                                else x = -std::pow(tau, 1.0 / tt.alpha);
                                got = p.big_n() * lm_bar(p, model, nc.a * x + nc.b);
                                want = std::pow(kappa(tt, x), m + 1.0);
                            } else {
                                x = rho_inverse(tt, tau);
                                got = p.big_n() * lm(p, model, nc.c * x + nc.d);
                                want = rho(tt, x);
                            }
                            worst = std::max(worst, std::fabs(got - want) / want);
                        }
                        errs.push_back(worst);
                    }
                    ++sides;
                    // Exact tails sit at rounding level at every n.
                    const bool exact = *std::max_element(errs.begin(), errs.end()) < 1e-8;
                    const bool ok = exact || (errs[1] < errs[0] && errs[2] < errs[1]);
                    if (!ok) {
                        ++bad;
                        notes << name << " m=" << m << " " << to_string(side) << ": " << fmt(errs[0]) << " "
                              << fmt(errs[1]) << " " << fmt(errs[2]) << "; ";
                    }
                }
            }
        }
        return Outcome{static_cast<double>(bad), std::to_string(sides) + " family sides; " + notes.str()};
    });
    suite.check("distributions", "quantile/cdf round trip", 1e-9, [&] {
        double worst = 0.0;
        for (const auto& model : default_models()) {
            const std::string name = model.spec();
            for (int i = 1; i <= 99; ++i) {
                const double p = i / 100.0;
                worst = std::max(worst, std::fabs(model.cdf(model.quantile(p)) - p));
            }
        }
        return Outcome{worst, "all families, p = 0.01..0.99"};
    });
}

// --------------------------------------------------------------- gos-core

void gos_core_checks(Suite& suite) {
    const std::uint64_t seed = suite.options().seed;
    const auto expo = DistributionModel::exponential(1.0);
    suite.check("gos-core", "joint df is monotone, bounded and 2-increasing", 1e-9, [&] {
        Draw draw(seed + 10);
        double worst = 0.0;
        for (double m : {-0.5, 0.0, 1.0}) {
            for (double k : {1.0, 2.0}) {
                const GosParams p = make_params(m, k, 6);
                for (auto [r, s] : {std::pair{2, 1}, {4, 2}}) {
                    const RankPair pair{r, s, Regime::upper_upper};
                    const auto xs = sorted_draws(draw, 5, 0.0, 3.5);
                    const auto ys = sorted_draws(draw, 5, 0.0, 3.5);
                    worst = std::max(worst, df_shape_violation(
                                                [&](double x, double y) { return joint_upper_df(p, expo, pair, x, y); },
                                                xs, ys));
                }
            }
        }
        return Outcome{worst, "random 5x5 grids, n = 6"};
    });
    suite.check("gos-core", "exact beta-kernel df equals the direct double integral", 1e-7, [&] {
        double worst = 0.0;
        const std::vector<double> grid{0.4, 0.9, 1.5, 2.6};
        for (double m : {0.0, 1.0, -0.5}) {
            for (double k : {1.0, 2.0}) {
                for (int n : {4, 5, 6}) {
                    const GosParams p = make_params(m, k, n);
                    const RankPair pair{2, 1, Regime::upper_upper};
                    for (double x : grid) {
                        for (double y : grid) {
                            const double a = joint_upper_df(p, expo, pair, x, y);
                            const double b = joint_df_direct(p, expo, n - 1, n, x, y);
                            worst = std::max(worst, std::fabs(a - b));
                        }
                    }
                }
            }
        }
        return Outcome{worst, "(m,k) in {0,1,-0.5}x{1,2}, n in {4,5,6}, 4x4 grid"};
    });
    suite.check("gos-core", "ordinary order statistics match the multinomial count", 1e-9, [&] {
        double worst = 0.0;
        const std::vector<double> grid{0.3, 0.8, 1.4, 2.2};
        for (int n : {4, 5, 6}) {
            const GosParams p = make_params(0.0, 1.0, n);
            for (auto [r, s] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
                const RankPair pair{r, s, Regime::upper_upper};
                for (double x : grid) {
                    for (double y : grid) {
                        const double oracle = multinomial_joint(n, n - r + 1, n - s + 1, expo.cdf(x), expo.cdf(y));
                        worst = std::max({worst, std::fabs(joint_upper_df(p, expo, pair, x, y) - oracle),
                                          std::fabs(joint_df_direct(p, expo, n - r + 1, n - s + 1, x, y) - oracle)});
                    }
                }
            }
        }
        return Outcome{worst, "n in {4,5,6}, three rank pairs"};
    });
    suite.check("gos-core", "marginal approaches its incomplete-gamma form as n grows", 0.0, [&] {
        int bad = 0;
        std::ostringstream notes;
        for (double m : {0.0, 1.0}) {
            for (int r : {1, 3}) {
                std::vector<double> gaps;
                for (int n : {100, 1000, 10000}) {
                    const GosParams p = make_params(m, 1.0, n);
                    const auto nc = norming_constants(expo, p);
                    double gap = 0.0;
                    for (double x : {-1.0, 0.0, 1.0, 2.0}) {
                        const double xn = nc.a * x + nc.b;
                        const double approx = sf::reg_inc_gamma_upper(p.effective_rank(r), p.big_n() * lm_bar(p, expo, xn));
                        gap = std::max(gap, std::fabs(marginal_upper_df(p, expo, r, xn) - approx));
                    }
                    gaps.push_back(gap);
                }
                if (!(gaps[1] < gaps[0] && gaps[2] < gaps[1])) {
                    ++bad;
                    notes << "m=" << m << " r=" << r << " gaps " << fmt(gaps[0]) << " " << fmt(gaps[1]) << " "
                          << fmt(gaps[2]) << "; ";
                }
            }
        }
        return Outcome{static_cast<double>(bad), notes.str()};
    });
}

// ------------------------------------------------------------- limit-laws

void limit_law_checks(Suite& suite) {
    const std::uint64_t seed = suite.options().seed;
    const TailTransform gum_up{ExtremeSide::upper, TailType::gumbel, 1.0};
    const TailTransform gum_low{ExtremeSide::lower, TailType::gumbel, 1.0};
    suite.check("limit-laws", "limit laws are df's in (x, y)", 1e-9, [&] {
        Draw draw(seed + 20);
        double worst = 0.0;
        for (Regime regime : {Regime::upper_upper, Regime::lower_lower, Regime::lower_upper}) {
            for (const auto& c : rank_grid(regime)) {
                const GosParams p = make_params(c.m, c.k, 50);
                auto df = [&](double x, double y) {
                    switch (regime) {
                        case Regime::upper_upper: return omega_uu(p, c.r, c.s, kappa(gum_up, x), kappa(gum_up, y));
                        case Regime::lower_lower: return omega_ll(c.r, c.s, rho(gum_low, x), rho(gum_low, y));
                        case Regime::lower_upper: return omega_lu_product(p, c.r, c.s, rho(gum_low, x), kappa(gum_up, y));
                    }
                    return 0.0;
                };
                worst = std::max(worst, df_shape_violation(df, sorted_draws(draw, 5, -3.0, 4.0), sorted_draws(draw, 5, -3.0, 4.0)));
                worst = std::max({worst, df(-kInf, -kInf), 1.0 - df(kInf, kInf), df(-60.0, -60.0), 1.0 - df(60.0, 60.0)});
            }
        }
        return Outcome{worst, "all regimes over the (m,k,r,s) grid"};
    });
    suite.check("limit-laws", "upper-upper branches meet on the diagonal", 1e-9, [&] {
        double worst = 0.0;
        for (const auto& c : rank_grid(Regime::upper_upper)) {
            const GosParams p = make_params(c.m, c.k, 50);
            for (double kv : {0.01, 0.3, 1.0, 2.0, 5.0, 20.0}) {
                worst = std::max(worst, std::fabs(omega_uu(p, c.r, c.s, kv, kv) - upper_marginal_limit(p, c.s, kv)));
            }
        }
        return Outcome{worst, "both branches at kappa1 = kappa2"};
    });
    suite.check("limit-laws", "lower-lower diagonal equals Gamma_s(rho)", 1e-9, [&] {
        double worst = 0.0;
        for (const auto& c : rank_grid(Regime::lower_lower)) {
            for (double rv : {0.01, 0.3, 1.0, 2.0, 5.0, 20.0, 80.0}) {
                worst = std::max(worst, std::fabs(omega_ll(c.r, c.s, rv, rv) - sf::reg_inc_gamma(c.s, rv)));
            }
        }
        return Outcome{worst, "r < s grid, rho from 0.01 to 80"};
    });
    suite.check("limit-laws", "classical (2nd max, max) limit against the exact df at n = 1e5", 5e-3, [&] {
        const GosParams p = make_params(0.0, 1.0, 100000);
        const auto expo = DistributionModel::exponential(1.0);
        const auto nc = norming_constants(expo, p);
        const RankPair pair{2, 1, Regime::upper_upper};
        double worst = 0.0;
        for (double x : {-1.0, 0.0, 1.0, 2.5}) {
            for (double y : {-1.0, 0.0, 1.0, 2.5}) {
                const double exact = joint_upper_df(p, expo, pair, nc.a * x + nc.b, nc.a * y + nc.b);
                worst = std::max(worst, std::fabs(exact - omega_uu(p, 2, 1, kappa(gum_up, x), kappa(gum_up, y))));
            }
        }
        return Outcome{worst, "exponential parent, 4x4 grid"};
    });
}

// ----------------------------------------------------------- random-index

MixtureQuery random_query(Draw& draw, Regime regime, const IndexLaw& law) {
    MixtureQuery q;
    q.params = make_params(draw(-0.8, 2.0), draw(0.5, 3.0), 100);
    q.ranks.regime = regime;
    const int a = draw.integer(1, 4);
    const int b = draw.integer(1, 4);
    switch (regime) {
        case Regime::upper_upper:
            q.ranks.r = std::max(a, b) + (a == b ? 1 : 0);
            q.ranks.s = std::min(a, b);
            q.point = {std::exp(draw(-3.0, 2.0)), std::exp(draw(-3.0, 2.0))};
            break;
        case Regime::lower_lower:
            q.ranks.r = std::min(a, b);
            q.ranks.s = std::max(a, b) + (a == b ? 1 : 0);
            q.point = {std::exp(draw(-3.0, 2.0)), std::exp(draw(-3.0, 2.0))};
            break;
        case Regime::lower_upper:
            q.ranks.r = a;
            q.ranks.s = b;
            q.point = {std::exp(draw(-3.0, 2.0)), std::exp(draw(-3.0, 2.0))};
            break;
    }
    q.law = law;
    return q;
}

double fixed_limit(const MixtureQuery& q) {
    switch (q.ranks.regime) {
        case Regime::upper_upper: return omega_uu(q.params, q.ranks.r, q.ranks.s, q.point.first, q.point.second);
        case Regime::lower_lower: return omega_ll(q.ranks.r, q.ranks.s, q.point.first, q.point.second);
        case Regime::lower_upper:
            return omega_lu_product(q.params, q.ranks.r, q.ranks.s, q.point.first, q.point.second);
    }
    return 0.0;
}

void random_index_checks(Suite& suite) {
    const std::uint64_t seed = suite.options().seed;
    const std::vector<IndexLaw> laws{IndexLaw::unit_exponential(),
                                     IndexLaw::tabulated({{0.0, 0.0}, {0.5, 0.0}, {1.5, 1.0}}),
                                     IndexLaw::degenerate(1.7)};
    suite.check("random-index", "saturated second argument gives the mixed marginal", 1e-8, [&] {
        double worst = 0.0;
        for (const auto& law : laws) {
            for (double m : {-0.5, 0.0, 1.0}) {
                const GosParams p = make_params(m, 1.5, 100);
                for (double v : {0.05, 0.5, 1.0, 3.0}) {
                    const MixtureQuery uu{p, {3, 1, Regime::upper_upper}, {v, 0.0}, law};
                    worst = std::max(worst, std::fabs(mixture_uu(uu) - mixture_marginal(ExtremeSide::upper, p, 3, v, law)));
                    const MixtureQuery ll{p, {2, 4, Regime::lower_lower}, {v, kInf}, law};
                    worst = std::max(worst, std::fabs(mixture_ll(ll) - mixture_marginal(ExtremeSide::lower, p, 2, v, law)));
                }
            }
        }
        return Outcome{worst, "exponential, tabulated and degenerate H"};
    });
    suite.check("random-index", "mixtures are df's in (x, y)", 1e-9, [&] {
        Draw draw(seed + 30);
        const TailTransform up{ExtremeSide::upper, TailType::frechet, 2.0};
        const TailTransform low{ExtremeSide::lower, TailType::gumbel, 1.0};
        double worst = 0.0;
        for (const auto& law : laws) {
            for (Regime regime : {Regime::upper_upper, Regime::lower_lower, Regime::lower_upper}) {
                const auto c = rank_grid(regime)[draw.integer(0, 17)];
                const GosParams p = make_params(c.m, c.k, 100);
                auto df = [&](double x, double y) {
                    MixtureQuery q{p, {c.r, c.s, regime}, {}, law};
                    switch (regime) {
                        case Regime::upper_upper: q.point = {kappa(up, x), kappa(up, y)}; break;
                        case Regime::lower_lower: q.point = {rho(low, x), rho(low, y)}; break;
                        case Regime::lower_upper: q.point = {rho(low, x), kappa(up, y)}; break;
                    }
                    return mixture(q);
                };
                const double lo = regime == Regime::upper_upper ? 0.05 : -3.0;
                worst = std::max(worst, df_shape_violation(df, sorted_draws(draw, 4, lo, 4.0), sorted_draws(draw, 4, 0.05, 4.0)));
            }
        }
        return Outcome{worst, "random 4x4 grids per regime and law"};
    });
    suite.check("random-index", "degenerate H = 1 reproduces the fixed-size limit", 1e-10, [&] {
        Draw draw(seed + 31);
        double worst = 0.0;
        for (int i = 0; i < 30; ++i) {
            const Regime regime = static_cast<Regime>(i % 3);
            const MixtureQuery q = random_query(draw, regime, IndexLaw::degenerate(1.0));
            worst = std::max(worst, std::fabs(mixture(q) - fixed_limit(q)));
        }
        return Outcome{worst, "30 random configurations"};
    });
    suite.check("random-index", "distinct tail indices give distinct mixtures", 1e-4, [&] {
        const GosParams p = make_params(0.0, 1.0, 100);
        const TailTransform a1{ExtremeSide::upper, TailType::frechet, 1.0};
        const TailTransform a2{ExtremeSide::upper, TailType::frechet, 2.0};
        double gap = 0.0;
        for (double x : {0.5, 1.0, 2.0}) {
            for (double y : {0.5, 1.0, 2.0}) {
                const MixtureQuery q1{p, {2, 1, Regime::upper_upper}, {kappa(a1, x), kappa(a1, y)}, IndexLaw::unit_exponential()};
                MixtureQuery q2 = q1;
                q2.point = {kappa(a2, x), kappa(a2, y)};
                gap = std::max(gap, std::fabs(mixture_uu(q1) - mixture_uu(q2)));
            }
        }
        return Outcome{gap, "largest separation on a 3x3 probe grid", gap >= 1e-4 ? 1 : 0};
    });
    suite.check("random-index", "geometric mixing of the Gumbel maximum is logistic", 1e-8, [&] {
        const GosParams p = make_params(0.0, 1.0, 100);
        const TailTransform gum{ExtremeSide::upper, TailType::gumbel, 1.0};
        double worst = 0.0;
        for (int i = 0; i <= 60; ++i) {
            const double x = -6.0 + 0.2 * i;
            const double mixed = mixture_marginal(ExtremeSide::upper, p, 1, kappa(gum, x), IndexLaw::unit_exponential());
            worst = std::max(worst, std::fabs(mixed - 1.0 / (1.0 + std::exp(-x))));
        }
        return Outcome{worst, "x in [-6, 6]"};
    });
}

// ------------------------------------------------------------- montecarlo

std::vector<GridPoint> quantile_grid(SimConfig cfg, std::uint64_t seed, const std::vector<double>& probs) {
    cfg.seed = seed;
    const auto sample = simulate_normalized(cfg);
    std::vector<double> xs;
    for (const auto& p : sample) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    std::vector<GridPoint> grid;
    for (double q : probs) grid.push_back({xs[static_cast<std::size_t>(q * (xs.size() - 1))], 0.0});
    return grid;
}

void montecarlo_checks(Suite& suite) {
    const auto& opts = suite.options();
    suite.check("montecarlo", "reports are bit-identical across runs and thread counts", 0.0, [&] {
        SimConfig cfg;
        cfg.params = make_params(0.5, 1.0, 300);
        cfg.model = DistributionModel::cauchy();
        cfg.index = IndexSpec::parse("geometric");
        cfg.replications = 4000;
        cfg.seed = opts.seed;
        for (double x : {0.5, 1.0, 2.0}) cfg.grid.push_back({x, 2.0 * x});
        cfg.threads = 1;
        const std::string a = run_bivariate_sim(cfg).to_json();
        cfg.threads = 3;
        const std::string b = run_bivariate_sim(cfg).to_json();
        const std::string c = run_bivariate_sim(cfg).to_json();
        return Outcome{(a == b && b == c) ? 0.0 : 1.0, "1 thread vs 3 threads vs rerun"};
    });
    suite.check("montecarlo", "finite-n marginal of the r-th maximum within 3 SE", 3.0, [&] {
        const auto model = DistributionModel::exponential(1.0);
        double worst = 0.0;
        for (double m : {0.0, 1.0}) {
            for (int r : {1, 2}) {
                SimConfig cfg;
                cfg.params = make_params(m, 1.0, 50);
                cfg.model = model;
                cfg.ranks = {r + 1, r, Regime::upper_upper};
                cfg.replications = 10000;
                cfg.seed = opts.seed + 40;
                cfg.threads = opts.threads;
                for (double y : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) cfg.grid.push_back({kInf, y});
                const auto emp = simulate_empirical_df(cfg);
                const auto nc = norming_constants(model, cfg.params);
                for (std::size_t g = 0; g < emp.size(); ++g) {
                    const double exact = marginal_upper_df(cfg.params, model, r, nc.a * cfg.grid[g].y + nc.b);
                    const double se = std::sqrt(exact * (1.0 - exact) / cfg.replications);
                    worst = std::max(worst, std::fabs(emp[g] - exact) / se);
                }
            }
        }
        return Outcome{worst, "largest |empirical - exact| / SE, n = 50"};
    });
    suite.check("montecarlo", "distance to the limit does not grow with n", 0.0, [&] {
        int bad = 0;
        std::ostringstream notes;
        for (const auto& ex : range_examples(50)) {
            SimConfig cfg;
            cfg.model = ex.model;
            cfg.params = ex.params;
            cfg.statistic = SimStatistic::range;
            cfg.index = IndexSpec::parse("geometric");
            cfg.replications = 10000;
            cfg.seed = opts.seed + 50;
            cfg.threads = opts.threads;
            std::vector<double> dist;
            double se = 0.0;
            for (int n : {50, 200, 1000}) {
                cfg.params.n = n;
                cfg.grid = quantile_grid(cfg, opts.seed + 51, {0.1, 0.3, 0.5, 0.7, 0.9});
                const auto rep = run_bivariate_sim(cfg);
                dist.push_back(rep.sup_distance);
                se = std::max(se, rep.max_standard_error);
            }
            if (dist[1] > dist[0] + 3.0 * se || dist[2] > dist[1] + 3.0 * se) {
                ++bad;
                notes << case_name(ex) << ": " << fmt(dist[0]) << " " << fmt(dist[1]) << " " << fmt(dist[2]) << "; ";
            }
        }
        return Outcome{static_cast<double>(bad), notes.str()};
    });
    suite.check("montecarlo", "random index at n = 500 follows the mixture, not the fixed limit", 0.0, [&] {
        SimConfig cfg;
        cfg.params = make_params(0.0, 1.0, 500);
        cfg.model = DistributionModel::exponential(1.0);
        cfg.ranks = {2, 1, Regime::upper_upper};
        cfg.index = IndexSpec::parse("geometric");
        cfg.replications = 20000;
        cfg.seed = opts.seed + 60;
        cfg.threads = opts.threads;
        for (double y = -2.0; y <= 3.01; y += 0.5) cfg.grid.push_back({kInf, y});
        const auto rep = run_bivariate_sim(cfg);
        const double margin = rep.sup_distance - rep.sup_distance_fixed;
        return Outcome{margin, "mixture " + fmt(rep.sup_distance) + " vs fixed " + fmt(rep.sup_distance_fixed),
                       margin < 0.0 ? 1 : 0};
    });
}

// ----------------------------------------------------------------- ranges

void range_checks(Suite& suite) {
    const auto& opts = suite.options();
    const double ln4 = std::log(4.0);
    suite.check("ranges", "normal range closed form is continuous at ln 4", 1e-4, [&] {
        const double a = std::fabs(normal_range_closed_form(ln4 - 1e-6) - 2.0 / 3.0);
        const double b = std::fabs(normal_range_closed_form(ln4 + 1e-6) - 2.0 / 3.0);
        return Outcome{std::max(a, b), "value at ln4 " + fmt(normal_range_closed_form(ln4))};
    });
    suite.check("ranges", "normal range quadrature matches the closed form", 1e-6, [&] {
        double worst = 0.0;
        for (double r : {-1.0, 0.0, ln4, 1.0, 2.0, 4.0}) {
            worst = std::max(worst, std::fabs(normal_range_integral(r) - normal_range_closed_form(r)));
        }
        return Outcome{worst, "r in {-1, 0, ln4, 1, 2, 4}"};
    });
    suite.check("ranges", "normal midrange quadrature is logistic in 2v", 1e-7, [&] {
        double worst = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double v = -3.0 + 0.15 * i;
            worst = std::max(worst, std::fabs(normal_midrange_integral(v) - normal_midrange_closed_form(v)));
        }
        return Outcome{worst, "41 points on [-3, 3]"};
    });
    suite.check("ranges", "range and midrange limits are df's for every case", 1e-8, [&] {
        double worst = 0.0;
        std::ostringstream notes;
        for (const auto& ex : range_examples(500)) {
            for (RangeStatistic st : {RangeStatistic::range, RangeStatistic::midrange}) {
                const RangeQuery q = make_range_query(ex.model, ex.params, IndexLaw::unit_exponential(), st, RangeRoute::mixture);
                double prev = 0.0;
                double local = 0.0;
                for (int i = 0; i <= 24; ++i) {
                    const double t = -6.0 + 0.5 * i;
                    const double v = range_statistic_df(q, t);
                    local = std::max({local, prev - v, -v, v - 1.0});
                    prev = v;
                }
                local = std::max({local, range_statistic_df(q, -1e9), 1.0 - range_statistic_df(q, 1e9) - 1e-8});
                if (local > 1e-8) notes << case_name(ex) << " " << to_string(st) << " " << fmt(local) << "; ";
                worst = std::max(worst, local);
            }
        }
        return Outcome{worst, notes.str()};
    });
    suite.check("ranges", "published displays agree with the mixture construction", 1e-6, [&] {
        double worst = 0.0;
        std::ostringstream notes;
        for (const auto& ex : range_examples(500)) {
            if (range_case(ex.model, ex.params).shape == RangeShape::lower_only) continue;
            for (RangeStatistic st : {RangeStatistic::range, RangeStatistic::midrange}) {
                const auto pub = make_range_query(ex.model, ex.params, IndexLaw::unit_exponential(), st, RangeRoute::published);
                const auto mix = make_range_query(ex.model, ex.params, IndexLaw::unit_exponential(), st, RangeRoute::mixture);
                for (double t : {-2.0, -0.5, 0.3, 1.0, 2.5}) {
                    worst = std::max(worst, std::fabs(range_statistic_df(pub, t) - range_statistic_df(mix, t)));
                }
            }
        }
        return Outcome{worst, "all cases except the lower-only one"};
    });
    suite.check("ranges", "heavy- and light-lower-tail cases give equal range and midrange limits", 1e-9, [&] {
        double worst = 0.0;
        for (const auto& ex : range_examples(500)) {
            if (range_case(ex.model, ex.params).shape != RangeShape::upper_only) continue;
            const auto law = IndexLaw::unit_exponential();
            const auto rq = make_range_query(ex.model, ex.params, law, RangeStatistic::range);
            const auto mq = make_range_query(ex.model, ex.params, law, RangeStatistic::midrange);
            for (double t : {-1.5, 0.2, 0.7, 1.5, 4.0}) {
                worst = std::max(worst, std::fabs(range_limit_df(rq, t) - midrange_limit_df(mq, t)));
            }
        }
        return Outcome{worst, "cauchy m<0, pareto, lognormal, exponential, rayleigh"};
    });
    if (opts.quick) return;
    suite.check("ranges", "simulated ranges match the limit within 3 SE at n = 500", 0.0, [&] {
        int bad = 0;
        std::ostringstream notes;
        for (const auto& ex : range_examples(500)) {
            if (ex.slow) continue;
            for (SimStatistic st : {SimStatistic::range, SimStatistic::midrange}) {
                SimConfig cfg;
                cfg.model = ex.model;
                cfg.params = ex.params;
                cfg.statistic = st;
                cfg.index = IndexSpec::parse("geometric");
                cfg.replications = 20000;
                cfg.seed = opts.seed + 70;
                cfg.threads = opts.threads;
                cfg.grid = quantile_grid(cfg, opts.seed + 71, {0.05, 0.2, 0.4, 0.6, 0.8, 0.95});
                const auto rep = run_bivariate_sim(cfg);
                if (rep.sup_distance > 3.0 * rep.max_standard_error) {
                    ++bad;
                    notes << case_name(ex) << " " << to_string(st) << " " << fmt(rep.sup_distance) << "; ";
                }
            }
        }
        return Outcome{static_cast<double>(bad), notes.str()};
    });
    suite.check("ranges", "slowly converging cases close the gap as n grows", 0.0, [&] {
        int bad = 0;
        std::ostringstream notes;
        for (const auto& ex : range_examples(500)) {
            if (!ex.slow) continue;
            for (SimStatistic st : {SimStatistic::range, SimStatistic::midrange}) {
                SimConfig cfg;
                cfg.model = ex.model;
                cfg.params = ex.params;
                cfg.statistic = st;
                cfg.index = IndexSpec::parse("geometric");
                cfg.replications = 20000;
                cfg.seed = opts.seed + 80;
                cfg.threads = opts.threads;
                std::vector<double> dist;
                double se = 0.0;
                for (int n : {500, 50000, 5000000}) {
                    cfg.params.n = n;
                    cfg.grid = quantile_grid(cfg, opts.seed + 81, {0.05, 0.2, 0.4, 0.6, 0.8, 0.95});
                    const auto rep = run_bivariate_sim(cfg);
                    dist.push_back(rep.sup_distance);
                    se = std::max(se, rep.max_standard_error);
                }
                const bool ok = dist[1] <= dist[0] + se && dist[2] <= dist[1] + se && dist[2] < dist[0];
                notes << case_name(ex) << " " << to_string(st) << " " << fmt(dist[0]) << " -> " << fmt(dist[2]) << "; ";
                if (!ok) ++bad;
            }
        }
        return Outcome{static_cast<double>(bad), notes.str()};
    });
}

}  // namespace

int SelftestReport::passed() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; }));
}

int SelftestReport::failed() const { return static_cast<int>(checks.size()) - passed(); }

std::vector<std::string> selftest_modules() {
    return {"specfun", "distributions", "gos-core", "limit-laws", "random-index", "montecarlo", "ranges"};
}

std::vector<RangeExample> range_examples(int n) {
    auto ex = [n](DistributionModel model, double m, bool slow) { return RangeExample{model, make_params(m, 1.0, n), slow}; };
    return {
        ex(DistributionModel::cauchy(), 0.0, false),
        ex(DistributionModel::cauchy(), 0.5, true),
        ex(DistributionModel::cauchy(), -0.5, true),
        ex(DistributionModel::pareto(1.0), 0.0, false),
        ex(DistributionModel::uniform(1.0), 0.0, false),
        ex(DistributionModel::beta(2.0, 2.0), 0.0, false),
        ex(DistributionModel::beta(4.0, 2.0), 1.0, true),
        ex(DistributionModel::power(1.5), 0.5, false),
        ex(DistributionModel::normal(), 0.0, true),
        ex(DistributionModel::normal(), 0.5, true),
        ex(DistributionModel::logistic(), 0.0, false),
        ex(DistributionModel::laplace(), 0.0, false),
        ex(DistributionModel::lognormal(), 0.0, true),
        ex(DistributionModel::exponential(1.0), 0.0, false),
        ex(DistributionModel::exponential(1.0), 1.0, false),
        ex(DistributionModel::rayleigh(1.0), 0.0, true),
    };
}

SelftestReport run_selftest(const SelftestOptions& options, const std::function<void(const CheckResult&)>& on_check) {
    const auto start = std::chrono::steady_clock::now();
    Suite suite(options, on_check);
    if (suite.wants("specfun")) specfun_checks(suite);
    if (suite.wants("distributions")) distribution_checks(suite);
    if (suite.wants("gos-core")) gos_core_checks(suite);
    if (suite.wants("limit-laws")) limit_law_checks(suite);
    if (suite.wants("random-index")) random_index_checks(suite);
    if (suite.wants("montecarlo") && !options.quick) montecarlo_checks(suite);
    if (suite.wants("ranges")) range_checks(suite);
    SelftestReport report;
    report.checks = suite.take();
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace gosx
