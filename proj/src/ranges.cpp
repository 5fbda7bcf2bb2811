#include "gosx/ranges.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "gosx/errors.hpp"
#include "gosx/limit_laws.hpp"
#include "gosx/quadrature.hpp"
#include "gosx/specfun.hpp"

namespace gosx {

namespace sf = specfun;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string lowercase(const std::string& s) {
    std::string out;
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b)); }

quad::Options inner_options() {
    quad::Options opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-12;
    return opts;
}

// Breakpoints origin + dir * scale * {geometric ladder}, merged with extra
// points and clipped to [lo, hi] (either end may be infinite).
std::vector<double> breakpoints(double origin, double scale, double dir, std::initializer_list<double> extra,
                                double lo, double hi) {
    static constexpr double kLadder[] = {0.0, 1e-6, 1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
    std::vector<double> pts = {lo, hi};
    for (double step : kLadder) pts.push_back(origin + dir * scale * step);
    for (double e : extra) pts.push_back(e);
    std::vector<double> out;
    for (double p : pts) {
        if (std::isfinite(p) ? (p >= lo && p <= hi) : (p == lo || p == hi)) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <class F>
double integrate_pieces(const F& f, const std::vector<double>& breaks) {
    return quad::integrate_piecewise(f, breaks, inner_options()).value;
}

// Q(ell, t) with t in [0, +inf]
double upper_gamma(double ell, double t) { return sf::reg_inc_gamma_upper(ell, std::max(0.0, t)); }

bool is_constrained_beta(const DistributionModel& model, const GosParams& params) {
    if (model.family() == Family::beta) return close(model.param(0), (params.m + 1.0) * model.param(1));
    if (model.family() == Family::power) return close(model.param(0), params.m + 1.0);
    return false;
}

void check_eta(const RangeCase& rc, double eta) {
    if (!(eta >= 0.0)) throw DomainError("eta must lie in [0, +inf]");
    const bool ok = (rc.shape == RangeShape::both && eta > 0.0 && std::isfinite(eta)) ||
                    (rc.shape == RangeShape::upper_only && std::isinf(eta)) ||
                    (rc.shape == RangeShape::lower_only && eta == 0.0);
    if (!ok) throw UnsupportedCaseError("eta value is inconsistent with the " + rc.label + " case");
}

// ---- published displays, as functions of the mixing variable z ----

double published_both(const RangeQuery& q, const RangeCase& rc, double t, double z) {
    const double m1 = q.params.m + 1.0;
    const double ell = q.params.ell();
    const double eta = q.eta;
    const bool range = q.statistic == RangeStatistic::range;
    switch (q.model.family()) {
        case Family::cauchy: {
            if (range) {
                // y = -W2 > 0, W1 <= t - y
                if (t <= 0.0) return 0.0;
                auto f = [&](double y) {
                    if (y <= 0.0 || y >= t) return 0.0;
                    return upper_gamma(ell, z / (t - y)) * z * std::exp(-z / y - 2.0 * std::log(y));
                };
                return integrate_pieces(f, breakpoints(0.0, z, 1.0, {t}, 0.0, t));
            }
            // y = W2 < 0, W1 <= t - y
            const double top = std::min(t, 0.0);
            auto f = [&](double y) {
                if (y >= top) return 0.0;
                return upper_gamma(ell, z / (t - y)) * z * std::exp(z / y - 2.0 * std::log(-y));
            };
            return integrate_pieces(f, breakpoints(0.0, z, -1.0, {t}, -kInf, top));
        }
        case Family::uniform: {
            if (range) {
                auto f = [&](double y) { return upper_gamma(ell, z * (y - t)) * z * std::exp(z * y); };
                return integrate_pieces(f, breakpoints(0.0, 1.0 / z, -1.0, {t}, -kInf, 0.0));
            }
            auto f = [&](double y) { return upper_gamma(ell, z * (y - t)) * z * std::exp(-z * y); };
            return integrate_pieces(f, breakpoints(0.0, 1.0 / z, 1.0, {t}, 0.0, kInf));
        }
        case Family::beta:
        case Family::power: {
            const double alpha = q.model.param(0);
            auto density = [&](double u) {  // u = eta |y| > 0
                return z * eta * alpha * std::exp((alpha - 1.0) * std::log(u) - z * std::pow(u, alpha));
            };
            const double scale = std::pow(z, -1.0 / alpha) / eta;
            if (range) {
                auto f = [&](double y) {
                    if (y >= 0.0) return 0.0;
                    return upper_gamma(ell, z * std::pow(std::max(0.0, y - t), alpha)) * density(-eta * y);
                };
                return integrate_pieces(f, breakpoints(0.0, scale, -1.0, {t}, -kInf, 0.0));
            }
            auto f = [&](double y) {
                if (y <= 0.0) return 0.0;
                return upper_gamma(ell, z * std::pow(std::max(0.0, y - t), alpha)) * density(eta * y);
            };
            return integrate_pieces(f, breakpoints(0.0, scale, 1.0, {t}, 0.0, kInf));
        }
        case Family::normal:
        case Family::logistic:
        case Family::laplace: {
            const double tt = rc.full_midrange_scale && !range ? 2.0 * t : t;
            const double sign = range ? -1.0 : 1.0;
            auto f = [&](double y) {
                const double e = sign * eta * y;
                const double log_density = std::log(z * eta) + e - z * std::exp(e);
                if (!(log_density > -745.0)) return 0.0;
                return upper_gamma(ell, z * std::exp((y - tt) * m1)) * std::exp(log_density);
            };
            // Mode of the y-density sits where z e^{sign eta y} = 1; the
            // density decays doubly exponentially on one side, simply on the other.
            const double mode = -sign * std::log(z) / eta;
            const double w = 1.0 / eta;
            const double v = 1.0 / m1;
            return integrate_pieces(
                f, breakpoints(mode, w, -sign, {mode + sign * w, mode + 3.0 * sign * w, tt - 3.0 * v, tt - v, tt,
                                               tt + v, tt + 3.0 * v},
                               -kInf, kInf));
        }
        default: break;
    }
    throw UnsupportedCaseError("no published display for " + rc.label);
}

double published_upper_only(const RangeQuery& q, double t, double z) {
    const double m1 = q.params.m + 1.0;
    const double ell = q.params.ell();
    switch (q.model.family()) {
        case Family::cauchy: return t > 0.0 ? upper_gamma(ell, z * std::pow(t, -m1)) : 0.0;
        case Family::pareto: return t > 0.0 ? upper_gamma(ell, z * std::pow(t, -q.model.param(0) * m1)) : 0.0;
        default: return upper_gamma(ell, z * std::exp(-t * m1));
    }
}

// ---- generic construction ----

double mixture_given_z(const RangeQuery& q, const RangeCase& rc, double t, double z) {
    const double m1 = q.params.m + 1.0;
    const double ell = q.params.ell();
    const TailTransform up = q.model.attraction(ExtremeSide::upper);
    const TailTransform low = q.model.attraction(ExtremeSide::lower);
    const bool range = q.statistic == RangeStatistic::range;
    auto upper_df = [&](double x) { return upper_gamma(ell, z * std::pow(kappa(up, x), m1)); };
    switch (rc.shape) {
        case RangeShape::upper_only: return upper_df(t);
        case RangeShape::lower_only:
            // range -> -W2, midrange -> W2
            return range ? std::exp(-z * rho(low, -t)) : -std::expm1(-z * rho(low, t));
        case RangeShape::both: break;
    }
    const double tt = rc.full_midrange_scale && !range ? 2.0 * t : t;
    const double sign = range ? 1.0 : -1.0;
    // Integrate over the W2 law in its exponential scale: z rho(W2) ~ Exp(1).
    auto f = [&](double u) {
        if (u <= 0.0) return sign > 0.0 ? upper_df(-kInf) : upper_df(kInf);
        const double w = rho_inverse(low, u / z);
        return upper_df(tt + sign * w / q.eta);
    };
    return quad::integrate_exp_weight(f, inner_options()).value;
}

double evaluate(const RangeQuery& q, double t) {
    if (std::isnan(t)) throw DomainError("range argument is NaN");
    q.params.validate();
    const RangeCase rc = range_case(q.model, q.params);
    check_eta(rc, q.eta);
    if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
    const bool range = q.statistic == RangeStatistic::range;
    double value = 0.0;
    if (q.route == RangeRoute::published) {
        switch (rc.shape) {
            case RangeShape::lower_only:
                // Printed closed forms; they do not involve H.
                if (range) {
                    value = t > 0.0 ? -std::expm1(-1.0 / t) : 1.0;
                } else {
                    value = t < 0.0 ? std::exp(1.0 / t) : 0.0;
                }
                break;
            case RangeShape::upper_only:
                value = q.law.integrate([&](double z) { return published_upper_only(q, t, z); });
                break;
            case RangeShape::both:
                value = q.law.integrate([&](double z) { return published_both(q, rc, t, z); }, 1e-10);
                break;
        }
    } else {
        value = q.law.integrate([&](double z) { return mixture_given_z(q, rc, t, z); }, 1e-10);
    }
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace

std::string to_string(RangeStatistic statistic) {
    return statistic == RangeStatistic::range ? "range" : "midrange";
}

std::string to_string(RangeRoute route) { return route == RangeRoute::published ? "published" : "mixture"; }

RangeStatistic parse_range_statistic(const std::string& text) {
    const std::string t = lowercase(text);
    if (t == "range") return RangeStatistic::range;
    if (t == "midrange") return RangeStatistic::midrange;
    throw DomainError("unknown statistic '" + text + "' (expected range or midrange)");
}

RangeRoute parse_range_route(const std::string& text) {
    const std::string t = lowercase(text);
    if (t == "published") return RangeRoute::published;
    if (t == "mixture") return RangeRoute::mixture;
    throw DomainError("unknown route '" + text + "' (expected published or mixture)");
}

RangeCase range_case(const DistributionModel& model, const GosParams& params) {
    params.validate();
    const double m = params.m;
    RangeCase rc;
    switch (model.family()) {
        case Family::cauchy:
            rc.zero_centering = true;
            if (m == 0.0) {
                rc.shape = RangeShape::both;
                rc.label = "cauchy m=0";
            } else if (m > 0.0) {
                rc.shape = RangeShape::lower_only;
                rc.lower_scale = true;
                rc.label = "cauchy m>0";
            } else {
                rc.shape = RangeShape::upper_only;
                rc.label = "cauchy m<0";
            }
            return rc;
        case Family::pareto:
            rc.shape = RangeShape::upper_only;
            rc.zero_centering = true;
            rc.label = "pareto";
            return rc;
        case Family::uniform:
            if (m != 0.0) throw UnsupportedCaseError("uniform range limits are available for m = 0 only");
            rc.label = "uniform m=0";
            return rc;
        case Family::beta:
        case Family::power:
            if (!is_constrained_beta(model, params)) {
                throw UnsupportedCaseError(to_string(model.family()) +
                                           " range limits need alpha = (m+1) beta (beta = 1 for power)");
            }
            rc.label = to_string(model.family());
            return rc;
        case Family::normal:
        case Family::logistic:
        case Family::laplace:
            rc.full_midrange_scale = true;
            rc.label = to_string(model.family());
            return rc;
        case Family::lognormal:
        case Family::exponential:
        case Family::rayleigh:
            rc.shape = RangeShape::upper_only;
            rc.label = to_string(model.family());
            return rc;
    }
    throw UnsupportedCaseError("no range case for " + model.spec());
}

double eta_limit(const DistributionModel& model, const GosParams& params) {
    const RangeCase rc = range_case(model, params);
    if (rc.shape == RangeShape::upper_only) return kInf;
    if (rc.shape == RangeShape::lower_only) return 0.0;
    const double m1 = params.m + 1.0;
    switch (model.family()) {
        case Family::normal: return std::sqrt(m1);
        case Family::beta:
        case Family::power: {
            const double alpha = model.param(0);
            const double beta = model.family() == Family::beta ? model.param(1) : 1.0;
            const double c = std::exp(-sf::log_beta(alpha, beta));
            return std::pow(beta / c, 1.0 / beta) * std::pow(c * m1 / alpha, 1.0 / alpha);
        }
        default: return 1.0;
    }
}

double beta_eta_as_printed(double alpha, double beta, double m) {
    const double c = std::exp(-sf::log_beta(alpha, beta));
    return std::pow(beta / c, 1.0 / beta) * std::pow((m + 1.0) / (c * alpha), 1.0 / alpha);
}

RangeNormalization range_normalization(const DistributionModel& model, const GosParams& params,
                                       RangeStatistic statistic) {
    const RangeCase rc = range_case(model, params);
    const NormingConstants nc = norming_constants(model, params);
    RangeNormalization out;
    const bool range = statistic == RangeStatistic::range;
    const double base = rc.lower_scale ? nc.c : nc.a;
    if (range) {
        out.scale = base;
        out.shift = rc.zero_centering ? 0.0 : nc.b - nc.d;
    } else {
        out.scale = rc.full_midrange_scale ? base : 0.5 * base;
        out.shift = rc.zero_centering ? 0.0 : 0.5 * (nc.b + nc.d);
    }
    return out;
}

RangeQuery make_range_query(const DistributionModel& model, const GosParams& params, const IndexLaw& law,
                            RangeStatistic statistic, RangeRoute route) {
    RangeQuery q{model, params, law, statistic, eta_limit(model, params), route};
    return q;
}

double range_limit_df(const RangeQuery& query, double r) {
    if (query.statistic != RangeStatistic::range) throw DomainError("range_limit_df needs a range query");
    return evaluate(query, r);
}

double midrange_limit_df(const RangeQuery& query, double v) {
    if (query.statistic != RangeStatistic::midrange) {
        throw DomainError("midrange_limit_df needs a midrange query");
    }
    return evaluate(query, v);
}

double range_statistic_df(const RangeQuery& query, double t) { return evaluate(query, t); }

double normal_range_closed_form(double r) {
    if (std::isnan(r)) throw DomainError("normal_range_closed_form: NaN argument");
    if (r < -700.0) return 0.0;
    if (r == std::log(4.0)) return 2.0 / 3.0;
    const double e = std::exp(-r);
    const double d = 4.0 * e - 1.0;
    if (std::fabs(d) < 0.05) {
        // Both branches share the expansion sum_{j>=1} 2 (-d)^{j-1} / (4 j^2 - 1).
        double sum = 0.0;
        double power = 1.0;
        for (int j = 1; j <= 30; ++j) {
            sum += 2.0 * power / (4.0 * j * j - 1.0);
            power *= -d;
        }
        return sum;
    }
    if (d > 0.0) {
        const double root = std::sqrt(d);
        return (4.0 * e / root * std::atan(root) - 1.0) / d;
    }
    const double s = std::sqrt(1.0 - 4.0 * e);
    // ln((1+s)/(1-s)) with 1 - s = 4e / (1 + s)
    const double log_ratio = 2.0 * std::log1p(s) - std::log(4.0 * e);
    return (1.0 - 2.0 * e / s * log_ratio) / (1.0 - 4.0 * e);
}

double normal_range_integral(double r) {
    const double e = std::exp(-r);
    auto f = [&](double y) {
        const double den = y * y + y + e;
        return y * y / (den * den);
    };
    quad::Options opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-13;
    // The integrand peaks near y ~ sqrt(e); split there for wide parameter ranges.
    const double knee = std::max(1e-300, std::sqrt(e));
    return quad::integrate(f, 0.0, knee, opts).value + quad::integrate_to_infinity(f, knee, opts).value;
}

double normal_midrange_integral(double v) {
    const double slope = std::exp(2.0 * v) + 1.0;
    auto f = [&](double y) {
        const double den = y * slope + 1.0;
        return 1.0 / (den * den);
    };
    quad::Options opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-13;
    const double knee = 1.0 / slope;
    return 1.0 - quad::integrate(f, 0.0, knee, opts).value - quad::integrate_to_infinity(f, knee, opts).value;
}

double normal_midrange_closed_form(double v) { return 1.0 / (1.0 + std::exp(-2.0 * v)); }

}  // namespace gosx
