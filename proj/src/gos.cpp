#include "gosx/gos.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "gosx/errors.hpp"
#include "gosx/quadrature.hpp"
#include "gosx/specfun.hpp"

namespace gosx {

namespace sf = specfun;

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::upper_upper: return "uu";
        case Regime::lower_lower: return "ll";
        case Regime::lower_upper: return "lu";
    }
    return "?";
}

Regime parse_regime(const std::string& text) {
    std::string t;
    for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "uu" || t == "upper_upper") return Regime::upper_upper;
    if (t == "ll" || t == "lower_lower") return Regime::lower_lower;
    if (t == "lu" || t == "lower_upper") return Regime::lower_upper;
    throw RegimeError("unknown regime '" + text + "' (expected uu, ll or lu)");
}

void RankPair::validate(int n) const {
    if (r < 1 || s < 1) throw RegimeError("ranks must be at least 1");
    if (n > 0 && (r > n || s > n)) {
        throw RegimeError("rank exceeds the sample size n = " + std::to_string(n));
    }
    switch (regime) {
        case Regime::upper_upper:
            if (!(s < r)) throw RegimeError("upper-upper regime requires s < r (upper ranks)");
            break;
        case Regime::lower_lower:
            if (!(r < s)) throw RegimeError("lower-lower regime requires r < s");
            break;
        case Regime::lower_upper: break;
    }
}

namespace {

void check_rank(const GosParams& params, int r) {
    if (r < 1 || r > params.n) {
        throw RegimeError("rank " + std::to_string(r) + " outside 1.." + std::to_string(params.n));
    }
}

// P(T > t) for T ~ Beta(a, b), with the complement taken on the better side.
double beta_survival(double t, double a, double b) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    return sf::reg_inc_beta(1.0 - t, b, a);
}

// E[ I_{beta/T}(rs, rr - rs) ; T > alpha ] with T ~ Beta(rr, nb), beta <= alpha.
double beta_kernel_tail(double alpha, double beta, double rr, double rs, double nb) {
    if (alpha >= 1.0 || beta <= 0.0) return 0.0;
    const double log_norm = sf::log_beta(rr, nb);
    auto integrand = [&](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        const double ratio = std::min(1.0, beta / t);
        const double inner = sf::reg_inc_beta(ratio, rs, rr - rs);
        if (inner == 0.0) return 0.0;
        const double log_pdf = (rr - 1.0) * std::log(t) + (nb - 1.0) * std::log1p(-t) - log_norm;
        return inner * std::exp(log_pdf);
    };
    // Truncate where the kernel's remaining mass is negligible.
    const double mean = rr / (rr + nb);
    const double sd = std::sqrt(rr * nb / ((rr + nb) * (rr + nb) * (rr + nb + 1.0)));
    double hi = std::max(alpha, mean) + 8.0 * sd;
    while (hi < 1.0 && beta_survival(hi, rr, nb) > 1e-17) hi = std::min(1.0, hi + 8.0 * sd + (hi - alpha));
    hi = std::min(hi, 1.0);
    quad::Options opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-13;
    // Bracket the kernel's bulk so the first panels see its shape.
    double total = 0.0;
    double lo = alpha;
    const double breaks[] = {mean - 4.0 * sd, mean, mean + 4.0 * sd};
    for (double br : breaks) {
        if (br > lo && br < hi) {
            total += quad::integrate(integrand, lo, br, opts).value;
            lo = br;
        }
    }
    total += quad::integrate(integrand, lo, hi, opts).value;
    return total;
}

// (1/Gamma(rr)) int_a^cap I_{b/u}(rs, rr-rs) u^{rr-1} e^{-u} du
double gamma_kernel_tail(double a, double b, double cap, double rr, double rs) {
    if (a >= cap || b <= 0.0) return 0.0;
    const double log_norm = sf::log_gamma(rr);
    auto integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double inner = sf::reg_inc_beta(std::min(1.0, b / u), rs, rr - rs);
        if (inner == 0.0) return 0.0;
        return inner * std::exp((rr - 1.0) * std::log(u) - u - log_norm);
    };
    const double sd = std::sqrt(rr);
    double hi = std::min(cap, std::max(a, rr) + 40.0 * sd + 40.0);
    quad::Options opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-13;
    double total = 0.0;
    double lo = a;
    const double breaks[] = {rr - 4.0 * sd, rr, rr + 4.0 * sd};
    for (double br : breaks) {
        if (br > lo && br < hi) {
            total += quad::integrate(integrand, lo, br, opts).value;
            lo = br;
        }
    }
    total += quad::integrate(integrand, lo, hi, opts).value;
    return total;
}

}  // namespace

double lm_bar(const GosParams& params, const DistributionModel& model, double x) {
    const double sf_x = model.survival(x);
    if (sf_x <= 0.0) return 0.0;
    if (sf_x >= 1.0) return 1.0;
    return std::exp((params.m + 1.0) * std::log(sf_x));
}

double lm(const GosParams& params, const DistributionModel& model, double x) {
    const double sf_x = model.survival(x);
    if (sf_x <= 0.0) return 1.0;
    if (sf_x >= 1.0) return 0.0;
    return std::clamp(-std::expm1((params.m + 1.0) * std::log(sf_x)), 0.0, 1.0);
}

double marginal_lower_df(const GosParams& params, const DistributionModel& model, int r, double x) {
    params.validate();
    check_rank(params, r);
    const double big_n = params.big_n();
    const double l = lm(params, model, x);
    if (l <= 0.5) return sf::reg_inc_beta(l, r, big_n - r + 1.0);
    return 1.0 - sf::reg_inc_beta(lm_bar(params, model, x), big_n - r + 1.0, r);
}

double marginal_upper_df(const GosParams& params, const DistributionModel& model, int r, double x) {
    params.validate();
    check_rank(params, r);
    const double big_n = params.big_n();
    const double rr = params.effective_rank(r);
    const double lbar = lm_bar(params, model, x);
    // P(T > lbar) with T ~ Beta(R_r, N - R_r + 1)
    return beta_survival(lbar, rr, big_n - rr + 1.0);
}

double joint_upper_df(const GosParams& params, const DistributionModel& model, const RankPair& pair,
                      double x, double y) {
    params.validate();
    if (pair.regime != Regime::upper_upper) throw RegimeError("joint_upper_df needs the upper-upper regime");
    pair.validate(params.n);
    if (x > y) return marginal_upper_df(params, model, pair.s, y);
    const double big_n = params.big_n();
    const double rr = params.effective_rank(pair.r);
    const double rs = params.effective_rank(pair.s);
    const double nb = big_n - rr + 1.0;
    const double alpha = lm_bar(params, model, x);
    const double beta = lm_bar(params, model, y);
    const double value = beta_survival(alpha, rr, nb) - beta_kernel_tail(alpha, beta, rr, rs, nb);
    return std::clamp(value, 0.0, 1.0);
}

double joint_upper_df_gamma_kernel(const GosParams& params, const DistributionModel& model,
                                   const RankPair& pair, double x, double y) {
    params.validate();
    if (pair.regime != Regime::upper_upper) {
        throw RegimeError("joint_upper_df_gamma_kernel needs the upper-upper regime");
    }
    pair.validate(params.n);
    const double big_n = params.big_n();
    const double rr = params.effective_rank(pair.r);
    const double rs = params.effective_rank(pair.s);
    if (x > y) return sf::reg_inc_gamma_upper(rs, big_n * lm_bar(params, model, y));
    const double a = big_n * lm_bar(params, model, x);
    const double b = big_n * lm_bar(params, model, y);
    const double value = sf::reg_inc_gamma_upper(rr, a) - gamma_kernel_tail(a, b, big_n, rr, rs);
    return std::clamp(value, 0.0, 1.0);
}

double joint_df_direct(const GosParams& params, const DistributionModel& model, int r, int s, double x,
                       double y) {
    params.validate();
    if (!(r < s)) throw RegimeError("joint_df_direct requires r < s (lower ranks)");
    check_rank(params, r);
    check_rank(params, s);
    x = std::min(x, y);
    const double fx = model.cdf(x);
    const double fy = model.cdf(y);
    if (fx <= 0.0) return 0.0;

    const double m1 = params.m + 1.0;
    const double big_n = params.big_n();
    const double gamma_s = params.gamma(s);
    const double log_c = 2.0 * std::log(m1) + sf::log_gamma(big_n + 1.0) - sf::log_gamma(big_n - s + 1.0) -
                         sf::log_gamma(r) - sf::log_gamma(s - r);
    const double scale = std::exp(log_c);

    quad::Options inner_opts;
    inner_opts.abs_tol = 1e-12 / scale;
    inner_opts.rel_tol = 1e-12;
    quad::Options outer_opts;
    outer_opts.abs_tol = 1e-11 / scale;
    outer_opts.rel_tol = 1e-12;

    auto inner = [&](double xi) {
        const double xi_bar = 1.0 - xi;
        const double xi_pow = std::pow(xi_bar, m1);
        auto g = [&](double eta) {
            const double eta_bar = 1.0 - eta;
            const double gap = std::max(0.0, xi_pow - std::pow(eta_bar, m1));
            return std::pow(eta_bar, gamma_s - 1.0) * std::pow(gap, s - r - 1);
        };
        const double h = quad::integrate(g, xi, fy, inner_opts).value;
        return std::pow(xi_bar, params.m) * std::pow(1.0 - xi_pow, r - 1) * h;
    };
    const quad::Result outer = quad::integrate(inner, 0.0, fx, outer_opts);
    return std::clamp(scale * outer.value, 0.0, 1.0);
}

}  // namespace gosx
