#include "gosx/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gosx/errors.hpp"
#include "gosx/quadrature.hpp"
#include "gosx/specfun.hpp"

namespace gosx {

namespace sf = specfun;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_extended_nonneg(double v, const char* what) {
    if (!(v >= 0.0)) throw DomainError(std::string(what) + " must lie in [0, +inf]");
}

void require_side(const TailTransform& t, ExtremeSide side) {
    t.validate();
    if (t.side != side) {
        throw DomainError("tail transform is for the " + to_string(t.side) + " side, expected " +
                          to_string(side));
    }
}

// Gamma_r(x) with x in [0, +inf].
double gamma_lower(double r, double x) { return sf::reg_inc_gamma(r, x); }
double gamma_upper(double r, double x) { return sf::reg_inc_gamma_upper(r, x); }

}  // namespace

double kappa(const TailTransform& transform, double x) {
    require_side(transform, ExtremeSide::upper);
    switch (transform.type) {
        case TailType::frechet: return x > 0.0 ? std::pow(x, -transform.alpha) : kInf;
        case TailType::weibull: return x <= 0.0 ? std::pow(-x, transform.alpha) : 0.0;
        case TailType::gumbel: return std::exp(-x);
    }
    return kInf;
}

double rho(const TailTransform& transform, double x) {
    require_side(transform, ExtremeSide::lower);
    switch (transform.type) {
        case TailType::frechet: return x < 0.0 ? std::pow(-x, -transform.alpha) : kInf;
        case TailType::weibull: return x >= 0.0 ? std::pow(x, transform.alpha) : 0.0;
        case TailType::gumbel: return std::exp(x);
    }
    return kInf;
}

double rho_inverse(const TailTransform& transform, double value) {
    require_side(transform, ExtremeSide::lower);
    if (!(value > 0.0)) throw DomainError("rho_inverse: value must be positive");
    switch (transform.type) {
        case TailType::frechet: return -std::pow(value, -1.0 / transform.alpha);
        case TailType::weibull: return std::pow(value, 1.0 / transform.alpha);
        case TailType::gumbel: return std::log(value);
    }
    return 0.0;
}

double omega_uu_powered(const GosParams& params, int r, int s, double t1, double t2) {
    if (!(s >= 1 && s < r)) throw RegimeError("upper-upper limit requires 1 <= s < r");
    require_extended_nonneg(t1, "kappa1^{m+1}");
    require_extended_nonneg(t2, "kappa2^{m+1}");
    const double rr = params.effective_rank(r);
    const double rs = params.effective_rank(s);
    if (t1 < t2) return gamma_upper(rs, t2);
    const double head = gamma_upper(rr, t1);
    if (head == 0.0 || t2 == 0.0) return head;
    // u = t1 - ln(1 - v): e^{-u} du = e^{-t1} dv.
    const double log_front = -t1 - sf::log_gamma(rr);
    auto integrand = [&](double v) {
        const double u = t1 - std::log1p(-v);
        if (!(u > 0.0) || std::isinf(u)) return 0.0;
        const double inner = sf::reg_inc_beta(std::min(1.0, t2 / u), rs, rr - rs);
        if (inner == 0.0) return 0.0;
        return inner * std::exp((rr - 1.0) * std::log(u) + log_front);
    };
    quad::Options opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-13;
    const double tail = quad::integrate(integrand, 0.0, 1.0, opts).value;
    return std::clamp(head - tail, 0.0, 1.0);
}

double omega_uu(const GosParams& params, int r, int s, double kappa1, double kappa2) {
    params.validate();
    require_extended_nonneg(kappa1, "kappa1");
    require_extended_nonneg(kappa2, "kappa2");
    const double m1 = params.m + 1.0;
    return omega_uu_powered(params, r, s, std::pow(kappa1, m1), std::pow(kappa2, m1));
}

double omega_ll(int r, int s, double rho1, double rho2) {
    if (!(r >= 1 && r < s)) throw RegimeError("lower-lower limit requires 1 <= r < s");
    require_extended_nonneg(rho1, "rho1");
    require_extended_nonneg(rho2, "rho2");
    if (rho1 > rho2) return gamma_lower(s, rho2);
    if (rho1 == 0.0) return 0.0;
    if (std::isinf(rho2)) return gamma_lower(r, rho1);
    const double log_norm = sf::log_gamma(r);
    auto integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        return gamma_lower(s - r, rho2 - u) * std::exp((r - 1.0) * std::log(u) - u - log_norm);
    };
    quad::Options opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-13;
    // The kernel's mass sits near u = r; split there so wide intervals are resolved.
    double value = 0.0;
    const double split = std::min<double>(rho1, r);
    value += quad::integrate(integrand, 0.0, split, opts).value;
    if (rho1 > split) {
        const double cap = std::min(rho1, r + 60.0 + 20.0 * std::sqrt(static_cast<double>(r)));
        value += quad::integrate(integrand, split, cap, opts).value;
    }
    return std::clamp(value, 0.0, 1.0);
}

double omega_lu_product(const GosParams& params, int r, int s, double rho1, double kappa2) {
    params.validate();
    return lower_marginal_limit(r, rho1) * upper_marginal_limit(params, s, kappa2);
}

double upper_marginal_limit(const GosParams& params, int r, double kappa_value) {
    params.validate();
    if (r < 1) throw RegimeError("rank must be at least 1");
    require_extended_nonneg(kappa_value, "kappa");
    return gamma_upper(params.effective_rank(r), std::pow(kappa_value, params.m + 1.0));
}

double lower_marginal_limit(int r, double rho_value) {
    if (r < 1) throw RegimeError("rank must be at least 1");
    require_extended_nonneg(rho_value, "rho");
    return gamma_lower(r, rho_value);
}

}  // namespace gosx
