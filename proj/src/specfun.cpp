#include "gosx/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gosx/errors.hpp"

namespace gosx::specfun {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Above this, Stirling corrections are used for the prefactors.
constexpr double kStirlingCutoff = 10.0;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

int term_budget(const Accuracy& acc, double a) {
    return acc.max_terms + static_cast<int>(10.0 * std::ceil(std::sqrt(a)));
}

// ln of Gamma(a) / (sqrt(2 pi) a^(a-1/2) e^-a), a >= 10.
double log_gammastar(double a) {
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    return inv *
           (1.0 / 12.0 -
            inv2 * (1.0 / 360.0 -
                    inv2 * (1.0 / 1260.0 -
                            inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0 - inv2 * (691.0 / 360360.0))))));
}

// ln( x^a e^-x / Gamma(a) ).
double log_gamma_prefactor(double a, double x) {
    if (a < kStirlingCutoff) {
        return a * std::log(x) - x - log_gamma(a);
    }
    const double mu = (x - a) / a;
    return a * log1pmx(mu) + 0.5 * std::log(a / (2.0 * std::numbers::pi)) - log_gammastar(a);
}

double gamma_series(double a, double x, const Accuracy& acc) {
    // P(a,x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))
    double sum = 1.0;
    double term = 1.0;
    const int budget = term_budget(acc, a);
    for (int n = 1; n <= budget; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term < sum * kEps) {
            return std::exp(log_gamma_prefactor(a, x) - std::log(a)) * sum;
        }
    }
    throw ConvergenceError("reg_inc_gamma: series did not converge");
}

double gamma_continued_fraction(double a, double x, const Accuracy& acc) {
    // Q(a,x) = x^a e^-x / Gamma(a) * 1/(x+1-a- 1(1-a)/(x+3-a- ...))
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    const int budget = term_budget(acc, a);
    for (int i = 1; i <= budget; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) {
            return std::exp(log_gamma_prefactor(a, x)) * h;
        }
    }
    throw ConvergenceError("reg_inc_gamma: continued fraction did not converge");
}

void check_gamma_args(double r, double x) {
    if (!(r > 0.0) || std::isinf(r)) throw DomainError("reg_inc_gamma: r must be a positive finite real");
    if (!(x >= 0.0)) throw DomainError("reg_inc_gamma: x must be nonnegative");
}

// ln( x^a (1-x)^b / B(a,b) ).
double log_beta_prefactor(double x, double a, double b) {
    if (a >= kStirlingCutoff && b >= kStirlingCutoff) {
        // Linear terms of a*ln(x/p0) + b*ln((1-x)/(1-p0)) cancel exactly.
        const double s = a + b;
        const double p0 = a / s;
        const double delta = x - p0;
        return a * log1pmx(delta / p0) + b * log1pmx(-delta / (1.0 - p0)) +
               0.5 * std::log(a * b / (2.0 * std::numbers::pi * s)) - log_gammastar(a) -
               log_gammastar(b) + log_gammastar(s);
    }
    return a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
}

double beta_continued_fraction(double a, double b, double x, const Accuracy& acc) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    const int budget = term_budget(acc, std::max(a, b));
    for (int m = 1; m <= budget; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("reg_inc_beta: continued fraction did not converge");
}

}  // namespace

void validate(const Accuracy& acc) {
    if (!(acc.abs_tol > 0.0)) throw DomainError("Accuracy: abs_tol must be positive");
    if (acc.max_terms < 1) throw DomainError("Accuracy: max_terms must be at least 1");
}

double log1pmx(double u) {
    if (std::fabs(u) < 1e-2) {
        // -u^2/2 + u^3/3 - u^4/4 + ...
        double term = u;
        double sum = 0.0;
        for (int k = 2; k < 16; ++k) {
            term *= -u;
            sum += term / k;
        }
        return sum;
    }
    return std::log1p(u) - u;
}

double log_gamma(double a) {
    if (!(a > 0.0)) throw DomainError("log_gamma: argument must be positive");
    int sign = 0;
    return ::lgamma_r(a, &sign);
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta: arguments must be positive");
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (hi < kStirlingCutoff) {
        return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
    }
    const double s = a + b;
    // lgamma(hi) - lgamma(s) through Stirling:
    // (hi-1/2) ln hi - hi - (s-1/2) ln s + s + corrections
    const double diff = -(hi - 0.5) * std::log1p(lo / hi) - lo * std::log(s) + lo +
                        log_gammastar(hi) - log_gammastar(s);
    return log_gamma(lo) + diff;
}

double reg_inc_gamma(double r, double x, const Accuracy& acc) {
    check_gamma_args(r, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < r + 1.0) return clamp01(gamma_series(r, x, acc));
    return clamp01(1.0 - gamma_continued_fraction(r, x, acc));
}

double reg_inc_gamma_upper(double r, double x, const Accuracy& acc) {
    check_gamma_args(r, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < r + 1.0) return clamp01(1.0 - gamma_series(r, x, acc));
    return clamp01(gamma_continued_fraction(r, x, acc));
}

double reg_inc_beta(double x, double a, double b, const Accuracy& acc) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reg_inc_beta: x must lie in [0, 1]");
    if (!(a > 0.0) || !(b > 0.0) || std::isinf(a) || std::isinf(b)) {
        throw DomainError("reg_inc_beta: a and b must be positive finite reals");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double front = std::exp(log_beta_prefactor(x, a, b));
        return clamp01(front * beta_continued_fraction(a, b, x, acc) / a);
    }
    const double front = std::exp(log_beta_prefactor(1.0 - x, b, a));
    return clamp01(1.0 - front * beta_continued_fraction(b, a, 1.0 - x, acc) / b);
}

}  // namespace gosx::specfun
