#pragma once

// Regularized incomplete gamma and beta ratios.
//
// Series expansion below the usual crossover, modified-Lentz continued
// fraction above it. Prefactors x^a e^-x / Gamma(a) and x^a (1-x)^b / B(a,b)
// are formed through Stirling-corrected logarithms once the parameters are
// large so the kernels stay accurate for effective sample sizes in the 1e5
// range. Every result is clamped to [0, 1].

namespace gosx::specfun {

struct Accuracy {
    double abs_tol = 1e-12;
    /// Base term budget; the kernels add ~10*sqrt(a) on top for large a.
    int max_terms = 500;
};

void validate(const Accuracy& acc);

/// ln Gamma(a) for a > 0.
double log_gamma(double a);

/// ln B(a, b) for a, b > 0, stable for large arguments.
double log_beta(double a, double b);

/// Gamma_r(x) = P(r, x), the lower regularized incomplete gamma ratio.
/// x = +inf is accepted and yields 1.
double reg_inc_gamma(double r, double x, const Accuracy& acc = {});

/// 1 - Gamma_r(x), computed without cancellation in the upper tail.
double reg_inc_gamma_upper(double r, double x, const Accuracy& acc = {});

/// I_x(a, b), the regularized incomplete beta ratio.
double reg_inc_beta(double x, double a, double b, const Accuracy& acc = {});

/// log(1 + u) - u, accurate for small |u|.
double log1pmx(double u);

}  // namespace gosx::specfun
