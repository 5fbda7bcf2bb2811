#pragma once

// Exact finite-sample distribution functions of extreme m-GOS.
//
// Two rank conventions appear here. Lower ranks count from the bottom
// (r = 1 is the minimum). Upper ranks count from the top (r = 1 is the
// maximum) and correspond to the lower rank n - r + 1. joint_upper_df takes
// upper ranks with s < r; joint_df_direct takes lower ranks with r < s.

#include <string>

#include "gosx/distributions.hpp"
#include "gosx/params.hpp"

namespace gosx {

enum class Regime { upper_upper, lower_lower, lower_upper };

std::string to_string(Regime regime);
Regime parse_regime(const std::string& text);

struct RankPair {
    int r = 2;
    int s = 1;
    Regime regime = Regime::upper_upper;

    /// Checks the regime ordering; with n > 0 also checks 1 <= r, s <= n.
    void validate(int n = 0) const;
    int max_rank() const { return r > s ? r : s; }
};

/// L_m(x) = 1 - (1 - F(x))^{m+1}
double lm(const GosParams& params, const DistributionModel& model, double x);
/// 1 - L_m(x) = (1 - F(x))^{m+1}
double lm_bar(const GosParams& params, const DistributionModel& model, double x);

/// df of the r-th smallest m-GOS: I_{L_m(x)}(r, N - r + 1).
double marginal_lower_df(const GosParams& params, const DistributionModel& model, int r, double x);

/// df of the r-th largest m-GOS: I_{L_m(x)}(N - R_r + 1, R_r).
double marginal_upper_df(const GosParams& params, const DistributionModel& model, int r, double x);

/// P(X_{n-r+1:n} < x, X_{n-s+1:n} < y) for upper ranks s < r, exact.
///
/// For x <= y this is
///   1 - I_{Lbar(x)}(R_r, N-R_r+1) - E[ I_{Lbar(y)/T}(R_s, R_r-R_s) ; T > Lbar(x) ]
/// with T ~ Beta(R_r, N - R_r + 1) the Lbar-value of the r-th largest. With u = N T
/// this is the finite-n counterpart of the gamma-kernel representation below; the
/// two agree as n grows. For x > y it reduces to marginal_upper_df(s, y).
double joint_upper_df(const GosParams& params, const DistributionModel& model, const RankPair& pair,
                      double x, double y);

/// The gamma-kernel representation
///   1 - Gamma_{R_r}(N Lbar(x)) - 1/Gamma(R_r) int_{N Lbar(x)}^{N} I_{N Lbar(y)/u}(R_s, R_r-R_s) u^{R_r-1} e^{-u} du.
/// Only asymptotically equal to the joint df; used to study the rate.
double joint_upper_df_gamma_kernel(const GosParams& params, const DistributionModel& model,
                                   const RankPair& pair, double x, double y);

/// Joint df P(X_{r:n} <= x, X_{s:n} <= y), 1 <= r < s <= n (lower ranks), by
/// nested quadrature of the joint m-GOS density. x > y is evaluated at x = y.
double joint_df_direct(const GosParams& params, const DistributionModel& model, int r, int s,
                       double x, double y);

}  // namespace gosx
