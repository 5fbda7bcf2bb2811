#pragma once

// Limit laws of extreme m-GOS pairs under fixed sample size.
//
// Upper ranks follow the top-down convention (s < r, r-th largest below the
// s-th largest). Arguments may be +inf; Gamma_r(+inf) = 1 exactly.

#include "gosx/params.hpp"
#include "gosx/tail.hpp"

namespace gosx {

/// Point in limit-law coordinates; either member may be +inf.
struct LimitPoint {
    double first = 0.0;   // kappa1 (uu) or rho1 (ll, lu)
    double second = 0.0;  // kappa2 (uu, lu) or rho2 (ll)
};

/// Upper-side transform: nonincreasing, values in [0, +inf].
double kappa(const TailTransform& transform, double x);
/// Lower-side transform: nondecreasing, values in [0, +inf].
double rho(const TailTransform& transform, double x);
/// Inverse of rho on (0, +inf).
double rho_inverse(const TailTransform& transform, double value);

/// Upper-upper limit df with kappa values (raised to m+1 internally).
double omega_uu(const GosParams& params, int r, int s, double kappa1, double kappa2);

/// Same family in the powered coordinates t_i = kappa_i^{m+1}. The x <= y
/// branch is t1 >= t2. Mixtures scale these coordinates by z.
double omega_uu_powered(const GosParams& params, int r, int s, double t1, double t2);

/// Lower-lower limit df; r < s.
double omega_ll(int r, int s, double rho1, double rho2);

/// Lower-upper product limit Gamma_r(rho1) (1 - Gamma_{R_s}(kappa2^{m+1})).
double omega_lu_product(const GosParams& params, int r, int s, double rho1, double kappa2);

/// Fixed-size marginal limits: 1 - Gamma_{R_r}(kappa^{m+1}) and Gamma_r(rho).
double upper_marginal_limit(const GosParams& params, int r, double kappa_value);
double lower_marginal_limit(int r, double rho_value);

}  // namespace gosx
