#pragma once

#include <string>

namespace gosx {

/// The m-GOS model: gamma_j - gamma_{j+1} = m + 1 with gamma_n = k.
struct GosParams {
    double m = 0.0;
    double k = 1.0;
    int n = 2;

    /// ell = k / (m + 1)
    double ell() const { return k / (m + 1.0); }
    /// Effective sample size N = ell + n - 1.
    double big_n() const { return ell() + n - 1.0; }
    /// Effective rank R_r = ell + r - 1.
    double effective_rank(int r) const { return ell() + r - 1.0; }
    /// gamma_j = k + (n - j)(m + 1)
    double gamma(int j) const { return k + (n - j) * (m + 1.0); }

    void validate() const;
    std::string describe() const;
};

GosParams make_params(double m, double k, int n);

}  // namespace gosx
