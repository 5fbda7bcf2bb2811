#pragma once

// Limit law H of nu_n / n and the random-index mixtures of the limit laws.

#include <string>
#include <utility>
#include <vector>

#include "gosx/gos.hpp"
#include "gosx/limit_laws.hpp"
#include "gosx/params.hpp"
#include "gosx/quadrature.hpp"
#include "gosx/tail.hpp"

namespace gosx {

class IndexLaw {
public:
    enum class Kind { degenerate, unit_exponential, tabulated };

    static IndexLaw degenerate(double c);
    static IndexLaw unit_exponential();
    /// Piecewise-linear H through (z, H) knots: z strictly increasing from
    /// z >= 0, H nondecreasing, first value 0, last value 1.
    static IndexLaw tabulated(std::vector<std::pair<double, double>> knots);
    /// Two-column `z,H` CSV with a header row.
    static IndexLaw from_csv(const std::string& path);
    /// `degenerate:c`, `exponential`, `uniform:a:b` or `tabulated:<file.csv>`.
    static IndexLaw parse(const std::string& spec);

    Kind kind() const { return kind_; }
    double point() const { return point_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    std::string describe() const;

    double cdf(double z) const;

    /// int_0^inf f(z) dH(z).
    template <class F>
    double integrate(const F& f, double abs_tol = 1e-11) const {
        quad::Options opts;
        opts.abs_tol = abs_tol;
        switch (kind_) {
            case Kind::degenerate: return f(point_);
            case Kind::unit_exponential: return quad::integrate_exp_weight(f, opts).value;
            case Kind::tabulated: {
                double total = 0.0;
                for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
                    const auto [z0, h0] = knots_[i];
                    const auto [z1, h1] = knots_[i + 1];
                    if (h1 == h0) continue;
                    const double slope = (h1 - h0) / (z1 - z0);
                    total += slope * quad::integrate(f, z0, z1, opts).value;
                }
                return total;
            }
        }
        return 0.0;
    }

private:
    IndexLaw(Kind kind, double point, std::vector<std::pair<double, double>> knots)
        : kind_(kind), point_(point), knots_(std::move(knots)) {}

    Kind kind_;
    double point_;
    std::vector<std::pair<double, double>> knots_;
};

double h_cdf(const IndexLaw& law, double z);

struct MixtureQuery {
    GosParams params;
    RankPair ranks;
    LimitPoint point;  // kappa/rho values per the regime
    IndexLaw law = IndexLaw::degenerate(1.0);
};

/// int Omega_uu(z kappa1^{m+1}, z kappa2^{m+1}) dH(z)
double mixture_uu(const MixtureQuery& query);
/// int Omega_ll(z rho1, z rho2) dH(z)
double mixture_ll(const MixtureQuery& query);
/// Product of the separately mixed lower and upper factors.
double mixture_lu(const MixtureQuery& query);
/// int Gamma_r(z rho1) (1 - Gamma_{R_s}(z kappa2^{m+1})) dH(z), the mixture of the
/// product. Coincides with mixture_lu only for degenerate H.
double mixture_lu_joint(const MixtureQuery& query);

/// Dispatches on query.ranks.regime; lower_upper uses mixture_lu.
double mixture(const MixtureQuery& query);

/// upper: int (1 - Gamma_{R_r}(z value^{m+1})) dH; lower: int Gamma_r(z value) dH.
double mixture_marginal(ExtremeSide side, const GosParams& params, int r, double value, const IndexLaw& law);

}  // namespace gosx
