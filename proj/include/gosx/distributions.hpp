#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gosx/params.hpp"
#include "gosx/tail.hpp"

namespace gosx {

enum class Family {
    cauchy,
    pareto,
    uniform,
    beta,
    power,
    normal,
    logistic,
    laplace,
    lognormal,
    exponential,
    rayleigh,
};

std::string to_string(Family family);

/// Parent df F. Immutable value type; all members are pure.
class DistributionModel {
public:
    static DistributionModel cauchy();
    static DistributionModel pareto(double sigma);
    static DistributionModel uniform(double theta);
    static DistributionModel beta(double alpha, double beta);
    static DistributionModel power(double alpha);
    static DistributionModel normal();
    static DistributionModel logistic();
    static DistributionModel laplace();
    static DistributionModel lognormal();
    static DistributionModel exponential(double sigma);
    static DistributionModel rayleigh(double sigma);

    /// Parse `name(p1=...,p2=...)`; names are case-insensitive and missing
    /// parameters default to 1.
    static DistributionModel parse(std::string_view spec);
    static std::vector<std::string> family_names();

    Family family() const { return family_; }
    double param(int i) const { return params_[i]; }
    /// Canonical spec string, accepted by parse().
    std::string spec() const;

    double cdf(double x) const;
    /// 1 - F(x) without cancellation in the upper tail.
    double survival(double x) const;
    double quantile(double p) const;
    /// x with 1 - F(x) = q, accurate for small q.
    double inverse_survival(double q) const;
    /// Inverse for a point given by ln(1 - F); picks the better-conditioned branch.
    double from_log_survival(double log_q) const;

    double lower_endpoint() const;
    double upper_endpoint() const;

    /// Classical attraction type of F on the given side.
    TailTransform attraction(ExtremeSide side) const;

private:
    DistributionModel(Family family, double p0, double p1);

    Family family_;
    std::array<double, 2> params_;
};

struct NormingConstants {
    double a = 1.0;  // upper scale
    double b = 0.0;  // upper shift
    double c = 1.0;  // lower scale
    double d = 0.0;  // lower shift
};

/// Constants with N * Lbar_m(a x + b) -> kappa(x)^{m+1} and
/// N * L_m(c x + d) -> rho(x).
NormingConstants norming_constants(const DistributionModel& model, const GosParams& params);

/// Parse a real with symbolic forms: pi, e, inf, ln<x>, sqrt<x>, exp<x>, each
/// optionally negated.
double parse_real(std::string_view text);

}  // namespace gosx
