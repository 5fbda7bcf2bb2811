#pragma once

// Limit laws of the normalized random generalized range X_max - X_min and
// midrange (X_max + X_min)/2 under a random sample size with index law H.
//
// Given z, the normalized maximum W1 and minimum W2 are asymptotically
// independent with
//   P(W1 <= x | z) = 1 - Gamma_ell(z kappa(x)^{m+1}),  P(W2 <= w | z) = 1 - exp(-z rho(w)).
// With eta = lim a_n / c_n the range tends to W1 - W2/eta and the midrange to
// W1 + W2/eta; eta = +inf leaves only W1, eta = 0 (range scaled by c_n) only W2.

#include <string>

#include "gosx/distributions.hpp"
#include "gosx/params.hpp"
#include "gosx/random_index.hpp"

namespace gosx {

enum class RangeStatistic { range, midrange };

/// published: the closed forms and integral displays of the case table;
/// mixture: the generic conditional construction above.
enum class RangeRoute { published, mixture };

std::string to_string(RangeStatistic statistic);
std::string to_string(RangeRoute route);
RangeStatistic parse_range_statistic(const std::string& text);
RangeRoute parse_range_route(const std::string& text);

/// Which extremes survive in the limit.
enum class RangeShape { both, upper_only, lower_only };

struct RangeCase {
    RangeShape shape = RangeShape::both;
    /// Range scale is c_n instead of a_n.
    bool lower_scale = false;
    /// Centering B is zero rather than b - d (and (b + d)/2).
    bool zero_centering = false;
    /// Midrange scale is a_n instead of a_n / 2.
    bool full_midrange_scale = false;
    std::string label;
};

/// Case-table lookup keyed by family and the sign of m; throws
/// UnsupportedCaseError for combinations outside the table.
RangeCase range_case(const DistributionModel& model, const GosParams& params);

/// lim a_n / c_n in [0, +inf].
double eta_limit(const DistributionModel& model, const GosParams& params);

/// The beta-case ratio in the form printed alongside the beta example; it
/// disagrees with eta_limit whenever the beta normalizer differs from 1.
double beta_eta_as_printed(double alpha, double beta, double m);

struct RangeNormalization {
    double scale = 1.0;
    double shift = 0.0;
};

/// (statistic - shift) / scale is the normalized statistic, with norming
/// constants at the deterministic n.
RangeNormalization range_normalization(const DistributionModel& model, const GosParams& params,
                                       RangeStatistic statistic);

struct RangeQuery {
    DistributionModel model = DistributionModel::normal();
    GosParams params;
    IndexLaw law = IndexLaw::unit_exponential();
    RangeStatistic statistic = RangeStatistic::range;
    double eta = 1.0;
    RangeRoute route = RangeRoute::published;
};

/// Query with eta filled in from eta_limit.
RangeQuery make_range_query(const DistributionModel& model, const GosParams& params, const IndexLaw& law,
                            RangeStatistic statistic, RangeRoute route = RangeRoute::published);

double range_limit_df(const RangeQuery& query, double r);
double midrange_limit_df(const RangeQuery& query, double v);
/// Dispatches on query.statistic.
double range_statistic_df(const RangeQuery& query, double t);

/// Normal parent, m = 0, k = 1, geometric index: f1 / 2/3 / f2.
double normal_range_closed_form(double r);
/// int_0^inf y^2 / (y^2 + y + e^{-r})^2 dy by quadrature.
double normal_range_integral(double r);
/// 1 - int_0^inf dy / (y (e^{2v} + 1) + 1)^2 by quadrature.
double normal_midrange_integral(double v);
/// (1 + e^{-2v})^{-1}
double normal_midrange_closed_form(double v);

}  // namespace gosx
