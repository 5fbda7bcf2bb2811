#include "gosx/random_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gosx/distributions.hpp"
#include "gosx/errors.hpp"
#include "gosx/specfun.hpp"

namespace gosx {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_real(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

void require_regime(const MixtureQuery& q, Regime regime) {
    if (q.ranks.regime != regime) {
        throw RegimeError("mixture query has regime " + to_string(q.ranks.regime) + ", expected " +
                          to_string(regime));
    }
    q.params.validate();
    q.ranks.validate();
}

// z * t with 0 * inf = 0 (z = 0 carries no mass for admissible H).
double scaled(double z, double t) { return z == 0.0 ? 0.0 : z * t; }

}  // namespace

IndexLaw IndexLaw::degenerate(double c) {
    if (!(c > 0.0) || std::isinf(c)) throw DomainError("degenerate index law needs a finite c > 0");
    return {Kind::degenerate, c, {}};
}

IndexLaw IndexLaw::unit_exponential() { return {Kind::unit_exponential, 0.0, {}}; }

IndexLaw IndexLaw::tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw DomainError("tabulated index law needs at least two knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto [z, h] = knots[i];
        if (!std::isfinite(z) || z < 0.0) throw DomainError("tabulated H: z must be finite and >= 0");
        if (!(h >= 0.0 && h <= 1.0)) throw DomainError("tabulated H: values must lie in [0, 1]");
        if (i > 0) {
            if (!(z > knots[i - 1].first)) throw DomainError("tabulated H: z must be strictly increasing");
            if (h < knots[i - 1].second) throw DomainError("tabulated H: values must be nondecreasing");
        }
    }
    if (knots.front().second != 0.0) throw DomainError("tabulated H: first value must be 0 (H(+0) = 0)");
    if (std::fabs(knots.back().second - 1.0) > 1e-12) throw DomainError("tabulated H: last value must be 1");
    knots.back().second = 1.0;
    return {Kind::tabulated, 0.0, std::move(knots)};
}

IndexLaw IndexLaw::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open index-law table '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DomainError("index-law table '" + path + "' is empty");
    std::vector<std::pair<double, double>> knots;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw DomainError(path + ":" + std::to_string(lineno) + ": expected two columns z,H");
        }
        try {
            knots.emplace_back(parse_real(trim(line.substr(0, comma))), parse_real(trim(line.substr(comma + 1))));
        } catch (const DomainError& e) {
            throw DomainError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return tabulated(std::move(knots));
}

IndexLaw IndexLaw::parse(const std::string& spec) {
    const std::string s = trim(spec);
    if (s == "exponential" || s == "unit_exponential" || s == "geometric") return unit_exponential();
    if (s.rfind("degenerate", 0) == 0) {
        const auto colon = s.find(':');
        return degenerate(colon == std::string::npos ? 1.0 : parse_real(s.substr(colon + 1)));
    }
    if (s.rfind("tabulated:", 0) == 0) return from_csv(s.substr(10));
    if (s.rfind("uniform:", 0) == 0) {
        const std::string rest = s.substr(8);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw DomainError("uniform index law needs uniform:a:b");
        const double a = parse_real(rest.substr(0, colon));
        const double b = parse_real(rest.substr(colon + 1));
        if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) throw DomainError("uniform index law needs 0 <= a < b < inf");
        if (a == 0.0) return tabulated({{0.0, 0.0}, {b, 1.0}});
        return tabulated({{0.0, 0.0}, {a, 0.0}, {b, 1.0}});
    }
    throw DomainError("unknown index law '" + spec +
                      "' (expected degenerate:c, exponential, uniform:a:b or tabulated:file.csv)");
}

std::string IndexLaw::describe() const {
    switch (kind_) {
        case Kind::degenerate: return "degenerate:" + format_real(point_);
        case Kind::unit_exponential: return "exponential";
        case Kind::tabulated: {
            std::string out = "tabulated[";
            for (std::size_t i = 0; i < knots_.size(); ++i) {
                if (i) out += ";";
                out += format_real(knots_[i].first) + "," + format_real(knots_[i].second);
            }
            return out + "]";
        }
    }
    return "?";
}

double IndexLaw::cdf(double z) const {
    if (std::isnan(z)) throw DomainError("h_cdf: z is NaN");
    if (z <= 0.0) return 0.0;
    switch (kind_) {
        case Kind::degenerate: return z >= point_ ? 1.0 : 0.0;
        case Kind::unit_exponential: return -std::expm1(-z);
        case Kind::tabulated: {
            if (z >= knots_.back().first) return 1.0;
            if (z <= knots_.front().first) return knots_.front().second;
            const auto it = std::upper_bound(knots_.begin(), knots_.end(), z,
                                             [](double v, const auto& k) { return v < k.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            return lo.second + (hi.second - lo.second) * (z - lo.first) / (hi.first - lo.first);
        }
    }
    return 0.0;
}

double h_cdf(const IndexLaw& law, double z) { return law.cdf(z); }

double mixture_uu(const MixtureQuery& q) {
    require_regime(q, Regime::upper_upper);
    const double m1 = q.params.m + 1.0;
    const double t1 = std::pow(q.point.first, m1);
    const double t2 = std::pow(q.point.second, m1);
    return q.law.integrate(
        [&](double z) { return omega_uu_powered(q.params, q.ranks.r, q.ranks.s, scaled(z, t1), scaled(z, t2)); });
}

double mixture_ll(const MixtureQuery& q) {
    require_regime(q, Regime::lower_lower);
    return q.law.integrate(
        [&](double z) { return omega_ll(q.ranks.r, q.ranks.s, scaled(z, q.point.first), scaled(z, q.point.second)); });
}

double mixture_lu(const MixtureQuery& q) {
    require_regime(q, Regime::lower_upper);
    return mixture_marginal(ExtremeSide::lower, q.params, q.ranks.r, q.point.first, q.law) *
           mixture_marginal(ExtremeSide::upper, q.params, q.ranks.s, q.point.second, q.law);
}

double mixture_lu_joint(const MixtureQuery& q) {
    require_regime(q, Regime::lower_upper);
    const double rs = q.params.effective_rank(q.ranks.s);
    const double t2 = std::pow(q.point.second, q.params.m + 1.0);
    return q.law.integrate([&](double z) {
        return specfun::reg_inc_gamma(q.ranks.r, scaled(z, q.point.first)) *
               specfun::reg_inc_gamma_upper(rs, scaled(z, t2));
    });
}

double mixture(const MixtureQuery& q) {
    switch (q.ranks.regime) {
        case Regime::upper_upper: return mixture_uu(q);
        case Regime::lower_lower: return mixture_ll(q);
        case Regime::lower_upper: return mixture_lu(q);
    }
    return 0.0;
}

double mixture_marginal(ExtremeSide side, const GosParams& params, int r, double value, const IndexLaw& law) {
    params.validate();
    if (r < 1) throw RegimeError("rank must be at least 1");
    if (!(value >= 0.0)) throw DomainError("mixture_marginal: value must lie in [0, +inf]");
    if (side == ExtremeSide::upper) {
        const double rr = params.effective_rank(r);
        const double t = std::pow(value, params.m + 1.0);
        return law.integrate([&](double z) { return specfun::reg_inc_gamma_upper(rr, scaled(z, t)); });
    }
    return law.integrate([&](double z) { return specfun::reg_inc_gamma(r, scaled(z, value)); });
}

}  // namespace gosx
