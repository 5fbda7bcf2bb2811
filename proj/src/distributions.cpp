#include "gosx/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "gosx/errors.hpp"
#include "gosx/specfun.hpp"

namespace gosx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Acklam's rational approximation followed by two Halley steps, p <= 0.5.
double std_normal_lower_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    if (p <= 0.0) return -kInf;
    double x;
    if (p < 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double e = std_normal_cdf(x) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double std_normal_quantile(double p) {
    if (p <= 0.5) return std_normal_lower_quantile(p);
    return -std_normal_lower_quantile(1.0 - p);
}

void require_probability(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(what) + ": probability must lie in (0, 1)");
    }
}

// Solve target(x) = value on [lo, hi] where target is monotone increasing.
// Uses geometric midpoints when the bracket spans orders of magnitude.
template <class F>
double bisect_increasing(const F& target, double value, double lo, double hi) {
    for (int i = 0; i < 400; ++i) {
        double mid = 0.5 * (lo + hi);
        if (lo > 0.0 && hi / lo > 4.0) mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi) || hi - lo <= 4e-16 * hi) break;
        if (target(mid) < value) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

struct FamilyInfo {
    Family family;
    const char* name;
    std::vector<const char*> params;
};

const std::vector<FamilyInfo>& family_table() {
    static const std::vector<FamilyInfo> table = {
        {Family::cauchy, "cauchy", {}},
        {Family::pareto, "pareto", {"sigma"}},
        {Family::uniform, "uniform", {"theta"}},
        {Family::beta, "beta", {"alpha", "beta"}},
        {Family::power, "power", {"alpha"}},
        {Family::normal, "normal", {}},
        {Family::logistic, "logistic", {}},
        {Family::laplace, "laplace", {}},
        {Family::lognormal, "lognormal", {}},
        {Family::exponential, "exponential", {"sigma"}},
        {Family::rayleigh, "rayleigh", {"sigma"}},
    };
    return table;
}

const FamilyInfo& info(Family family) {
    for (const auto& entry : family_table()) {
        if (entry.family == family) return entry;
    }
    throw std::logic_error("unknown family");
}

std::string format_real(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

}  // namespace

std::string to_string(Family family) { return info(family).name; }

DistributionModel::DistributionModel(Family family, double p0, double p1)
    : family_(family), params_{p0, p1} {
    const auto& fi = info(family);
    for (std::size_t i = 0; i < fi.params.size(); ++i) {
        if (!(params_[i] > 0.0) || std::isinf(params_[i])) {
            throw DomainError(std::string(fi.name) + ": parameter '" + fi.params[i] +
                              "' must be a positive finite real");
        }
    }
}

DistributionModel DistributionModel::cauchy() { return {Family::cauchy, 0, 0}; }
DistributionModel DistributionModel::pareto(double sigma) { return {Family::pareto, sigma, 0}; }
DistributionModel DistributionModel::uniform(double theta) { return {Family::uniform, theta, 0}; }
DistributionModel DistributionModel::beta(double alpha, double beta) {
    return {Family::beta, alpha, beta};
}
DistributionModel DistributionModel::power(double alpha) { return {Family::power, alpha, 0}; }
DistributionModel DistributionModel::normal() { return {Family::normal, 0, 0}; }
DistributionModel DistributionModel::logistic() { return {Family::logistic, 0, 0}; }
DistributionModel DistributionModel::laplace() { return {Family::laplace, 0, 0}; }
DistributionModel DistributionModel::lognormal() { return {Family::lognormal, 0, 0}; }
DistributionModel DistributionModel::exponential(double sigma) {
    return {Family::exponential, sigma, 0};
}
DistributionModel DistributionModel::rayleigh(double sigma) { return {Family::rayleigh, sigma, 0}; }

std::vector<std::string> DistributionModel::family_names() {
    std::vector<std::string> names;
    for (const auto& entry : family_table()) {
        std::string name = entry.name;
        if (!entry.params.empty()) {
            name += "(";
            for (std::size_t i = 0; i < entry.params.size(); ++i) {
                if (i) name += ",";
                name += std::string(entry.params[i]) + "=...";
            }
            name += ")";
        }
        names.push_back(name);
    }
    return names;
}

DistributionModel DistributionModel::parse(std::string_view spec) {
    auto fail = [&](const std::string& why) -> DomainError {
        std::string msg = "invalid distribution '" + std::string(spec) + "': " + why +
                          "; valid families:";
        for (const auto& name : family_names()) msg += " " + name;
        return DomainError(msg);
    };
    const std::string text = trim(spec);
    const auto open = text.find('(');
    const std::string name = lower(trim(text.substr(0, open)));
    const FamilyInfo* fi = nullptr;
    for (const auto& entry : family_table()) {
        if (name == entry.name) fi = &entry;
    }
    if (fi == nullptr) throw fail("unknown family '" + name + "'");

    std::map<std::string, double> values;
    if (open != std::string::npos) {
        if (text.back() != ')') throw fail("missing ')'");
        const std::string body = text.substr(open + 1, text.size() - open - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (trim(item).empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw fail("expected key=value, got '" + trim(item) + "'");
            const std::string key = lower(trim(item.substr(0, eq)));
            const bool known = std::any_of(fi->params.begin(), fi->params.end(),
                                           [&](const char* p) { return key == p; });
            if (!known) throw fail("unknown parameter '" + key + "' for " + fi->name);
            try {
                values[key] = parse_real(trim(item.substr(eq + 1)));
            } catch (const DomainError& e) {
                throw fail(e.what());
            }
        }
    }
    std::array<double, 2> p{1.0, 1.0};
    for (std::size_t i = 0; i < fi->params.size(); ++i) {
        if (auto it = values.find(fi->params[i]); it != values.end()) p[i] = it->second;
    }
    return DistributionModel(fi->family, p[0], p[1]);
}

std::string DistributionModel::spec() const {
    const auto& fi = info(family_);
    std::string out = fi.name;
    if (fi.params.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < fi.params.size(); ++i) {
        if (i) out += ",";
        out += std::string(fi.params[i]) + "=" + format_real(params_[i]);
    }
    return out + ")";
}

double DistributionModel::lower_endpoint() const {
    switch (family_) {
        case Family::pareto: return 1.0;
        case Family::uniform: return -params_[0];
        case Family::beta:
        case Family::power:
        case Family::lognormal:
        case Family::exponential:
        case Family::rayleigh: return 0.0;
        default: return -kInf;
    }
}

double DistributionModel::upper_endpoint() const {
    switch (family_) {
        case Family::uniform: return params_[0];
        case Family::beta:
        case Family::power: return 1.0;
        default: return kInf;
    }
}

double DistributionModel::cdf(double x) const {
    if (std::isnan(x)) throw DomainError("cdf: NaN argument");
    if (x <= lower_endpoint()) return 0.0;
    if (x >= upper_endpoint()) return 1.0;
    switch (family_) {
        case Family::cauchy: return x < 0.0 ? survival(-x) : 0.5 + std::atan(x) / std::numbers::pi;
        case Family::pareto: return -std::expm1(-params_[0] * std::log(x));
        case Family::uniform: return (x + params_[0]) / (2.0 * params_[0]);
        case Family::beta: return specfun::reg_inc_beta(x, params_[0], params_[1]);
        case Family::power: return std::pow(x, params_[0]);
        case Family::normal: return std_normal_cdf(x);
        case Family::logistic: return 1.0 / (1.0 + std::exp(-x));
        case Family::laplace: return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
        case Family::lognormal: return std_normal_cdf(std::log(x));
        case Family::exponential: return -std::expm1(-x / params_[0]);
        case Family::rayleigh: {
            const double t = x / params_[0];
            return -std::expm1(-0.5 * t * t);
        }
    }
    return 0.0;
}

double DistributionModel::survival(double x) const {
    if (std::isnan(x)) throw DomainError("survival: NaN argument");
    if (x <= lower_endpoint()) return 1.0;
    if (x >= upper_endpoint()) return 0.0;
    switch (family_) {
        case Family::cauchy:
            return x > 0.0 ? std::atan(1.0 / x) / std::numbers::pi : 0.5 - std::atan(x) / std::numbers::pi;
        case Family::pareto: return std::pow(x, -params_[0]);
        case Family::uniform: return (params_[0] - x) / (2.0 * params_[0]);
        case Family::beta: return specfun::reg_inc_beta(1.0 - x, params_[1], params_[0]);
        case Family::power: return -std::expm1(params_[0] * std::log(x));
        case Family::normal: return std_normal_cdf(-x);
        case Family::logistic: return 1.0 / (1.0 + std::exp(x));
        case Family::laplace: return x < 0.0 ? 1.0 - 0.5 * std::exp(x) : 0.5 * std::exp(-x);
        case Family::lognormal: return std_normal_cdf(-std::log(x));
        case Family::exponential: return std::exp(-x / params_[0]);
        case Family::rayleigh: {
            const double t = x / params_[0];
            return std::exp(-0.5 * t * t);
        }
    }
    return 0.0;
}

double DistributionModel::quantile(double p) const {
    require_probability(p, "quantile");
    switch (family_) {
        case Family::cauchy:
            return p < 0.5 ? -1.0 / std::tan(std::numbers::pi * p)
                           : std::tan(std::numbers::pi * (p - 0.5));
        case Family::pareto: return std::exp(-std::log1p(-p) / params_[0]);
        case Family::uniform: return params_[0] * (2.0 * p - 1.0);
        case Family::beta:
            if (p > 0.5) return inverse_survival(1.0 - p);
            return bisect_increasing([&](double x) { return cdf(x); }, p, 0.0, 1.0);
        case Family::power: return std::pow(p, 1.0 / params_[0]);
        case Family::normal: return std_normal_quantile(p);
        case Family::logistic: return std::log(p) - std::log1p(-p);
        case Family::laplace: return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
        case Family::lognormal: return std::exp(std_normal_quantile(p));
        case Family::exponential: return -params_[0] * std::log1p(-p);
        case Family::rayleigh: return params_[0] * std::sqrt(-2.0 * std::log1p(-p));
    }
    return 0.0;
}

double DistributionModel::inverse_survival(double q) const {
    require_probability(q, "inverse_survival");
    switch (family_) {
        case Family::cauchy:
            return q < 0.5 ? 1.0 / std::tan(std::numbers::pi * q)
                           : std::tan(std::numbers::pi * (0.5 - q));
        case Family::pareto: return std::pow(q, -1.0 / params_[0]);
        case Family::uniform: return params_[0] * (1.0 - 2.0 * q);
        case Family::beta: {
            if (q > 0.5) return quantile(1.0 - q);
            // Solve on t = 1 - x so small q keeps full relative precision.
            const double t = bisect_increasing(
                [&](double u) { return specfun::reg_inc_beta(u, params_[1], params_[0]); }, q, 0.0,
                1.0);
            return 1.0 - t;
        }
        case Family::power: return std::exp(std::log1p(-q) / params_[0]);
        case Family::normal: return -std_normal_quantile(q);
        case Family::logistic: return std::log1p(-q) - std::log(q);
        case Family::laplace: return q < 0.5 ? -std::log(2.0 * q) : std::log(2.0 * (1.0 - q));
        case Family::lognormal: return std::exp(-std_normal_quantile(q));
        case Family::exponential: return -params_[0] * std::log(q);
        case Family::rayleigh: return params_[0] * std::sqrt(-2.0 * std::log(q));
    }
    return 0.0;
}

double DistributionModel::from_log_survival(double log_q) const {
    if (log_q > -std::numbers::ln2) {
        const double p = -std::expm1(log_q);
        if (p <= 0.0) return lower_endpoint();
        return quantile(p);
    }
    const double q = std::exp(log_q);
    if (q <= 0.0) return upper_endpoint();
    return inverse_survival(q);
}

TailTransform DistributionModel::attraction(ExtremeSide side) const {
    const bool up = side == ExtremeSide::upper;
    switch (family_) {
        case Family::cauchy: return {side, TailType::frechet, 1.0};
        case Family::pareto:
            return up ? TailTransform{side, TailType::frechet, params_[0]}
                      : TailTransform{side, TailType::weibull, 1.0};
        case Family::uniform: return {side, TailType::weibull, 1.0};
        case Family::beta: return {side, TailType::weibull, up ? params_[1] : params_[0]};
        case Family::power: return {side, TailType::weibull, up ? 1.0 : params_[0]};
        case Family::normal:
        case Family::logistic:
        case Family::laplace:
        case Family::lognormal: return {side, TailType::gumbel, 1.0};
        case Family::exponential:
            return up ? TailTransform{side, TailType::gumbel, 1.0}
                      : TailTransform{side, TailType::weibull, 1.0};
        case Family::rayleigh:
            return up ? TailTransform{side, TailType::gumbel, 1.0}
                      : TailTransform{side, TailType::weibull, 2.0};
    }
    throw NoAttractionError("no attraction type for " + to_string(family_));
}

NormingConstants norming_constants(const DistributionModel& model, const GosParams& params) {
    params.validate();
    const double big_n = params.big_n();
    const double mp1 = params.m + 1.0;
    NormingConstants nc;

    if (model.family() == Family::normal && params.m == 0.0) {
        const double s = std::sqrt(2.0 * std::log(big_n));
        nc.a = 1.0 / s;
        nc.b = s - (std::log(std::log(big_n)) + std::log(4.0 * std::numbers::pi)) / (2.0 * s);
        nc.c = nc.a;
        nc.d = -nc.b;
        return nc;
    }

    // Upper side: 1 - F(b) = N^{-1/(m+1)}.
    const double log_qu = -std::log(big_n) / mp1;
    const TailTransform up = model.attraction(ExtremeSide::upper);
    switch (up.type) {
        case TailType::gumbel:
            nc.b = model.from_log_survival(log_qu);
            nc.a = model.from_log_survival(log_qu - 1.0) - nc.b;
            break;
        case TailType::frechet:
            nc.b = 0.0;
            nc.a = model.from_log_survival(log_qu);
            break;
        case TailType::weibull:
            nc.b = model.upper_endpoint();
            nc.a = nc.b - model.from_log_survival(log_qu);
            break;
    }

    // Lower side: L_m(d) = 1/N, i.e. 1 - F(d) = (1 - 1/N)^{1/(m+1)}.
    auto lower_point = [&](double target) {
        const double log_q = std::log1p(-target) / mp1;
        return model.from_log_survival(log_q);
    };
    const TailTransform lo = model.attraction(ExtremeSide::lower);
    switch (lo.type) {
        case TailType::gumbel:
            nc.d = lower_point(1.0 / big_n);
            nc.c = nc.d - lower_point(1.0 / (std::numbers::e * big_n));
            break;
        case TailType::frechet:
            nc.d = 0.0;
            nc.c = -lower_point(1.0 / big_n);
            break;
        case TailType::weibull:
            nc.d = model.lower_endpoint();
            nc.c = lower_point(1.0 / big_n) - nc.d;
            break;
    }
    if (!(nc.a > 0.0) || !(nc.c > 0.0)) {
        throw NoAttractionError("norming constants degenerate for " + model.spec() +
                                " at n=" + std::to_string(params.n));
    }
    return nc;
}

double parse_real(std::string_view text) {
    std::string s = lower(trim(text));
    if (s.empty()) throw DomainError("empty number");
    double sign = 1.0;
    if (s[0] == '-' || s[0] == '+') {
        if (s[0] == '-') sign = -1.0;
        s.erase(0, 1);
    }
    auto plain = [&](const std::string& t) {
        if (t == "pi") return std::numbers::pi;
        if (t == "e") return std::numbers::e;
        if (t == "inf" || t == "infinity") return kInf;
        double v = 0.0;
        const char* first = t.data();
        const char* last = t.data() + t.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) throw DomainError("cannot parse number '" + t + "'");
        return v;
    };
    auto with_prefix = [&](const char* prefix) {
        return s.rfind(prefix, 0) == 0 ? std::optional<std::string>(s.substr(std::char_traits<char>::length(prefix)))
                                       : std::nullopt;
    };
    if (auto rest = with_prefix("ln")) return sign * std::log(plain(*rest));
    if (auto rest = with_prefix("sqrt")) return sign * std::sqrt(plain(*rest));
    if (auto rest = with_prefix("exp")) return sign * std::exp(plain(*rest));
    return sign * plain(s);
}

}  // namespace gosx
