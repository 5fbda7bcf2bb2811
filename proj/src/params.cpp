#include <cmath>
#include <sstream>

#include "gosx/errors.hpp"
#include "gosx/params.hpp"
#include "gosx/tail.hpp"

namespace gosx {

void GosParams::validate() const {
    if (!(m + 1.0 > 0.0) || !std::isfinite(m)) throw DomainError("GosParams: m must exceed -1");
    if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("GosParams: k must be positive");
    if (n < 2) throw DomainError("GosParams: n must be at least 2");
}

std::string GosParams::describe() const {
    std::ostringstream os;
    os.precision(15);
    os << "m=" << m << " k=" << k << " n=" << n;
    return os.str();
}

GosParams make_params(double m, double k, int n) {
    GosParams p{m, k, n};
    p.validate();
    return p;
}

void TailTransform::validate() const {
    if (type != TailType::gumbel && !(alpha > 0.0 && std::isfinite(alpha))) {
        throw DomainError("TailTransform: alpha must be positive");
    }
}

std::string to_string(ExtremeSide side) { return side == ExtremeSide::upper ? "upper" : "lower"; }

std::string to_string(TailType type) {
    switch (type) {
        case TailType::frechet: return "frechet";
        case TailType::weibull: return "weibull";
        case TailType::gumbel: return "gumbel";
    }
    return "?";
}

std::string TailTransform::describe() const {
    std::ostringstream os;
    os.precision(15);
    os << (side == ExtremeSide::lower ? "min-" : "") << to_string(type);
    if (type != TailType::gumbel) os << "(" << alpha << ")";
    return os.str();
}

}  // namespace gosx
