#pragma once

#include <string>

namespace gosx {

enum class ExtremeSide { upper, lower };

enum class TailType { frechet, weibull, gumbel };

/// Attraction-domain transform. Upper side yields kappa(x), lower side rho(x).
struct TailTransform {
    ExtremeSide side = ExtremeSide::upper;
    TailType type = TailType::gumbel;
    double alpha = 1.0;  // ignored for gumbel

    void validate() const;
    std::string describe() const;
};

std::string to_string(ExtremeSide side);
std::string to_string(TailType type);

}  // namespace gosx
