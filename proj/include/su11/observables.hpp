#pragma once

#include <algorithm>
#include <array>
#include <string_view>

#include "su11/error.hpp"

namespace su11 {

/// Measured output observables. Quadratures are x = (a + a^dag)/2 and
/// y = (a - a^dag)/2i, so the vacuum variance is 1/4.
enum class Observable { QuadX_a2, QuadY_a2, QuadX_b2, QuadY_b2, Num_a2, Num_b2 };

inline constexpr std::array<Observable, 6> kAllObservables = {
    Observable::QuadX_a2, Observable::QuadY_a2, Observable::QuadX_b2,
    Observable::QuadY_b2, Observable::Num_a2,   Observable::Num_b2};

/// Short token used in metric names and CSV headers ("x_a2", "n_b2", ...).
inline constexpr std::string_view observable_token(Observable o) {
    switch (o) {
    case Observable::QuadX_a2:
        return "x_a2";
    case Observable::QuadY_a2:
        return "y_a2";
    case Observable::QuadX_b2:
        return "x_b2";
    case Observable::QuadY_b2:
        return "y_b2";
    case Observable::Num_a2:
        return "n_a2";
    case Observable::Num_b2:
        return "n_b2";
    }
    return "?";
}

/// Pairs whose intermode covariance is reported.
enum class CovPair { Quadrature, Number };

struct ObservableStats {
    double mean = 0.0;
    double variance = 0.0;
    /// d<O>/dphi
    double slope = 0.0;
};

inline constexpr double kVarianceRoundoff = 1e-12;

/// Clamps round-off below zero; anything more negative signals a formula error.
inline double clamp_variance(double v) {
    if (v < -kVarianceRoundoff) {
        throw DomainError("negative variance beyond round-off");
    }
    return std::max(v, 0.0);
}

} // namespace su11
