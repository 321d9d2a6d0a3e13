#pragma once

// Linear correlation coefficients J(A, B) = cov(A, B) / sqrt(var A var B)
// between the optical and atomic modes after each Raman process.

#include <cmath>

#include "su11/core_model.hpp"
#include "su11/moments.hpp"

namespace su11 {

inline constexpr double kLccSlack = 1e-9;

struct LccReport {
    double j_value = 0.0;
    double cov = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
};

/// cov / sqrt(var_a var_b), clamped to [-1, 1] when within 1e-9 outside.
inline double lcc(double cov, double var_a, double var_b) {
    if (!(var_a > 0.0) || !(var_b > 0.0)) {
        throw DomainError("degenerate marginal");
    }
    const double j = cov / std::sqrt(var_a * var_b);
    if (std::abs(j) > 1.0 + kLccSlack) {
        throw DomainError("correlation coefficient outside [-1, 1]");
    }
    return std::clamp(j, -1.0, 1.0);
}

struct Rp1Correlations {
    double jx1;
    double jy1;
    double jn1;
};

/// Correlations between a1 and b1 for |alpha> (x) |0> input.
inline Rp1Correlations j_rp1(double g, double theta1, double alpha_mag) {
    if (!(g >= 0.0)) {
        throw DomainError("Raman gain must be non-negative");
    }
    const double jx = std::cos(theta1) * std::tanh(2.0 * g);
    if (g == 0.0) {
        // no scattering, no correlation
        return {jx, -jx, 0.0};
    }
    const double n = alpha_mag * alpha_mag;
    const double coth = 1.0 / std::tanh(2.0 * g);
    const double jn = (1.0 + 2.0 * n) / std::sqrt(4.0 * coth * coth * (n + n * n) + 1.0);
    return {jx, -jx, jn};
}

namespace detail {

inline LccReport make_report(double cov, double var_a, double var_b) {
    // A marginal in a number eigenstate (e.g. b2 returned exactly to vacuum)
    // has zero covariance with everything.
    if (var_a == 0.0 || var_b == 0.0) {
        return {0.0, cov, var_a, var_b};
    }
    return {lcc(cov, var_a, var_b), cov, var_a, var_b};
}

} // namespace detail

inline LccReport j_x2(const InterferometerParams& p) {
    const ModeExpansion e = compose_expansion(p);
    return detail::make_report(cov_quad(p), quad_variance_a2(e), quad_variance_b2(e));
}

inline LccReport j_n2(const InterferometerParams& p) {
    return detail::make_report(cov_number(p), number_stats_a2(p).variance,
                               number_stats_b2(p).variance);
}

/// Lossless balanced J_x2 = 2 Re[V U e^{-i phi}] / (|U|^2 + |V|^2) with
/// U = cosh^2 g e^{i phi} - sinh^2 g and V = sinh(2g)(e^{i phi} - 1) e^{i theta1} / 2.
inline double j_x2_ideal(double g, double theta1, double phi) {
    const cplx ephi = unit_phase(phi);
    const double c2 = std::cosh(g) * std::cosh(g);
    const double s2 = std::sinh(g) * std::sinh(g);
    const cplx U = c2 * ephi - s2;
    const cplx V = 0.5 * std::sinh(2.0 * g) * (ephi - 1.0) * unit_phase(theta1);
    return 2.0 * std::real(V * U * std::conj(ephi)) / (std::norm(U) + std::norm(V));
}

/// Lossless balanced J_n2 expressed through 1 + sinh^2(2g)(1 - cos phi).
inline double j_n2_ideal(double g, double alpha_mag, double phi) {
    const double n = alpha_mag * alpha_mag;
    const double sinh2g = std::sinh(2.0 * g);
    const double w = 1.0 + sinh2g * sinh2g * (1.0 - std::cos(phi));
    const double denom = w * w - 1.0;
    if (denom == 0.0) {
        return 0.0;
    }
    return (1.0 + 2.0 * n) / std::sqrt(4.0 * w * w * (n + n * n) / denom + 1.0);
}

} // namespace su11
