#pragma once

// Closed-form first and second moments of the output modes for a coherent
// seed in a0 and vacuum in b0, V and the Langevin reservoir.
//
// Every output operator is linear in the inputs, so a2 and b2 are displaced
// Gaussian modes with
//   <a2> = U1 alpha,                 <da^dag da> = |V1|^2 + lang |v2|^2,
//   <b2> = phase_b V2 conj(alpha),   <db^dag db> = |V2|^2 + R |v2|^2,
// and no single-mode squeezing (<da da> = <db db> = 0).

#include <cmath>
#include <complex>

#include "su11/core_model.hpp"
#include "su11/observables.hpp"

namespace su11 {

namespace detail {

struct OutputMeans {
    cplx a2;
    cplx b2;
    cplx da2; // d<a2>/dphi
    cplx db2; // d<b2>/dphi
};

inline OutputMeans output_means(const InterferometerParams& p, const ModeExpansion& e) {
    const ExpansionSlope s = expansion_slope(p);
    const cplx alpha = p.input.amplitude();
    const cplx alpha_c = std::conj(alpha);
    const cplx i(0.0, 1.0);
    return {e.U1 * alpha, e.phase_b * e.V2 * alpha_c, s.dU1 * alpha,
            e.phase_b * (s.dV2 - i * e.V2) * alpha_c};
}

} // namespace detail

/// Variance of either quadrature of a2:
/// (|U1|^2 + |V1|^2 + R|u2|^2 + (1 - e^{-2 gamma_tau})|v2|^2) / 4.
inline double quad_variance_a2(const ModeExpansion& e) {
    return clamp_variance(0.25 * (std::norm(e.U1) + std::norm(e.V1) + std::norm(e.env_a_vac) +
                                  e.lang_comm * std::norm(e.env_a_lang)));
}

/// Variance of either quadrature of b2.
inline double quad_variance_b2(const ModeExpansion& e) {
    return clamp_variance(0.25 * (std::norm(e.U2) + std::norm(e.V2) + std::norm(e.env_b_vac) +
                                  e.lang_comm * std::norm(e.env_b_lang)));
}

inline ObservableStats quad_stats_a2(const InterferometerParams& p) {
    const ModeExpansion e = compose_expansion(p);
    const auto m = detail::output_means(p, e);
    return {m.a2.real(), quad_variance_a2(e), m.da2.real()};
}

inline ObservableStats number_stats_a2(const InterferometerParams& p) {
    const ModeExpansion e = compose_expansion(p);
    const ExpansionSlope s = expansion_slope(p);
    const double n = p.input.n_alpha();
    const double u1_sq = std::norm(e.U1);
    const double v1_sq = std::norm(e.V1);
    const double lang = e.lang_comm;
    const double R = e.R;
    const double u2_sq = std::norm(e.u2);
    const double v2_sq = std::norm(e.v2);

    const double mean = u1_sq * n + v1_sq + lang * v2_sq;
    const double variance = u1_sq * u1_sq * n + u1_sq * v1_sq * (1.0 + n) + R * v1_sq * u2_sq +
                            R * u1_sq * u2_sq * n + u1_sq * v2_sq * lang * n +
                            (u1_sq * v2_sq + R * u2_sq * v2_sq) * lang;
    const double slope = 2.0 * n * std::real(std::conj(e.U1) * s.dU1) +
                         2.0 * std::real(std::conj(e.V1) * s.dV1);
    return {mean, clamp_variance(variance), slope};
}

inline ObservableStats number_stats_b2(const InterferometerParams& p) {
    const ModeExpansion e = compose_expansion(p);
    const ExpansionSlope s = expansion_slope(p);
    const double n = p.input.n_alpha();
    const double u2c_sq = std::norm(e.U2);
    const double v2c_sq = std::norm(e.V2);
    const double lang = e.lang_comm;
    const double R = e.R;
    const double u2_sq = std::norm(e.u2);
    const double v2_sq = std::norm(e.v2);

    const double mean = v2c_sq * (n + 1.0) + R * v2_sq;
    const double variance = v2c_sq * v2c_sq * n + u2c_sq * v2c_sq * (1.0 + n) + R * u2c_sq * v2_sq +
                            R * v2c_sq * v2_sq * n + v2c_sq * u2_sq * lang * n +
                            (v2c_sq * u2_sq + R * u2_sq * v2_sq) * lang;
    const double slope = 2.0 * (n + 1.0) * std::real(std::conj(e.V2) * s.dV2);
    return {mean, clamp_variance(variance), slope};
}

/// Any observable; quadrature means are Re/Im of the output amplitude.
inline ObservableStats observable_stats(const InterferometerParams& p, Observable which) {
    switch (which) {
    case Observable::Num_a2:
        return number_stats_a2(p);
    case Observable::Num_b2:
        return number_stats_b2(p);
    default:
        break;
    }
    const ModeExpansion e = compose_expansion(p);
    const auto m = detail::output_means(p, e);
    switch (which) {
    case Observable::QuadX_a2:
        return {m.a2.real(), quad_variance_a2(e), m.da2.real()};
    case Observable::QuadY_a2:
        return {m.a2.imag(), quad_variance_a2(e), m.da2.imag()};
    case Observable::QuadX_b2:
        return {m.b2.real(), quad_variance_b2(e), m.db2.real()};
    case Observable::QuadY_b2:
        return {m.b2.imag(), quad_variance_b2(e), m.db2.imag()};
    default:
        throw DomainError("unknown observable");
    }
}

/// cov(x_a2, x_b2) = Re[e^{-i phi}(V1 U2 + U1 V2) + u2 v2 (R + 1 - e^{-2 gamma_tau})] / 4
inline double cov_quad(const InterferometerParams& p) {
    const ModeExpansion e = compose_expansion(p);
    const cplx term = e.phase_b * (e.V1 * e.U2 + e.U1 * e.V2) + e.u2 * e.v2 * (e.R + e.lang_comm);
    return 0.25 * term.real();
}

/// cov(n_a2, n_b2), symmetrized.
inline double cov_number(const InterferometerParams& p) {
    const ModeExpansion e = compose_expansion(p);
    const double n = p.input.n_alpha();
    const cplx ephi = std::conj(e.phase_b);
    const cplx uv2 = e.u2 * e.v2;
    const cplx uv2_c = std::conj(uv2);

    const double t1 = std::norm(e.U1 * e.V2) * n;
    const double t2 = (1.0 + n) * std::real(std::conj(e.U1) * e.U2 * e.V1 * std::conj(e.V2));
    const double t3 = e.lang_comm * (e.R * std::norm(uv2) +
                                     (1.0 + n) * std::real(ephi * std::conj(e.U1) * std::conj(e.V2) * uv2));
    const double t4 = e.R * std::real(e.phase_b * e.U2 * e.V1 * uv2_c);
    const double t5 = e.R * n * std::real(e.phase_b * e.U1 * e.V2 * uv2_c);
    return t1 + t2 + t3 + t4 + t5;
}

inline double covariance(const InterferometerParams& p, CovPair pair) {
    return pair == CovPair::Quadrature ? cov_quad(p) : cov_number(p);
}

} // namespace su11
