#pragma once

// Phase estimation by error propagation for homodyne (x_a2) and intensity
// (n_a2) detection, with the standard-quantum-limit comparison.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "su11/core_model.hpp"
#include "su11/moments.hpp"

namespace su11 {

enum class DetectionScheme { Homodyne, Intensity };

inline constexpr Observable detected_observable(DetectionScheme s) {
    return s == DetectionScheme::Homodyne ? Observable::QuadX_a2 : Observable::Num_a2;
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct SensitivityReport {
    /// +infinity where the signal slope vanishes.
    double delta_phi = kInfinity;
    double snr = 0.0;
    double n_ph = 0.0;
    double sql = 0.0;
    bool beats_sql = false;
};

/// Error propagation: sqrt(var) / |d<O>/dphi|.
inline double sensitivity(const ObservableStats& stats) {
    const double slope = std::abs(stats.slope);
    if (slope < 1e-300) {
        return kInfinity;
    }
    return std::sqrt(clamp_variance(stats.variance)) / slope;
}

/// <O> / sqrt(var), signed.
inline double snr(const ObservableStats& stats) {
    if (!(stats.variance > 0.0)) {
        throw DomainError("degenerate noise");
    }
    return stats.mean / std::sqrt(stats.variance);
}

/// Photons in the phase-carrying arm after RP1: N_alpha cosh^2 g1 + sinh^2 g1.
inline double phase_sensing_number(const InterferometerParams& p) {
    const double c = std::cosh(p.rp1.g());
    const double s = std::sinh(p.rp1.g());
    return p.input.n_alpha() * c * c + s * s;
}

namespace detail {

inline SensitivityReport make_sensitivity_report(const InterferometerParams& p,
                                                 const ObservableStats& stats) {
    SensitivityReport r;
    r.delta_phi = sensitivity(stats);
    r.snr = snr(stats);
    r.n_ph = phase_sensing_number(p);
    r.sql = r.n_ph > 0.0 ? 1.0 / std::sqrt(r.n_ph) : kInfinity;
    r.beats_sql = r.delta_phi < r.sql;
    return r;
}

} // namespace detail

inline SensitivityReport hd_report(const InterferometerParams& p) {
    return detail::make_sensitivity_report(p, quad_stats_a2(p));
}

inline SensitivityReport id_report(const InterferometerParams& p) {
    return detail::make_sensitivity_report(p, number_stats_a2(p));
}

inline SensitivityReport report(DetectionScheme scheme, const InterferometerParams& p) {
    return scheme == DetectionScheme::Homodyne ? hd_report(p) : id_report(p);
}

/// Delta phi of the scheme's observable; unlike the reports this never needs
/// a non-zero variance.
inline double scheme_sensitivity(DetectionScheme scheme, const InterferometerParams& p) {
    return sensitivity(scheme == DetectionScheme::Homodyne ? quad_stats_a2(p) : number_stats_a2(p));
}

struct PhaseOptimum {
    double phi = 0.0;
    double delta_phi = kInfinity;
};

inline constexpr int kOptimizerGridPoints = 4001;
inline constexpr double kOptimizerTolerance = 1e-6;

/// Minimizes delta_phi(phi) over [lo, hi] (params.phi is ignored): dense grid
/// scan, then golden-section search on the bracketing grid cells.
inline PhaseOptimum optimize_phase(DetectionScheme scheme, const InterferometerParams& params,
                                   double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("optimize_phase needs a finite bracket with lo < hi");
    }
    const auto objective = [&](double phi) {
        return scheme_sensitivity(scheme, params.with_phi(phi));
    };

    const int n = kOptimizerGridPoints;
    const double step = (hi - lo) / (n - 1);
    int best = -1;
    double best_value = kInfinity;
    for (int k = 0; k < n; ++k) {
        const double value = objective(lo + step * k);
        if (value < best_value) {
            best_value = value;
            best = k;
        }
    }
    if (best < 0) {
        throw DomainError("no finite sensitivity in bracket");
    }

    double a = lo + step * std::max(best - 1, 0);
    double b = lo + step * std::min(best + 1, n - 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (b - a > kOptimizerTolerance) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        }
    }

    PhaseOptimum out{lo + step * best, best_value};
    for (double candidate : {x1, x2, 0.5 * (a + b)}) {
        const double value = objective(candidate);
        if (value < out.delta_phi) {
            out = {candidate, value};
        }
    }
    return out;
}

} // namespace su11
