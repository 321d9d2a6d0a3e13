#pragma once

// Parameters of the lossy atom-light SU(1,1) interferometer and the exact
// Bogoliubov expansion of its output modes.
//
//   RP1 (g1, theta1) -> light arm: phase phi, beam-splitter loss T
//                    -> atom arm:  collisional damping exp(-gamma_tau) + Langevin noise
//   RP2 (g2, theta2) -> a2 (Stokes light), b2 (atomic excitation)

#include <cmath>
#include <complex>
#include <numbers>

#include "su11/error.hpp"

namespace su11 {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle to [0, 2pi).
inline double reduce_angle(double theta) {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r >= kTwoPi ? 0.0 : r;
}

/// exp(i*theta), exact at multiples of pi/2 so that balanced settings
/// (theta2 - theta1 = pi) produce exactly real products.
inline cplx unit_phase(double theta) {
    const double t = reduce_angle(theta);
    const double quarters = t / (kPi / 2.0);
    const double k = std::round(quarters);
    if (std::abs(quarters - k) < 1e-14) {
        switch (static_cast<int>(k) % 4) {
        case 0:
            return {1.0, 0.0};
        case 1:
            return {0.0, 1.0};
        case 2:
            return {-1.0, 0.0};
        default:
            return {0.0, -1.0};
        }
    }
    return std::polar(1.0, t);
}

/// One Raman amplification process: gain g = |eta A_P| t and pump phase theta.
class RamanGain {
  public:
    constexpr RamanGain() = default;

    RamanGain(double g, double theta) : g_(g), theta_(reduce_angle(theta)) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw DomainError("Raman gain must be finite and non-negative");
        }
        if (!std::isfinite(theta)) {
            throw DomainError("Raman pump phase must be finite");
        }
    }

    [[nodiscard]] double g() const noexcept { return g_; }
    [[nodiscard]] double theta() const noexcept { return theta_; }

    friend bool operator==(const RamanGain&, const RamanGain&) = default;

  private:
    double g_ = 0.0;
    double theta_ = 0.0;
};

/// Coherent seed |alpha> injected into the optical input a0.
class CoherentInput {
  public:
    constexpr CoherentInput() = default;

    CoherentInput(double alpha_mag, double theta_alpha)
        : alpha_mag_(alpha_mag), theta_alpha_(reduce_angle(theta_alpha)) {
        if (!(alpha_mag >= 0.0) || !std::isfinite(alpha_mag)) {
            throw DomainError("coherent amplitude must be finite and non-negative");
        }
        if (!std::isfinite(theta_alpha)) {
            throw DomainError("coherent phase must be finite");
        }
    }

    [[nodiscard]] double alpha_mag() const noexcept { return alpha_mag_; }
    [[nodiscard]] double theta_alpha() const noexcept { return theta_alpha_; }
    /// N_alpha = |alpha|^2
    [[nodiscard]] double n_alpha() const noexcept { return alpha_mag_ * alpha_mag_; }
    [[nodiscard]] cplx amplitude() const { return alpha_mag_ * unit_phase(theta_alpha_); }

    friend bool operator==(const CoherentInput&, const CoherentInput&) = default;

  private:
    double alpha_mag_ = 0.0;
    double theta_alpha_ = 0.0;
};

/// Optical transmissivity T of the fictitious beam splitter and the atomic
/// damping exponent gamma*tau. Only the product gamma*tau enters any result.
class LossParams {
  public:
    constexpr LossParams() = default;

    LossParams(double transmissivity, double gamma_tau)
        : transmissivity_(transmissivity), gamma_tau_(gamma_tau) {
        if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
            throw DomainError("transmissivity must lie in [0, 1]");
        }
        if (!(gamma_tau >= 0.0) || !std::isfinite(gamma_tau)) {
            throw DomainError("gamma_tau must be finite and non-negative");
        }
    }

    [[nodiscard]] double transmissivity() const noexcept { return transmissivity_; }
    [[nodiscard]] double gamma_tau() const noexcept { return gamma_tau_; }
    [[nodiscard]] double reflectance() const noexcept { return 1.0 - transmissivity_; }
    /// exp(-gamma_tau), the amplitude damping of the atomic arm.
    [[nodiscard]] double damping() const { return std::exp(-gamma_tau_); }
    /// <F F^dag> = 1 - exp(-2 gamma_tau), the Langevin commutator weight.
    [[nodiscard]] double langevin_weight() const { return -std::expm1(-2.0 * gamma_tau_); }
    [[nodiscard]] bool lossless() const noexcept {
        return transmissivity_ == 1.0 && gamma_tau_ == 0.0;
    }

    friend bool operator==(const LossParams&, const LossParams&) = default;

  private:
    double transmissivity_ = 1.0;
    double gamma_tau_ = 0.0;
};

/// Full experiment configuration.
struct InterferometerParams {
    RamanGain rp1;
    RamanGain rp2;
    CoherentInput input;
    double phi = 0.0;
    LossParams loss;

    /// g1 == g2 and theta2 - theta1 = pi (mod 2pi).
    [[nodiscard]] bool balanced() const {
        if (rp1.g() != rp2.g()) {
            return false;
        }
        const double rel = reduce_angle(rp2.theta() - rp1.theta());
        return std::abs(rel - kPi) < 1e-12;
    }

    [[nodiscard]] InterferometerParams with_phi(double value) const {
        auto out = *this;
        out.phi = value;
        return out;
    }
    [[nodiscard]] InterferometerParams with_loss(LossParams value) const {
        auto out = *this;
        out.loss = value;
        return out;
    }
    [[nodiscard]] InterferometerParams with_input(CoherentInput value) const {
        auto out = *this;
        out.input = value;
        return out;
    }

    /// Balanced configuration: both gains g, theta2 = theta1 + pi.
    static InterferometerParams balanced_setup(double g, double theta1, CoherentInput input,
                                               double phi, LossParams loss = {}) {
        return {RamanGain(g, theta1), RamanGain(g, theta1 + kPi), input, phi, loss};
    }

    friend bool operator==(const InterferometerParams&, const InterferometerParams&) = default;
};

inline void require_balanced(const InterferometerParams& params, const char* where) {
    if (!params.balanced()) {
        throw DomainError(std::string(where) + " requires balanced parameters (g1 == g2, theta2 - theta1 = pi)");
    }
}

struct RamanCoeffs {
    cplx u;
    cplx v;
};

/// u = cosh g, v = exp(i theta) sinh g.
inline RamanCoeffs raman_coeffs(const RamanGain& gain) {
    return {cplx(std::cosh(gain.g()), 0.0), unit_phase(gain.theta()) * std::sinh(gain.g())};
}

/// Output operators over the input modes {a0, b0, V, F}:
///
///   a2 = U1 a0 + V1 b0^dag + env_a_vac V + env_a_lang F^dag
///   b2 = phase_b (U2 b0 + V2 a0^dag) + env_b_vac V^dag + env_b_lang F
///
/// V is vacuum, F carries <F F^dag> = lang_comm and <F^dag F> = 0.
struct ModeExpansion {
    cplx U1, V1, U2, V2;
    cplx u2, v2;
    cplx env_a_vac, env_a_lang;
    cplx env_b_vac, env_b_lang;
    cplx phase_b;
    double R = 0.0;
    double lang_comm = 0.0;

    /// |U1|^2 - |V1|^2 + R|u2|^2 - lang_comm |v2|^2; equals 1 for a valid expansion.
    [[nodiscard]] double commutator_a() const {
        return std::norm(U1) - std::norm(V1) + std::norm(env_a_vac) - lang_comm * std::norm(env_a_lang);
    }
    /// |U2|^2 - |V2|^2 - R|v2|^2 + lang_comm |u2|^2; equals 1 for a valid expansion.
    [[nodiscard]] double commutator_b() const {
        return std::norm(U2) - std::norm(V2) - std::norm(env_b_vac) + lang_comm * std::norm(env_b_lang);
    }
};

/// Derivatives of the composed coefficients with respect to phi.
struct ExpansionSlope {
    cplx dU1, dV1, dU2, dV2;
};

inline ModeExpansion compose_expansion(const InterferometerParams& p) {
    const auto [u1, v1] = raman_coeffs(p.rp1);
    const auto [u2, v2] = raman_coeffs(p.rp2);
    const double sqrt_t = std::sqrt(p.loss.transmissivity());
    const double damp = p.loss.damping();
    const double R = p.loss.reflectance();
    const cplx ephi = unit_phase(p.phi);

    ModeExpansion e;
    e.U1 = sqrt_t * u1 * u2 * ephi + damp * std::conj(v1) * v2;
    e.V1 = sqrt_t * v1 * u2 * ephi + damp * std::conj(u1) * v2;
    e.U2 = damp * u1 * u2 * ephi + sqrt_t * std::conj(v1) * v2;
    e.V2 = damp * v1 * u2 * ephi + sqrt_t * std::conj(u1) * v2;
    e.u2 = u2;
    e.v2 = v2;
    e.env_a_vac = std::sqrt(R) * u2;
    e.env_a_lang = v2;
    e.env_b_vac = std::sqrt(R) * v2;
    e.env_b_lang = u2;
    e.phase_b = std::conj(ephi);
    e.R = R;
    e.lang_comm = p.loss.langevin_weight();
    return e;
}

inline ExpansionSlope expansion_slope(const InterferometerParams& p) {
    const auto [u1, v1] = raman_coeffs(p.rp1);
    const auto [u2, v2] = raman_coeffs(p.rp2);
    const cplx i_ephi = cplx(0.0, 1.0) * unit_phase(p.phi);
    const double sqrt_t = std::sqrt(p.loss.transmissivity());
    const double damp = p.loss.damping();
    return {sqrt_t * u1 * u2 * i_ephi, sqrt_t * v1 * u2 * i_ephi, damp * u1 * u2 * i_ephi,
            damp * v1 * u2 * i_ephi};
}

struct BalancedMagnitudes {
    double absU_sq;
    double absV_sq;
};

/// |U_b|^2 and |V_b|^2 under balanced settings. The |V_b|^2 prefactor is 1/4,
/// which is what the composed coefficients and the lossless limit
/// |V|^2 = sinh^2(2g)(1 - cos phi)/2 require.
inline BalancedMagnitudes lossy_balanced_magnitudes(double g, const LossParams& loss, double phi) {
    const double c2 = std::cosh(g) * std::cosh(g);
    const double s2 = std::sinh(g) * std::sinh(g);
    const double sqrt_t = std::sqrt(loss.transmissivity());
    const double damp = loss.damping();
    const double cos_phi = std::real(unit_phase(phi));
    const double first = sqrt_t * c2 + damp * s2;
    const double absU_sq = first * first - 2.0 * sqrt_t * damp * s2 * c2 * (1.0 + cos_phi);
    const double sinh2g = std::sinh(2.0 * g);
    const double absV_sq = 0.25 * sinh2g * sinh2g *
                           (loss.transmissivity() + damp * damp - 2.0 * sqrt_t * damp * cos_phi);
    return {absU_sq, absV_sq};
}

} // namespace su11
