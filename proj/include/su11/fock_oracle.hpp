#pragma once

// Brute-force verifier: a truncated two-mode Fock density matrix pushed
// through RP1 -> phase, loss, damping -> RP2, with every moment read off the
// state. Nothing here uses the closed-form expansion.
//
// The pair-creation generator conserves d = n_a - n_b, so squeezing acts block
// by block. Each block exponential is computed on a padded block reaching well
// past the cutoff; amplitude that would leave the retained space shows up as a
// trace deficit instead of reflecting off the truncation edge. RP2 is folded
// into the measurement: <O> = Tr[W^dag O W rho] with W mapping into a larger
// output cutoff.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "su11/core_model.hpp"
#include "su11/observables.hpp"

namespace su11::fock {

using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultBudget = 1e-7;
inline constexpr int kMaxStateCutoff = 48;
inline constexpr int kMaxOutputCutoff = 400;

enum class Mode { A, B };

/// Basis |n_a, n_b>, 0 <= n <= cutoff, flat index n_a (cutoff + 1) + n_b.
/// Inside block d = n_a - n_b states are ordered by k = min(n_a, n_b).
class FockLayout {
  public:
    explicit FockLayout(int cutoff) : cutoff_(cutoff) {}

    [[nodiscard]] int cutoff() const { return cutoff_; }
    [[nodiscard]] int levels() const { return cutoff_ + 1; }
    [[nodiscard]] int dim() const { return levels() * levels(); }
    [[nodiscard]] int index(int na, int nb) const { return na * levels() + nb; }
    [[nodiscard]] int block_size(int d) const { return levels() - std::abs(d); }
    [[nodiscard]] std::pair<int, int> block_state(int d, int k) const {
        return {k + std::max(d, 0), k + std::max(-d, 0)};
    }
    /// Flat indices of block d in k order.
    [[nodiscard]] std::vector<int> block_indices(int d) const {
        std::vector<int> out(block_size(d));
        for (int k = 0; k < block_size(d); ++k) {
            const auto [na, nb] = block_state(d, k);
            out[k] = index(na, nb);
        }
        return out;
    }

  private:
    int cutoff_;
};

class TruncatedState {
  public:
    TruncatedState(int cutoff, Matrix rho, double trace_deficit = 0.0)
        : cutoff_(cutoff), rho_(std::move(rho)), trace_deficit_(trace_deficit) {
        if (cutoff < 1) {
            throw DomainError("cutoff must be positive");
        }
        const int dim = FockLayout(cutoff).dim();
        if (rho_.rows() != dim || rho_.cols() != dim) {
            throw DomainError("density matrix does not match the cutoff");
        }
    }

    [[nodiscard]] int cutoff() const { return cutoff_; }
    [[nodiscard]] FockLayout layout() const { return FockLayout(cutoff_); }
    [[nodiscard]] const Matrix& rho() const { return rho_; }
    [[nodiscard]] double trace_deficit() const { return trace_deficit_; }
    [[nodiscard]] double trace() const { return rho_.trace().real(); }

    [[nodiscard]] double hermiticity_error() const {
        return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    }
    [[nodiscard]] double min_eigenvalue() const {
        const Matrix h = 0.5 * (rho_ + rho_.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

  private:
    int cutoff_;
    Matrix rho_;
    double trace_deficit_;
};

/// |alpha>_a (x) |0>_b.
inline TruncatedState coherent_vacuum_state(cplx alpha, int cutoff) {
    if (cutoff < 1 || cutoff > kMaxStateCutoff || std::norm(alpha) > 0.5 * cutoff) {
        throw TruncationError("truncation rejected");
    }
    const FockLayout layout(cutoff);
    Vector psi = Vector::Zero(layout.dim());
    cplx c = std::exp(-0.5 * std::norm(alpha));
    double kept = 0.0;
    for (int n = 0; n <= cutoff; ++n) {
        if (n > 0) {
            c *= alpha / std::sqrt(static_cast<double>(n));
        }
        psi(layout.index(n, 0)) = c;
        kept += std::norm(c);
    }
    return {cutoff, psi * psi.adjoint(), std::max(0.0, 1.0 - kept)};
}

/// Blocks of exp(g (e^{i theta} a^dag b^dag - e^{-i theta} a b)): block d maps
/// the states of block d below in_cutoff to those below out_cutoff.
class SqueezePropagator {
  public:
    SqueezePropagator(double g, double theta, int in_cutoff, int out_cutoff)
        : in_cutoff_(in_cutoff), out_cutoff_(out_cutoff) {
        if (out_cutoff < in_cutoff) {
            throw DomainError("output cutoff below input cutoff");
        }
        const FockLayout in(in_cutoff);
        const FockLayout out(out_cutoff);
        const int padded = out_cutoff + std::max(16, out_cutoff / 2);
        const cplx e = unit_phase(theta);
        blocks_.reserve(2 * in_cutoff + 1);
        for (int d = -in_cutoff; d <= in_cutoff; ++d) {
            const int size = padded + 1 - std::abs(d);
            RealMatrix gen = RealMatrix::Zero(size, size);
            for (int k = 0; k + 1 < size; ++k) {
                const double na = k + std::max(d, 0);
                const double nb = k + std::max(-d, 0);
                const double c = g * std::sqrt((na + 1.0) * (nb + 1.0));
                gen(k + 1, k) = c;
                gen(k, k + 1) = -c;
            }
            const RealMatrix prop = gen.exp();
            const int rows = out.block_size(d);
            const int cols = in.block_size(d);
            Matrix w(rows, cols);
            for (int c = 0; c < cols; ++c) {
                for (int r = 0; r < rows; ++r) {
                    w(r, c) = prop(r, c) * std::pow(e, r - c);
                }
            }
            blocks_.push_back(std::move(w));
        }
    }

    [[nodiscard]] int in_cutoff() const { return in_cutoff_; }
    [[nodiscard]] int out_cutoff() const { return out_cutoff_; }
    [[nodiscard]] const Matrix& block(int d) const { return blocks_.at(d + in_cutoff_); }

  private:
    int in_cutoff_;
    int out_cutoff_;
    std::vector<Matrix> blocks_;
};

namespace detail {

inline double merged_deficit(const TruncatedState& before, double trace_after) {
    return std::max(before.trace_deficit(), 1.0 - trace_after);
}

inline void check_budget(double deficit, double budget) {
    if (deficit > budget) {
        throw TruncationError("truncation overflow");
    }
}

} // namespace detail

inline TruncatedState apply_squeeze(const TruncatedState& state, const SqueezePropagator& prop,
                                    double budget = kDefaultBudget) {
    const FockLayout layout = state.layout();
    const int n = layout.cutoff();
    if (prop.in_cutoff() != n || prop.out_cutoff() != n) {
        throw DomainError("propagator does not match the state cutoff");
    }
    std::vector<std::vector<int>> idx;
    std::vector<bool> occupied;
    for (int d = -n; d <= n; ++d) {
        idx.push_back(layout.block_indices(d));
        double mass = 0.0;
        for (int i : idx.back()) {
            mass += std::abs(state.rho()(i, i));
        }
        occupied.push_back(mass > 0.0);
    }
    const Matrix& rho = state.rho();
    Matrix out = Matrix::Zero(layout.dim(), layout.dim());
    for (int bi = 0; bi <= 2 * n; ++bi) {
        if (!occupied[bi]) {
            continue;
        }
        const Matrix& wi = prop.block(bi - n);
        for (int bj = 0; bj <= 2 * n; ++bj) {
            if (!occupied[bj]) {
                continue;
            }
            const Matrix& wj = prop.block(bj - n);
            const Matrix sub = rho(idx[bi], idx[bj]);
            out(idx[bi], idx[bj]) = wi * sub * wj.adjoint();
        }
    }
    const double deficit = detail::merged_deficit(state, out.trace().real());
    detail::check_budget(deficit, budget);
    return {n, std::move(out), deficit};
}

inline TruncatedState two_mode_squeeze(const TruncatedState& state, double g, double theta,
                                       double budget = kDefaultBudget) {
    return apply_squeeze(state, SqueezePropagator(g, theta, state.cutoff(), state.cutoff()), budget);
}

/// rho -> P rho P^dag with P = exp(i phi n_a).
inline TruncatedState phase_shift_a(const TruncatedState& state, double phi) {
    const FockLayout layout = state.layout();
    Vector p(layout.dim());
    for (int na = 0; na <= layout.cutoff(); ++na) {
        const cplx e = std::polar(1.0, phi * na);
        for (int nb = 0; nb <= layout.cutoff(); ++nb) {
            p(layout.index(na, nb)) = e;
        }
    }
    Matrix out = p.asDiagonal() * state.rho() * p.conjugate().asDiagonal();
    return {layout.cutoff(), std::move(out), state.trace_deficit()};
}

/// Kraus amplitudes A_k(n) = sqrt(C(n+k, k) eta^n (1-eta)^k): <n|K_k|n+k>.
inline RealMatrix damping_amplitudes(int cutoff, double eta) {
    RealMatrix a = RealMatrix::Zero(cutoff + 1, cutoff + 1); // a(k, n)
    for (int k = 0; k <= cutoff; ++k) {
        for (int n = 0; n + k <= cutoff; ++n) {
            const double log_binom = std::lgamma(n + k + 1.0) - std::lgamma(n + 1.0) - std::lgamma(k + 1.0);
            double weight = std::exp(log_binom);
            weight *= (n == 0) ? 1.0 : std::pow(eta, n);
            weight *= (k == 0) ? 1.0 : std::pow(1.0 - eta, k);
            a(k, n) = std::sqrt(weight);
        }
    }
    return a;
}

/// Amplitude-damping channel of transmissivity eta on one mode.
inline TruncatedState amplitude_damp(const TruncatedState& state, Mode mode, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw DomainError("eta must lie in [0, 1]");
    }
    if (eta == 1.0) {
        return state;
    }
    const FockLayout layout = state.layout();
    const int levels = layout.levels();
    const RealMatrix amp = damping_amplitudes(layout.cutoff(), eta);
    const Matrix& rho = state.rho();
    Matrix out = Matrix::Zero(layout.dim(), layout.dim());

    if (mode == Mode::A) {
        // mode a is the slow index: dropping k quanta shifts by k * levels
        for (int k = 0; k <= layout.cutoff(); ++k) {
            const int m = layout.dim() - k * levels;
            Eigen::VectorXd w(m);
            for (int i = 0; i < m; ++i) {
                w(i) = amp(k, i / levels);
            }
            out.topLeftCorner(m, m) +=
                ((w * w.transpose()).cast<cplx>().array() * rho.bottomRightCorner(m, m).array()).matrix();
        }
    } else {
        for (int k = 0; k <= layout.cutoff(); ++k) {
            const int m = levels - k;
            Eigen::VectorXd w(m);
            for (int i = 0; i < m; ++i) {
                w(i) = amp(k, i);
            }
            const Matrix weights = (w * w.transpose()).cast<cplx>();
            for (int ai = 0; ai < levels; ++ai) {
                for (int aj = 0; aj < levels; ++aj) {
                    out.block(ai * levels, aj * levels, m, m) +=
                        (weights.array() * rho.block(ai * levels + k, aj * levels + k, m, m).array()).matrix();
                }
            }
        }
    }
    const double deficit = detail::merged_deficit(state, out.trace().real());
    return {layout.cutoff(), std::move(out), deficit};
}

/// Ladder-operator expectations sufficient for every observable and covariance.
struct LadderMoments {
    double trace = 0.0;
    cplx a, a_sq, b, b_sq, ab, ab_dag;
    double n_a = 0.0, n_a_sq = 0.0, n_b = 0.0, n_b_sq = 0.0, n_ab = 0.0;
};

namespace detail {

/// O|n_a, n_b> = coef(n_a, n_b) |n_a + da, n_b + db>.
struct LadderTerm {
    int da;
    int db;
    double (*coef)(double na, double nb);
};

inline const std::array<LadderTerm, 12>& ladder_terms() {
    static const std::array<LadderTerm, 12> terms{{
        {0, 0, [](double, double) { return 1.0; }},
        {-1, 0, [](double na, double) { return std::sqrt(na); }},
        {-2, 0, [](double na, double) { return std::sqrt(na * (na - 1.0)); }},
        {0, 0, [](double na, double) { return na; }},
        {0, 0, [](double na, double) { return na * na; }},
        {0, -1, [](double, double nb) { return std::sqrt(nb); }},
        {0, -2, [](double, double nb) { return std::sqrt(nb * (nb - 1.0)); }},
        {0, 0, [](double, double nb) { return nb; }},
        {0, 0, [](double, double nb) { return nb * nb; }},
        {-1, -1, [](double na, double nb) { return std::sqrt(na * nb); }},
        {-1, 1, [](double na, double nb) { return std::sqrt(na * (nb + 1.0)); }},
        {0, 0, [](double na, double nb) { return na * nb; }},
    }};
    return terms;
}

inline LadderMoments assemble(const std::array<cplx, 12>& v) {
    LadderMoments m;
    m.trace = v[0].real();
    m.a = v[1];
    m.a_sq = v[2];
    m.n_a = v[3].real();
    m.n_a_sq = v[4].real();
    m.b = v[5];
    m.b_sq = v[6];
    m.n_b = v[7].real();
    m.n_b_sq = v[8].real();
    m.ab = v[9];
    m.ab_dag = v[10];
    m.n_ab = v[11].real();
    return m;
}

} // namespace detail

/// Tr[O rho] for every ladder term, read directly from the state.
inline LadderMoments measure(const TruncatedState& state) {
    const FockLayout layout = state.layout();
    const int n = layout.cutoff();
    const Matrix& rho = state.rho();
    std::array<cplx, 12> values{};
    const auto& terms = detail::ladder_terms();
    for (std::size_t t = 0; t < terms.size(); ++t) {
        cplx sum = 0.0;
        for (int na = 0; na <= n; ++na) {
            for (int nb = 0; nb <= n; ++nb) {
                const int ta = na + terms[t].da;
                const int tb = nb + terms[t].db;
                if (ta < 0 || tb < 0 || ta > n || tb > n) {
                    continue;
                }
                const double c = terms[t].coef(na, nb);
                if (c != 0.0) {
                    sum += c * rho(layout.index(na, nb), layout.index(ta, tb));
                }
            }
        }
        values[t] = sum;
    }
    return detail::assemble(values);
}

/// Measurement after a final squeeze: H = W^dag O W per block pair, so that
/// <O> = sum H(k', k) rho[(d, k), (d + delta, k')].
class OutputMeasurement {
  public:
    OutputMeasurement(double g, double theta, int in_cutoff, int out_cutoff)
        : prop_(g, theta, in_cutoff, out_cutoff) {
        const FockLayout in(in_cutoff);
        const FockLayout out(out_cutoff);
        const auto& terms = detail::ladder_terms();
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const int delta = terms[t].da - terms[t].db;
            for (int d = -in_cutoff; d <= in_cutoff; ++d) {
                const int dt = d + delta;
                if (dt < -in_cutoff || dt > in_cutoff) {
                    continue;
                }
                const Matrix& w = prop_.block(d);
                const Matrix& wt = prop_.block(dt);
                Matrix ow = Matrix::Zero(wt.rows(), w.cols());
                for (int k = 0; k < w.rows(); ++k) {
                    const auto [na, nb] = out.block_state(d, k);
                    const int ta = na + terms[t].da;
                    const int tb = nb + terms[t].db;
                    if (ta < 0 || tb < 0 || ta > out_cutoff || tb > out_cutoff) {
                        continue;
                    }
                    const double c = terms[t].coef(na, nb);
                    if (c != 0.0) {
                        ow.row(std::min(ta, tb)) += c * w.row(k);
                    }
                }
                blocks_.push_back({static_cast<int>(t), d, dt, wt.adjoint() * ow});
            }
        }
    }

    [[nodiscard]] int in_cutoff() const { return prop_.in_cutoff(); }
    [[nodiscard]] int out_cutoff() const { return prop_.out_cutoff(); }

    [[nodiscard]] LadderMoments measure(const TruncatedState& state) const {
        if (state.cutoff() != in_cutoff()) {
            throw DomainError("state cutoff does not match the output stage");
        }
        const FockLayout layout = state.layout();
        const Matrix& rho = state.rho();
        std::array<cplx, 12> values{};
        for (const auto& blk : blocks_) {
            const std::vector<int> rows = layout.block_indices(blk.d);
            const std::vector<int> cols = layout.block_indices(blk.dt);
            // rho[(d, k), (dt, k')] is sub(k, k'); sum H(k', k) sub(k, k') = tr(H sub)
            const Matrix sub = rho(rows, cols);
            values[blk.term] += (blk.h.array() * sub.transpose().array()).sum();
        }
        return detail::assemble(values);
    }

  private:
    struct HeisenbergBlock {
        int term;
        int d;
        int dt;
        Matrix h;
    };
    SqueezePropagator prop_;
    std::vector<HeisenbergBlock> blocks_;
};

/// Mean and variance of an observable from ladder moments.
inline std::pair<double, double> moment_of(const LadderMoments& m, Observable which) {
    const auto quad = [&](cplx mean, cplx sq, double num, bool y) {
        const double sign = y ? -1.0 : 1.0;
        const double second = (sign * 2.0 * sq.real() + 2.0 * num + m.trace) / 4.0;
        const double first = y ? mean.imag() : mean.real();
        return std::pair{first, second - first * first};
    };
    switch (which) {
    case Observable::QuadX_a2:
        return quad(m.a, m.a_sq, m.n_a, false);
    case Observable::QuadY_a2:
        return quad(m.a, m.a_sq, m.n_a, true);
    case Observable::QuadX_b2:
        return quad(m.b, m.b_sq, m.n_b, false);
    case Observable::QuadY_b2:
        return quad(m.b, m.b_sq, m.n_b, true);
    case Observable::Num_a2:
        return {m.n_a, m.n_a_sq - m.n_a * m.n_a};
    case Observable::Num_b2:
        return {m.n_b, m.n_b_sq - m.n_b * m.n_b};
    }
    throw DomainError("unknown observable");
}

inline double covariance_of(const LadderMoments& m, CovPair pair) {
    if (pair == CovPair::Number) {
        return m.n_ab - m.n_a * m.n_b;
    }
    return 0.5 * (m.ab + m.ab_dag).real() - m.a.real() * m.b.real();
}

struct OracleOptions {
    double budget = kDefaultBudget;
    /// 0: start from a heuristic and raise until the output leakage fits the budget.
    int output_cutoff = 0;
    double slope_step = 1e-4;
};

struct OracleRun {
    LadderMoments moments;
    int state_cutoff = 0;
    int output_cutoff = 0;
    double trace_deficit = 0.0;
};

struct OracleEvaluation {
    std::array<ObservableStats, 6> stats; // indexed by Observable
    double cov_quad = 0.0;
    double cov_number = 0.0;
    int state_cutoff = 0;
    int output_cutoff = 0;
    double trace_deficit = 0.0;

    [[nodiscard]] const ObservableStats& at(Observable which) const {
        return stats[static_cast<std::size_t>(which)];
    }
    [[nodiscard]] double covariance(CovPair pair) const {
        return pair == CovPair::Quadrature ? cov_quad : cov_number;
    }
};

/// Pipeline with caches for RP1 states and output stages. Not thread-safe;
/// use one engine per thread.
class OracleEngine {
  public:
    explicit OracleEngine(OracleOptions options = {}) : options_(options) {}

    [[nodiscard]] const OracleOptions& options() const { return options_; }

    /// RP1 output, cached for the most recent input.
    const TruncatedState& rp1_state(const InterferometerParams& p, int cutoff) {
        const Rp1Key key{p.rp1.g(), p.rp1.theta(), p.input.alpha_mag(), p.input.theta_alpha(), cutoff};
        if (!rp1_ || rp1_key_ != key) {
            rp1_.reset();
            rp1_ = std::make_unique<TruncatedState>(two_mode_squeeze(
                coherent_vacuum_state(p.input.amplitude(), cutoff), p.rp1.g(), p.rp1.theta(), options_.budget));
            rp1_key_ = key;
        }
        return *rp1_;
    }

    /// RP1 output after loss and damping, cached for the most recent input.
    /// The damping channel is phase covariant, so the phase shift can be
    /// applied afterwards and phi scans reuse this state.
    const TruncatedState& damped_state(const InterferometerParams& p, int cutoff) {
        const DampedKey key{p.rp1.g(), p.rp1.theta(), p.input.alpha_mag(), p.input.theta_alpha(), cutoff,
                            p.loss.transmissivity(), p.loss.gamma_tau()};
        if (!damped_ || damped_key_ != key) {
            damped_.reset();
            TruncatedState s = amplitude_damp(rp1_state(p, cutoff), Mode::A, p.loss.transmissivity());
            damped_ = std::make_unique<TruncatedState>(amplitude_damp(s, Mode::B, std::exp(-2.0 * p.loss.gamma_tau())));
            damped_key_ = key;
        }
        return *damped_;
    }

    /// Smallest state cutoff (in steps of 2) whose RP1 leakage fits the budget.
    int auto_cutoff(const InterferometerParams& p) {
        const double s = std::sinh(p.rp1.g());
        const double c = std::cosh(p.rp1.g());
        const double mean = p.input.n_alpha() * c * c + s * s;
        int cutoff = std::max(8, static_cast<int>(std::ceil(mean + 4.0 * std::sqrt(mean) + 6.0)));
        cutoff += cutoff % 2;
        for (; cutoff <= kMaxStateCutoff; cutoff += 2) {
            try {
                rp1_state(p, cutoff);
                return cutoff;
            } catch (const TruncationError&) {
            }
        }
        throw TruncationError("truncation overflow");
    }

    /// Moments of a2, b2 for the full pipeline. output_hint of 0 uses the
    /// options' output cutoff or the heuristic start.
    OracleRun run(const InterferometerParams& p, int cutoff, int output_hint = 0) {
        const TruncatedState s = phase_shift_a(damped_state(p, cutoff), p.phi);

        const bool fixed = options_.output_cutoff > 0;
        int out = fixed ? options_.output_cutoff : output_hint;
        if (out <= 0) {
            out = std::max(cutoff + 16, 2 * cutoff);
        }
        out = std::max(out, cutoff);
        while (true) {
            const LadderMoments m = output_stage(p.rp2, cutoff, out).measure(s);
            const double deficit = std::max(s.trace_deficit(), 1.0 - m.trace);
            if (deficit <= options_.budget) {
                return {m, cutoff, out, deficit};
            }
            if (fixed || out >= kMaxOutputCutoff) {
                throw TruncationError("truncation overflow");
            }
            out = std::min(kMaxOutputCutoff, out * 3 / 2);
        }
    }

    /// Stats of all observables plus both covariances; slopes by central
    /// difference at phi +- slope_step.
    OracleEvaluation evaluate(const InterferometerParams& p, int cutoff) {
        const OracleRun centre = run(p, cutoff);
        const double h = options_.slope_step;
        const OracleRun plus = run(p.with_phi(p.phi + h), cutoff, centre.output_cutoff);
        const OracleRun minus = run(p.with_phi(p.phi - h), cutoff, centre.output_cutoff);
        OracleEvaluation ev;
        for (Observable o : kAllObservables) {
            const auto [mean, var] = moment_of(centre.moments, o);
            const double slope = (moment_of(plus.moments, o).first - moment_of(minus.moments, o).first) / (2.0 * h);
            ev.stats[static_cast<std::size_t>(o)] = {mean, var, slope};
        }
        ev.cov_quad = covariance_of(centre.moments, CovPair::Quadrature);
        ev.cov_number = covariance_of(centre.moments, CovPair::Number);
        ev.state_cutoff = cutoff;
        ev.output_cutoff = std::max({centre.output_cutoff, plus.output_cutoff, minus.output_cutoff});
        ev.trace_deficit = std::max({centre.trace_deficit, plus.trace_deficit, minus.trace_deficit});
        return ev;
    }

  private:
    using Rp1Key = std::tuple<double, double, double, double, int>;
    using DampedKey = std::tuple<double, double, double, double, int, double, double>;
    using StageKey = std::tuple<double, double, int, int>;

    const OutputMeasurement& output_stage(const RamanGain& rp2, int in, int out) {
        const StageKey key{rp2.g(), rp2.theta(), in, out};
        auto it = stages_.find(key);
        if (it == stages_.end()) {
            if (stages_.size() >= 6) {
                stages_.clear();
            }
            it = stages_.emplace(key, std::make_unique<OutputMeasurement>(rp2.g(), rp2.theta(), in, out)).first;
        }
        return *it->second;
    }

    OracleOptions options_;
    std::unique_ptr<TruncatedState> rp1_;
    Rp1Key rp1_key_{};
    std::unique_ptr<TruncatedState> damped_;
    DampedKey damped_key_{};
    std::map<StageKey, std::unique_ptr<OutputMeasurement>> stages_;
};

inline ObservableStats oracle_stats(const InterferometerParams& p, int cutoff, Observable which,
                                    OracleOptions options = {}) {
    OracleEngine engine(options);
    return engine.evaluate(p, cutoff).at(which);
}

inline double oracle_cov(const InterferometerParams& p, int cutoff, CovPair pair, OracleOptions options = {}) {
    OracleEngine engine(options);
    return covariance_of(engine.run(p, cutoff).moments, pair);
}

} // namespace su11::fock
