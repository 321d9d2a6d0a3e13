#pragma once

// Closed forms against the Fock-space oracle over a parameter grid.

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "su11/correlations.hpp"
#include "su11/csv.hpp"
#include "su11/fock_oracle.hpp"
#include "su11/metrology.hpp"
#include "su11/moments.hpp"

namespace su11 {

struct VerifyOptions {
    double tolerance = 1e-6;
    double max_g = 0.6;
    double max_alpha = 1.2;
    /// 0: smallest cutoff whose RP1 leakage fits the budget.
    int cutoff = 0;
    double budget = 1e-12;
    double theta1 = 0.3;
    double theta_alpha = 0.4;

    /// Absolute floor that goes with the relative tolerance (1e-8 at 1e-6).
    [[nodiscard]] double floor() const { return tolerance * 1e-2; }

    void validate() const {
        if (!(tolerance > 0.0)) {
            throw UsageError("tolerance must be positive");
        }
        if (!(max_g > 0.0 && max_g <= 0.8)) {
            throw UsageError("max_g must lie in (0, 0.8]");
        }
        if (!(max_alpha > 0.0 && max_alpha <= 1.5)) {
            throw UsageError("max_alpha must lie in (0, 1.5]");
        }
        if (cutoff < 0 || cutoff > fock::kMaxStateCutoff) {
            throw UsageError("cutoff must lie in [0, " + std::to_string(fock::kMaxStateCutoff) + "]");
        }
    }
};

enum class CheckStatus { Pass, Fail, Skip, Truncation };

inline const char* status_token(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass:
        return "pass";
    case CheckStatus::Fail:
        return "fail";
    case CheckStatus::Skip:
        return "skip";
    case CheckStatus::Truncation:
        return "truncation";
    }
    return "?";
}

struct VerifyCheck {
    double g, alpha_mag, T, gamma_tau, phi;
    std::string quantity;
    double closed;
    double oracle;
    CheckStatus status;
};

struct VerifyResult {
    std::vector<VerifyCheck> checks;
    int passed = 0;
    int failed = 0;
    int skipped = 0;
    int truncated = 0;
    int max_state_cutoff = 0;
    int max_output_cutoff = 0;
    double seconds = 0.0;

    [[nodiscard]] bool ok() const { return failed == 0 && truncated == 0; }

    [[nodiscard]] CsvTable table() const {
        CsvTable t({"g", "alpha_mag", "T", "gamma_tau", "phi", "quantity", "closed", "oracle", "abs_err", "status"});
        for (const auto& c : checks) {
            t.add_row({format_number(c.g), format_number(c.alpha_mag), format_number(c.T),
                       format_number(c.gamma_tau), format_number(c.phi), c.quantity, format_number(c.closed),
                       format_number(c.oracle), format_number(std::abs(c.closed - c.oracle)),
                       status_token(c.status)});
        }
        return t;
    }
};

/// Grid of the equivalence suite: g and |alpha| scale with the maxima.
struct VerifyGrid {
    std::vector<double> g, alpha_mag, T, gamma_tau, phi;

    static VerifyGrid scaled(double max_g, double max_alpha) {
        return {{max_g / 3.0, 2.0 * max_g / 3.0, max_g},
                {0.0, max_alpha * 0.7 / 1.2, max_alpha},
                {1.0, 0.8, 0.5},
                {0.0, 0.1, 0.3},
                {0.0, 0.3, kPi / 2.0, kPi}};
    }
};

inline bool within(double closed, double oracle, const VerifyOptions& opt) {
    return std::abs(closed - oracle) <= std::max(opt.tolerance * std::abs(closed), opt.floor());
}

namespace detail {

/// Slopes below this are treated as a vanishing signal.
inline constexpr double kFlatSlope = 1e-6;
/// LCC is skipped when a marginal is this close to a number eigenstate.
inline constexpr double kFlatVariance = 1e-8;

class PointChecker {
  public:
    PointChecker(VerifyResult& result, const VerifyOptions& opt, const InterferometerParams& p)
        : result_(result), opt_(opt), p_(p) {}

    void add(const std::string& quantity, double closed, double oracle, CheckStatus status) {
        result_.checks.push_back({p_.rp1.g(), p_.input.alpha_mag(), p_.loss.transmissivity(),
                                  p_.loss.gamma_tau(), p_.phi, quantity, closed, oracle, status});
        switch (status) {
        case CheckStatus::Pass:
            ++result_.passed;
            break;
        case CheckStatus::Fail:
            ++result_.failed;
            break;
        case CheckStatus::Skip:
            ++result_.skipped;
            break;
        case CheckStatus::Truncation:
            ++result_.truncated;
            break;
        }
    }

    void compare(const std::string& quantity, double closed, double oracle) {
        add(quantity, closed, oracle, within(closed, oracle, opt_) ? CheckStatus::Pass : CheckStatus::Fail);
    }

    /// Delta phi: where the closed-form slope vanishes only require the
    /// oracle to see a vanishing signal too.
    void compare_sensitivity(const std::string& quantity, const ObservableStats& closed,
                             const ObservableStats& oracle) {
        if (std::abs(closed.slope) < kFlatSlope) {
            const bool flat = std::abs(oracle.slope) < kFlatSlope + opt_.floor();
            add(quantity, sensitivity(closed), sensitivity(oracle), flat ? CheckStatus::Skip : CheckStatus::Fail);
            return;
        }
        compare(quantity, sensitivity(closed), sensitivity(oracle));
    }

    void compare_lcc(const std::string& quantity, double closed_j, double cov, double var_a, double var_b) {
        if (var_a < kFlatVariance || var_b < kFlatVariance) {
            add(quantity, closed_j, std::nan(""), CheckStatus::Skip);
            return;
        }
        add(quantity, closed_j, lcc(cov, var_a, var_b), CheckStatus::Pass);
        auto& last = result_.checks.back();
        if (!within(last.closed, last.oracle, opt_)) {
            last.status = CheckStatus::Fail;
            --result_.passed;
            ++result_.failed;
        }
    }

  private:
    VerifyResult& result_;
    const VerifyOptions& opt_;
    const InterferometerParams& p_;
};

inline void check_point(VerifyResult& result, const VerifyOptions& opt, fock::OracleEngine& engine,
                        const InterferometerParams& p) {
    PointChecker check(result, opt, p);
    fock::OracleEvaluation ev;
    try {
        const int cutoff = opt.cutoff > 0 ? opt.cutoff : engine.auto_cutoff(p);
        ev = engine.evaluate(p, cutoff);
    } catch (const TruncationError& e) {
        check.add(std::string("pipeline: ") + e.what(), std::nan(""), std::nan(""), CheckStatus::Truncation);
        return;
    }
    result.max_state_cutoff = std::max(result.max_state_cutoff, ev.state_cutoff);
    result.max_output_cutoff = std::max(result.max_output_cutoff, ev.output_cutoff);

    for (Observable o : kAllObservables) {
        const std::string token(observable_token(o));
        const ObservableStats closed = observable_stats(p, o);
        const ObservableStats& oracle = ev.at(o);
        check.compare("mean_" + token, closed.mean, oracle.mean);
        check.compare("var_" + token, closed.variance, oracle.variance);
        check.compare("slope_" + token, closed.slope, oracle.slope);
    }
    check.compare_sensitivity("delta_phi_hd", quad_stats_a2(p), ev.at(Observable::QuadX_a2));
    check.compare_sensitivity("delta_phi_id", number_stats_a2(p), ev.at(Observable::Num_a2));
    check.compare("cov_quad", cov_quad(p), ev.cov_quad);
    check.compare("cov_number", cov_number(p), ev.cov_number);
    check.compare_lcc("j_x2", j_x2(p).j_value, ev.cov_quad, ev.at(Observable::QuadX_a2).variance,
                      ev.at(Observable::QuadX_b2).variance);
    check.compare_lcc("j_n2", j_n2(p).j_value, ev.cov_number, ev.at(Observable::Num_a2).variance,
                      ev.at(Observable::Num_b2).variance);
}

} // namespace detail

inline VerifyResult run_verify(const VerifyOptions& opt) {
    opt.validate();
    const auto start = std::chrono::steady_clock::now();
    const VerifyGrid grid = VerifyGrid::scaled(opt.max_g, opt.max_alpha);
    fock::OracleEngine engine(fock::OracleOptions{opt.budget, 0, 1e-4});
    VerifyResult result;
    // g and alpha outermost so the cached RP1 state is reused
    for (double g : grid.g) {
        for (double a : grid.alpha_mag) {
            for (double T : grid.T) {
                for (double gt : grid.gamma_tau) {
                    for (double phi : grid.phi) {
                        const auto p = InterferometerParams::balanced_setup(
                            g, opt.theta1, CoherentInput(a, opt.theta_alpha), phi, LossParams(T, gt));
                        detail::check_point(result, opt, engine, p);
                    }
                }
            }
        }
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace su11
