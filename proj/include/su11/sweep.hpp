#pragma once

// Parameter sweeps over one axis, the metric vocabulary and the figure
// recipes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "su11/core_model.hpp"
#include "su11/correlations.hpp"
#include "su11/csv.hpp"
#include "su11/metrology.hpp"
#include "su11/moments.hpp"

namespace su11 {

using MetricFn = std::function<double(const InterferometerParams&)>;

/// Bracket used by the opt_* metrics.
inline constexpr double kHdBracketLo = -1.0;
inline constexpr double kHdBracketHi = 1.0;
inline constexpr double kIdBracketLo = 1e-4;
inline constexpr double kIdBracketHi = 1.0;

namespace detail {

inline double snr_or_nan(const ObservableStats& s) {
    return s.variance > 0.0 ? snr(s) : std::nan("");
}

} // namespace detail

inline const std::vector<std::string>& axis_names() {
    static const std::vector<std::string> names{"phi", "T", "gamma_tau", "n_ph", "alpha_mag"};
    return names;
}

inline std::vector<std::string> metric_names() {
    std::vector<std::string> names{"delta_phi_hd", "snr_hd",       "delta_phi_id",     "snr_id",
                                   "j_x2",         "j_n2",         "cov_quad",         "cov_number",
                                   "sql",          "n_ph",         "opt_phi_hd",       "opt_delta_phi_hd",
                                   "opt_phi_id",   "opt_delta_phi_id"};
    for (Observable o : kAllObservables) {
        for (const char* prefix : {"mean_", "var_", "slope_"}) {
            names.push_back(prefix + std::string(observable_token(o)));
        }
    }
    return names;
}

/// Metric by name; unknown names are a usage error.
inline MetricFn metric_by_name(const std::string& name) {
    if (name == "delta_phi_hd") {
        return [](const InterferometerParams& p) { return scheme_sensitivity(DetectionScheme::Homodyne, p); };
    }
    if (name == "delta_phi_id") {
        return [](const InterferometerParams& p) { return scheme_sensitivity(DetectionScheme::Intensity, p); };
    }
    if (name == "snr_hd") {
        return [](const InterferometerParams& p) { return detail::snr_or_nan(quad_stats_a2(p)); };
    }
    if (name == "snr_id") {
        return [](const InterferometerParams& p) { return detail::snr_or_nan(number_stats_a2(p)); };
    }
    if (name == "j_x2") {
        return [](const InterferometerParams& p) { return j_x2(p).j_value; };
    }
    if (name == "j_n2") {
        return [](const InterferometerParams& p) { return j_n2(p).j_value; };
    }
    if (name == "cov_quad") {
        return [](const InterferometerParams& p) { return cov_quad(p); };
    }
    if (name == "cov_number") {
        return [](const InterferometerParams& p) { return cov_number(p); };
    }
    if (name == "n_ph") {
        return [](const InterferometerParams& p) { return phase_sensing_number(p); };
    }
    if (name == "sql") {
        return [](const InterferometerParams& p) {
            const double n = phase_sensing_number(p);
            return n > 0.0 ? 1.0 / std::sqrt(n) : kInfinity;
        };
    }
    if (name == "opt_phi_hd" || name == "opt_delta_phi_hd") {
        const bool want_phi = name == "opt_phi_hd";
        return [want_phi](const InterferometerParams& p) {
            const auto o = optimize_phase(DetectionScheme::Homodyne, p, kHdBracketLo, kHdBracketHi);
            return want_phi ? o.phi : o.delta_phi;
        };
    }
    if (name == "opt_phi_id" || name == "opt_delta_phi_id") {
        const bool want_phi = name == "opt_phi_id";
        return [want_phi](const InterferometerParams& p) {
            const auto o = optimize_phase(DetectionScheme::Intensity, p, kIdBracketLo, kIdBracketHi);
            return want_phi ? o.phi : o.delta_phi;
        };
    }
    for (Observable o : kAllObservables) {
        const std::string token(observable_token(o));
        if (name == "mean_" + token) {
            return [o](const InterferometerParams& p) { return observable_stats(p, o).mean; };
        }
        if (name == "var_" + token) {
            return [o](const InterferometerParams& p) { return observable_stats(p, o).variance; };
        }
        if (name == "slope_" + token) {
            return [o](const InterferometerParams& p) { return observable_stats(p, o).slope; };
        }
    }
    throw UsageError("unknown metric '" + name + "'");
}

/// Coherent amplitude giving the requested phase-sensing number at gain g1.
inline double alpha_for_n_ph(double n_ph, double g1) {
    const double s = std::sinh(g1);
    const double c = std::cosh(g1);
    if (!(n_ph >= s * s)) {
        throw UsageError("n_ph below the spontaneous floor sinh^2 g = " + format_number(s * s));
    }
    return std::sqrt((n_ph - s * s) / (c * c));
}

/// params with the axis set to value.
inline InterferometerParams set_axis(const InterferometerParams& p, const std::string& axis, double value) {
    try {
        if (axis == "phi") {
            return p.with_phi(value);
        }
        if (axis == "T") {
            return p.with_loss(LossParams(value, p.loss.gamma_tau()));
        }
        if (axis == "gamma_tau") {
            return p.with_loss(LossParams(p.loss.transmissivity(), value));
        }
        if (axis == "alpha_mag") {
            return p.with_input(CoherentInput(value, p.input.theta_alpha()));
        }
        if (axis == "n_ph") {
            return p.with_input(CoherentInput(alpha_for_n_ph(value, p.rp1.g()), p.input.theta_alpha()));
        }
    } catch (const DomainError& e) {
        throw UsageError(axis + " = " + format_number(value) + ": " + e.what());
    }
    throw UsageError("unknown sweep axis '" + axis + "'");
}

struct SweepSpec {
    std::string axis = "phi";
    double lo = -1.0;
    double hi = 1.0;
    /// A single point evaluates at lo.
    int points = 101;
    InterferometerParams fixed = InterferometerParams::balanced_setup(2.0, 0.0, CoherentInput(10.0, 0.0), 0.0);
    std::vector<std::string> outputs{"delta_phi_hd", "snr_hd"};
    /// 0 picks the hardware concurrency.
    unsigned threads = 1;

    void validate() const {
        if (std::find(axis_names().begin(), axis_names().end(), axis) == axis_names().end()) {
            throw UsageError("unknown sweep axis '" + axis + "'");
        }
        if (points < 1) {
            throw UsageError("points must be at least 1");
        }
        if (!std::isfinite(lo) || !std::isfinite(hi) || (points > 1 && !(lo < hi))) {
            throw UsageError("sweep needs finite lo < hi");
        }
        if (outputs.empty()) {
            throw UsageError("no metrics requested");
        }
        for (const auto& m : outputs) {
            metric_by_name(m);
        }
    }

    [[nodiscard]] double value_at(int k) const {
        if (points == 1) {
            return lo;
        }
        if (k == points - 1) {
            return hi;
        }
        return lo + (hi - lo) * k / (points - 1);
    }
};

/// One row per grid point, in axis order whatever the thread count.
inline CsvTable run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<MetricFn> metrics;
    std::vector<std::string> header{spec.axis};
    for (const auto& m : spec.outputs) {
        metrics.push_back(metric_by_name(m));
        header.push_back(m);
    }
    // resolve every point before spawning work so bad values surface as usage errors
    std::vector<InterferometerParams> grid;
    for (int k = 0; k < spec.points; ++k) {
        grid.push_back(set_axis(spec.fixed, spec.axis, spec.value_at(k)));
    }

    std::vector<std::vector<double>> values(grid.size());
    const auto fill = [&](std::size_t k) {
        std::vector<double> row{spec.value_at(static_cast<int>(k))};
        for (const auto& f : metrics) {
            row.push_back(f(grid[k]));
        }
        values[k] = std::move(row);
    };

    unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
    if (threads <= 1) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            fill(k);
        }
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t k = t; k < grid.size(); k += threads) {
                        fill(k);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    CsvTable table(header);
    for (const auto& row : values) {
        table.add_row(row);
    }
    return table;
}

/// Caption settings: g = 2, |alpha| = 10, theta1 = 0, balanced.
inline InterferometerParams figure_base(double theta_alpha = 0.0, double phi = 0.0, LossParams loss = {}) {
    return InterferometerParams::balanced_setup(2.0, 0.0, CoherentInput(10.0, theta_alpha), phi, loss);
}

inline const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"2a", "2b", "3a", "3b", "4", "5a", "5b", "6a", "6b", "7a", "7b"};
    return ids;
}

inline constexpr double kFig4PhiHd = 0.0;
inline constexpr double kFig4PhiId = 0.062;
inline constexpr double kFig7Phi = 0.062;

namespace detail {

inline SweepSpec figure_spec(const std::string& axis, double lo, double hi, int points,
                             const InterferometerParams& fixed, std::vector<std::string> outputs) {
    SweepSpec s;
    s.axis = axis;
    s.lo = lo;
    s.hi = hi;
    s.points = points;
    s.fixed = fixed;
    s.outputs = std::move(outputs);
    return s;
}

/// Fig. 4: Delta phi versus n_ph at the caption phases, with and without
/// T = 0.8, gamma_tau = 0.1, and the SQL.
inline CsvTable figure4() {
    const LossParams lossy(0.8, 0.1);
    const InterferometerParams hd = figure_base(kPi / 2.0, kFig4PhiHd);
    const InterferometerParams id = figure_base(0.0, kFig4PhiId);
    CsvTable table({"n_ph", "alpha_mag", "sql", "delta_phi_hd", "delta_phi_hd_lossy", "delta_phi_id",
                    "delta_phi_id_lossy"});
    const int points = 100;
    const double lo = 20.0;
    const double hi = 2000.0;
    for (int k = 0; k < points; ++k) {
        const double n_ph = k == points - 1 ? hi : lo + (hi - lo) * k / (points - 1);
        const auto at = [&](const InterferometerParams& base) { return set_axis(base, "n_ph", n_ph); };
        table.add_row(std::vector<double>{
            n_ph, at(hd).input.alpha_mag(), 1.0 / std::sqrt(n_ph),
            scheme_sensitivity(DetectionScheme::Homodyne, at(hd)),
            scheme_sensitivity(DetectionScheme::Homodyne, at(hd.with_loss(lossy))),
            scheme_sensitivity(DetectionScheme::Intensity, at(id)),
            scheme_sensitivity(DetectionScheme::Intensity, at(id.with_loss(lossy)))});
    }
    return table;
}

} // namespace detail

/// CSV for a figure panel.
inline CsvTable figure(const std::string& id) {
    using detail::figure_spec;
    if (id == "2a") {
        return run_sweep(figure_spec("phi", -1.0, 1.0, 2001, figure_base(kPi / 2.0), {"delta_phi_hd", "snr_hd"}));
    }
    if (id == "2b") {
        return run_sweep(figure_spec("phi", -1.0, 1.0, 2001, figure_base(0.0), {"delta_phi_hd", "snr_hd"}));
    }
    if (id == "3a") {
        return run_sweep(
            figure_spec("phi", -1.0, 1.0, 2001, figure_base(), {"var_n_a2", "slope_n_a2", "delta_phi_id"}));
    }
    if (id == "3b") {
        return run_sweep(figure_spec("phi", -1.0, 1.0, 2001, figure_base(), {"mean_n_a2", "var_n_a2", "snr_id"}));
    }
    if (id == "4") {
        return detail::figure4();
    }
    if (id == "5a") {
        return run_sweep(figure_spec("phi", 0.0, kTwoPi, 721, figure_base(), {"j_x2"}));
    }
    if (id == "5b") {
        return run_sweep(figure_spec("phi", 0.0, kTwoPi, 721, figure_base(), {"j_n2"}));
    }
    if (id == "6a") {
        return run_sweep(figure_spec("T", 0.01, 1.0, 100, figure_base(kPi / 2.0, 0.0), {"j_x2"}));
    }
    if (id == "6b") {
        return run_sweep(figure_spec("gamma_tau", 0.0, 3.0, 101, figure_base(kPi / 2.0, 0.0), {"j_x2"}));
    }
    if (id == "7a") {
        return run_sweep(figure_spec("T", 0.01, 1.0, 100, figure_base(0.0, kFig7Phi), {"j_n2"}));
    }
    if (id == "7b") {
        return run_sweep(figure_spec("gamma_tau", 0.0, 3.0, 101, figure_base(0.0, kFig7Phi), {"j_n2"}));
    }
    throw UsageError("unknown figure id '" + id + "'");
}

/// Plotter-agnostic stub: a matplotlib script reading the CSV.
inline std::string plot_script(const std::string& csv_path) {
    std::string s;
    s += "# plots " + csv_path + "; first column is the x axis\n";
    s += "import csv\nimport matplotlib.pyplot as plt\n\n";
    s += "with open(\"" + csv_path + "\") as f:\n";
    s += "    rows = list(csv.reader(f))\n";
    s += "head, data = rows[0], [[float(c) for c in r] for r in rows[1:]]\n";
    s += "for j in range(1, len(head)):\n";
    s += "    plt.plot([r[0] for r in data], [r[j] for r in data], label=head[j])\n";
    s += "plt.xlabel(head[0])\nplt.legend()\nplt.show()\n";
    return s;
}

} // namespace su11
