#pragma once

// su11 command line: sens, snr, lcc, sweep, figure, verify.
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "su11/su11.hpp"

namespace su11::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Values from the config file and parameter flags; flags win.
struct ParamValues {
    std::map<std::string, double> values{{"g", 2.0},         {"theta1", 0.0}, {"alpha_mag", 10.0},
                                         {"theta_alpha", 0.0}, {"phi", 0.0},    {"T", 1.0},
                                         {"gamma_tau", 0.0}, {"cutoff", 0.0}};
    /// Unset means theta1 + pi.
    std::optional<double> theta2;

    void set(const std::string& key, double v) {
        if (key == "theta2") {
            theta2 = v;
            return;
        }
        if (!values.count(key)) {
            throw UsageError("unknown parameter '" + key + "'");
        }
        values[key] = v;
    }

    [[nodiscard]] InterferometerParams params() const {
        try {
            const double g = values.at("g");
            const double theta1 = values.at("theta1");
            return {RamanGain(g, theta1), RamanGain(g, theta2.value_or(theta1 + kPi)),
                    CoherentInput(values.at("alpha_mag"), values.at("theta_alpha")), values.at("phi"),
                    LossParams(values.at("T"), values.at("gamma_tau"))};
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }

    [[nodiscard]] int cutoff() const {
        const double c = values.at("cutoff");
        if (c < 0.0 || c != std::floor(c)) {
            throw UsageError("cutoff must be a non-negative integer");
        }
        return static_cast<int>(c);
    }
};

inline double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad number for " + what + ": '" + text + "'");
    }
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/// Flat key=value lines; '#' starts a comment.
inline void load_config(const std::string& path, ParamValues& into) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config " + path);
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        into.set(key, parse_number(trim(line.substr(eq + 1)), key));
    }
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

class Output {
  public:
    Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw UsageError("cannot write " + path);
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

  private:
    std::ofstream file_;
    std::ostream& fallback_;
};

inline CsvTable sens_table(const InterferometerParams& p) {
    CsvTable t({"scheme", "delta_phi", "snr", "n_ph", "sql", "beats_sql"});
    for (DetectionScheme s : {DetectionScheme::Homodyne, DetectionScheme::Intensity}) {
        const ObservableStats stats = observable_stats(p, detected_observable(s));
        const double dphi = sensitivity(stats);
        const double n_ph = phase_sensing_number(p);
        const double sql = 1.0 / std::sqrt(n_ph);
        t.add_row({s == DetectionScheme::Homodyne ? "hd" : "id", format_number(dphi),
                   format_number(stats.variance > 0.0 ? snr(stats) : std::nan("")), format_number(n_ph),
                   format_number(sql), dphi < sql ? "1" : "0"});
    }
    return t;
}

inline CsvTable lcc_table(const InterferometerParams& p) {
    const Rp1Correlations rp1 = j_rp1(p.rp1.g(), p.rp1.theta(), p.input.alpha_mag());
    CsvTable t({"j_x2", "j_n2", "jx1", "jy1", "jn1"});
    t.add_row(std::vector<double>{j_x2(p).j_value, j_n2(p).j_value, rp1.jx1, rp1.jy1, rp1.jn1});
    return t;
}

inline void write_verify_summary(std::ostream& os, const VerifyOptions& opt, const VerifyResult& r) {
    std::ostringstream head;
    head << "verify: tol=" << format_number(opt.tolerance) << " max_g=" << format_number(opt.max_g)
         << " max_alpha=" << format_number(opt.max_alpha) << "\n";
    os << head.str();
    for (const auto& c : r.checks) {
        if (c.status == CheckStatus::Fail || c.status == CheckStatus::Truncation) {
            os << "  " << status_token(c.status) << " " << c.quantity << " at g=" << format_number(c.g)
               << " alpha=" << format_number(c.alpha_mag) << " T=" << format_number(c.T)
               << " gamma_tau=" << format_number(c.gamma_tau) << " phi=" << format_number(c.phi)
               << ": closed " << format_number(c.closed) << " oracle " << format_number(c.oracle) << "\n";
        }
    }
    os << "passed " << r.passed << ", failed " << r.failed << ", truncation " << r.truncated << ", skipped "
       << r.skipped << "; state cutoff <= " << r.max_state_cutoff << ", output cutoff <= " << r.max_output_cutoff
       << "; " << format_number(r.seconds) << " s\n";
    os << (r.ok() ? "verify: PASS\n" : "verify: FAIL\n");
}

/// Runs the CLI on argv-style arguments (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lossy atom-light SU(1,1) interferometer: sensitivities, correlations, sweeps"};
    app.name("su11");
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    app.add_option("--config", config_path, "flat key=value parameter file");
    app.add_option("--out", out_path, "output path (default stdout)");

    std::map<std::string, std::string> flags;
    for (const char* key : {"g", "theta1", "theta2", "alpha_mag", "theta_alpha", "phi", "T", "gamma_tau", "cutoff"}) {
        app.add_option(std::string("--") + key, flags[key], std::string("parameter ") + key);
    }

    auto* sens = app.add_subcommand("sens", "phase sensitivity of both detection schemes");
    auto* snr_cmd = app.add_subcommand("snr", "signal-to-noise ratios");
    auto* lcc_cmd = app.add_subcommand("lcc", "linear correlation coefficients");

    auto* sweep = app.add_subcommand("sweep", "one-axis parameter sweep to CSV");
    SweepSpec spec;
    std::string metrics = "delta_phi_hd,snr_hd";
    sweep->add_option("--axis", spec.axis, "phi, T, gamma_tau, n_ph or alpha_mag");
    sweep->add_option("--lo", spec.lo);
    sweep->add_option("--hi", spec.hi);
    sweep->add_option("--points", spec.points);
    sweep->add_option("--metrics", metrics, "comma-separated metric names");
    sweep->add_option("--threads", spec.threads, "worker threads, 0 = all cores");

    auto* fig = app.add_subcommand("figure", "figure reproduction recipe");
    std::string fig_id;
    std::string plot_path;
    fig->add_option("id", fig_id, "2a 2b 3a 3b 4 5a 5b 6a 6b 7a 7b")->required();
    fig->add_option("--plot-script", plot_path, "also write a matplotlib stub reading the CSV");

    auto* verify = app.add_subcommand("verify", "closed forms against the Fock-space oracle");
    VerifyOptions vopt;
    verify->add_option("--tol", vopt.tolerance, "relative tolerance");
    verify->add_option("--max-g", vopt.max_g);
    verify->add_option("--max-alpha", vopt.max_alpha);
    verify->add_option("--budget", vopt.budget, "oracle truncation budget");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "su11: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        ParamValues pv;
        if (!config_path.empty()) {
            load_config(config_path, pv);
        }
        for (const auto& [key, text] : flags) {
            if (!text.empty()) {
                pv.set(key, parse_number(text, key));
            }
        }
        const InterferometerParams params = pv.params();

        if (sens->parsed()) {
            Output o(out_path, out);
            sens_table(params).write(o.stream());
        } else if (snr_cmd->parsed()) {
            Output o(out_path, out);
            CsvTable t({"snr_hd", "snr_id"});
            t.add_row(std::vector<double>{metric_by_name("snr_hd")(params), metric_by_name("snr_id")(params)});
            t.write(o.stream());
        } else if (lcc_cmd->parsed()) {
            Output o(out_path, out);
            lcc_table(params).write(o.stream());
        } else if (sweep->parsed()) {
            spec.fixed = params;
            spec.outputs = split_list(metrics);
            const CsvTable t = run_sweep(spec);
            Output o(out_path, out);
            t.write(o.stream());
        } else if (fig->parsed()) {
            const CsvTable t = figure(fig_id);
            Output o(out_path, out);
            t.write(o.stream());
            if (!plot_path.empty()) {
                std::ofstream script(plot_path, std::ios::binary);
                if (!script) {
                    throw UsageError("cannot write " + plot_path);
                }
                script << plot_script(out_path.empty() ? "figure_" + fig_id + ".csv" : out_path);
            }
        } else if (verify->parsed()) {
            vopt.cutoff = pv.cutoff();
            const VerifyResult r = run_verify(vopt);
            if (!out_path.empty()) {
                Output o(out_path, out);
                r.table().write(o.stream());
            }
            write_verify_summary(out, vopt, r);
            return r.ok() ? kExitOk : kExitFailure;
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "su11: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "su11: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace su11::cli
