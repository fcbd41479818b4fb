#include "raman/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "raman/analysis.hpp"
#include "raman/csv.hpp"
#include "raman/svg.hpp"

namespace raman {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double auto_t_end(const RunConfig& cfg) {
    if (cfg.t_end > 0.0) return cfg.t_end;
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, TriangleDrive> || std::is_same_v<T, SineDrive>) {
                return 3e6 / d.f_mod_hz;  // two analysis periods after the transient one
            } else if constexpr (std::is_same_v<T, ConstantDrive>) {
                return d.p > 0.0 ? std::max(500.0, 10.0 * compute_tau_s(cfg.params, d.p))
                                 : 500.0;
            } else {
                double tail = 500.0;
                if (d.baseline > 0.0) tail = 12.0 * compute_tau_s(cfg.params, d.baseline);
                double last_end = 0.0;
                for (const Pulse& pulse : d.pulses) {
                    last_end = std::max(last_end, pulse.t_start + pulse.duration);
                }
                return last_end + tail;
            }
        },
        cfg.drive);
}

std::string trace_csv(const TimeSeries& series) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(series.size());
    for (const Sample& s : series) {
        rows.push_back({csv_number(s.t), csv_number(s.p1), csv_number(s.q), csv_number(s.a),
                        csv_number(s.intensity)});
    }
    return csv_document("t_us,p1_mW,q,a,intensity", rows);
}

std::vector<std::pair<double, double>> column(const TimeSeries& series,
                                              double Sample::* field) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(series.size());
    for (const Sample& s : series) pts.emplace_back(s.t, s.*field);
    return pts;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_index(const std::string& dir, const std::vector<std::string>& files) {
    std::string content;
    for (const std::string& f : files) {
        content += f;
        content += '\n';
    }
    write_file(dir, "index.txt", content);
}

// Joint power grid for a loop CSV: 500 bin centers spanning the sweep range,
// with the per-branch bin means where a branch visited the bin.
std::string loop_csv(const HysteresisLoop& loop, double p_min, double p_max, int bins) {
    const double width = (p_max - p_min) / static_cast<double>(bins);
    std::vector<double> up(static_cast<size_t>(bins), kNaN);
    std::vector<double> down(static_cast<size_t>(bins), kNaN);
    const auto bin_of = [&](double p) {
        return static_cast<size_t>(
            std::clamp(static_cast<long>(std::floor((p - p_min) / width)), 0L,
                       static_cast<long>(bins) - 1));
    };
    for (const auto& [p, i] : loop.up) up[bin_of(p)] = i;
    for (const auto& [p, i] : loop.down) down[bin_of(p)] = i;

    std::vector<std::vector<std::string>> rows;
    for (int k = 0; k < bins; ++k) {
        const auto ku = static_cast<size_t>(k);
        if (std::isnan(up[ku]) && std::isnan(down[ku])) continue;
        const double center = p_min + (static_cast<double>(k) + 0.5) * width;
        rows.push_back({csv_number(center), csv_number(up[ku]), csv_number(down[ku])});
    }
    return csv_document("p1_mW,intensity_up,intensity_down", rows);
}

struct SweepOutput {
    std::vector<std::string> files;
    std::vector<SweepEntry> entries;
    bool any_success = false;
};

SweepOutput run_sweep_and_write(const RunConfig& cfg, const std::vector<double>& f_list) {
    SweepOutput out;
    out.entries = threshold_sweep(cfg.params, cfg.drive, f_list, cfg.detection_level,
                                  cfg.integrator);

    double p_min = 0.0, p_max = 1.0;
    if (const auto* tri = std::get_if<TriangleDrive>(&cfg.drive)) {
        p_min = tri->p_min;
        p_max = tri->p_max;
    } else if (const auto* sine = std::get_if<SineDrive>(&cfg.drive)) {
        p_min = sine->p_min;
        p_max = sine->p_max;
    }

    std::vector<std::vector<std::string>> rows;
    for (const SweepEntry& entry : out.entries) {
        if (entry.thresholds.has_value()) {
            out.any_success = true;
            const ThresholdResult& r = *entry.thresholds;
            rows.push_back({csv_number(entry.f_mod_hz), csv_number(r.p_on),
                            csv_number(r.p_off), csv_number(r.p_on - r.p_off),
                            csv_number(entry.area)});
            const std::string name = "loops_" + csv_number(entry.f_mod_hz) + ".csv";
            write_file(cfg.out_dir, name, loop_csv(*entry.loop, p_min, p_max, 500));
            out.files.push_back(name);
            if (cfg.plots) {
                SvgPanel panel;
                panel.title = "hysteresis loop, " + csv_number(entry.f_mod_hz) + " Hz";
                panel.x_label = "p1 [mW]";
                panel.y_label = "intensity";
                panel.series.push_back({entry.loop->up, "#d62728", false});
                panel.series.push_back({entry.loop->down, "#1f77b4", false});
                const std::string svg_name =
                    "loops_" + csv_number(entry.f_mod_hz) + ".svg";
                write_file(cfg.out_dir, svg_name, render_svg({panel}));
                out.files.push_back(svg_name);
            }
        } else {
            rows.push_back({csv_number(entry.f_mod_hz), "nan", "nan", "nan", "nan",
                            quote(entry.error)});
        }
    }
    write_file(cfg.out_dir, "thresholds.csv",
               csv_document("f_mod_Hz,p_on_mW,p_off_mW,width_mW,area", rows));
    out.files.push_back("thresholds.csv");
    return out;
}

void write_threshold_plot(const RunConfig& cfg, const std::vector<SweepEntry>& entries,
                          const FitResult* fit, std::vector<std::string>& files) {
    if (!cfg.plots) return;
    SvgPanel panel;
    panel.title = "onset/extinction power vs sqrt(f_mod)";
    panel.x_label = "sqrt(f_mod) [sqrt(Hz)]";
    panel.y_label = "p1 [mW]";
    SvgSeries on{{}, "#d62728", false}, off{{}, "#1f77b4", false};
    double x_max = 0.0;
    for (const SweepEntry& e : entries) {
        if (!e.thresholds.has_value()) continue;
        const double x = std::sqrt(e.f_mod_hz);
        on.points.emplace_back(x, e.thresholds->p_on);
        off.points.emplace_back(x, e.thresholds->p_off);
        x_max = std::max(x_max, x);
    }
    panel.series.push_back(on);
    panel.series.push_back(off);
    if (fit != nullptr) {
        SvgSeries fit_on{{}, "#d62728", true}, fit_off{{}, "#1f77b4", true};
        for (double x = 0.0; x <= x_max; x += x_max / 64.0) {
            fit_on.points.emplace_back(x, fit->p_th_on + fit->coeff_on * x);
            fit_off.points.emplace_back(x, fit->p_th_off - fit->coeff_off * x);
        }
        panel.series.push_back(fit_on);
        panel.series.push_back(fit_off);
    }
    write_file(cfg.out_dir, "thresholds.svg", render_svg({panel}));
    files.push_back("thresholds.svg");
}

}  // namespace

int run_simulate(const RunConfig& cfg) {
    const double t_end = auto_t_end(cfg);
    const IntegrationResult run = integrate(cfg.params, cfg.drive, t_end,
                                            SystemState{0.0, cfg.init_a, cfg.init_q},
                                            cfg.integrator);
    std::vector<std::string> files;
    write_file(cfg.out_dir, "trace.csv", trace_csv(run.series));
    files.push_back("trace.csv");
    if (cfg.plots) {
        SvgPanel top{"intensity", "t [us]", "intensity",
                     {{column(run.series, &Sample::intensity), "#d62728", false}}};
        SvgPanel bottom{"pump power", "t [us]", "p1 [mW]",
                        {{column(run.series, &Sample::p1), "#1f77b4", false}}};
        write_file(cfg.out_dir, "trace.svg", render_svg({top, bottom}));
        files.push_back("trace.svg");
    }
    write_index(cfg.out_dir, files);
    return 0;
}

int run_hysteresis(const RunConfig& cfg) {
    const std::vector<double> f_list =
        cfg.f_list.value_or(std::vector<double>{10.0, 150.0, 1200.0, 4000.0});
    SweepOutput out = run_sweep_and_write(cfg, f_list);

    std::vector<ThresholdResult> ok;
    for (const SweepEntry& e : out.entries) {
        if (e.thresholds.has_value()) ok.push_back(*e.thresholds);
    }
    std::vector<double> distinct;
    for (const ThresholdResult& r : ok) distinct.push_back(r.f_mod_hz);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() >= 4) {
        const FitResult fit = fit_sqrt_scaling(ok);
        write_threshold_plot(cfg, out.entries, &fit, out.files);
    } else {
        write_threshold_plot(cfg, out.entries, nullptr, out.files);
    }

    for (const SweepEntry& e : out.entries) {
        if (!e.error.empty()) {
            std::cerr << "hysteresis: " << csv_number(e.f_mod_hz) << " Hz failed: " << e.error
                      << "\n";
        }
    }
    write_index(cfg.out_dir, out.files);
    return out.any_success ? 0 : 1;
}

int run_spectrum(const RunConfig& cfg) {
    std::vector<double> deltas;
    if (cfg.delta_list.has_value()) {
        deltas = *cfg.delta_list;
    } else {
        for (int k = 0; k <= 240; ++k) deltas.push_back(static_cast<double>(k) * 0.05);
    }
    double p1 = 2.0;
    if (const auto* c = std::get_if<ConstantDrive>(&cfg.drive)) p1 = c->p;

    const Spectrum spectrum = scan_spectrum(cfg.params, p1, deltas);
    std::vector<std::vector<std::string>> rows;
    for (const auto& [d, i] : spectrum.points) {
        rows.push_back({csv_number(d), csv_number(i)});
    }
    std::vector<std::string> files;
    write_file(cfg.out_dir, "spectrum.csv", csv_document("delta_GHz,intensity", rows));
    files.push_back("spectrum.csv");
    if (cfg.plots) {
        SvgPanel panel{"steady output vs pump detuning", "delta [GHz]", "intensity",
                       {{spectrum.points, "#1f77b4", false}}};
        write_file(cfg.out_dir, "spectrum.svg", render_svg({panel}));
        files.push_back("spectrum.svg");
    }
    write_index(cfg.out_dir, files);
    return 0;
}

int run_switch(const RunConfig& cfg) {
    PulseTrainDrive train;
    if (const auto* t = std::get_if<PulseTrainDrive>(&cfg.drive)) {
        train = *t;
    } else {
        train = default_switch_train();
    }
    RunConfig run_cfg = cfg;
    run_cfg.drive = train;
    const double t_end = auto_t_end(run_cfg);

    const IntegrationResult run = integrate(cfg.params, run_cfg.drive, t_end,
                                            SystemState{0.0, cfg.init_a, cfg.init_q},
                                            cfg.integrator);
    const SwitchReport report = switch_metrics(cfg.params, run.series, train,
                                               cfg.detection_level);

    std::vector<std::vector<std::string>> rows;
    for (const PulseRecord& r : report.pulses) {
        rows.push_back({std::to_string(r.pulse), r.is_on_pulse ? "on" : "off",
                        r.state_before ? "on" : "off", r.state_after ? "on" : "off",
                        csv_number(r.transition_us)});
    }
    std::vector<std::string> files;
    write_file(cfg.out_dir, "switch.csv",
               csv_document("pulse,kind,state_before,state_after,transition_us", rows));
    files.push_back("switch.csv");
    write_file(cfg.out_dir, "switch_summary.csv",
               csv_document("contrast,on_reference_intensity,detection_level",
                            {{csv_number(report.contrast), csv_number(report.on_reference),
                              csv_number(report.detection_level)}}));
    files.push_back("switch_summary.csv");
    write_file(cfg.out_dir, "switch_trace.csv", trace_csv(run.series));
    files.push_back("switch_trace.csv");
    if (cfg.plots) {
        SvgPanel top{"intensity", "t [us]", "intensity",
                     {{column(run.series, &Sample::intensity), "#d62728", false}}};
        SvgPanel bottom{"pump power", "t [us]", "p1 [mW]",
                        {{column(run.series, &Sample::p1), "#1f77b4", false}}};
        write_file(cfg.out_dir, "switch.svg", render_svg({top, bottom}));
        files.push_back("switch.svg");
    }
    write_index(cfg.out_dir, files);
    return 0;
}

int run_fit(const RunConfig& cfg) {
    std::vector<double> f_list;
    if (cfg.f_list.has_value()) {
        f_list = *cfg.f_list;
    } else {
        // 8 frequencies, log-spaced over 100 Hz .. 4 kHz with exact endpoints.
        const double ratio = std::log(4000.0 / 100.0);
        f_list.push_back(100.0);
        for (int k = 1; k < 7; ++k) {
            f_list.push_back(100.0 * std::exp(ratio * static_cast<double>(k) / 7.0));
        }
        f_list.push_back(4000.0);
    }
    SweepOutput out = run_sweep_and_write(cfg, f_list);

    std::vector<ThresholdResult> ok;
    for (const SweepEntry& e : out.entries) {
        if (e.thresholds.has_value()) ok.push_back(*e.thresholds);
    }
    const FitResult fit = fit_sqrt_scaling(ok);  // throws when < 4 distinct survived

    write_file(cfg.out_dir, "fit.csv",
               csv_document("branch,p_th_mW,coeff,r2",
                            {{"on", csv_number(fit.p_th_on), csv_number(fit.coeff_on),
                              csv_number(fit.r2_on)},
                             {"off", csv_number(fit.p_th_off), csv_number(fit.coeff_off),
                              csv_number(fit.r2_off)}}));
    out.files.push_back("fit.csv");
    write_file(cfg.out_dir, "exponents.csv",
               csv_document("branch,exponent",
                            {{"on", csv_number(fit.exponent_on.value_or(kNaN))},
                             {"off", csv_number(fit.exponent_off.value_or(kNaN))}}));
    out.files.push_back("exponents.csv");

    // Closed-form square-root coefficient for context (comparison is informational).
    const double p_th = static_threshold(cfg.params);
    const double predicted = 0.5 * p_th * std::sqrt(compute_tau_s(cfg.params, p_th) * 1e-6);
    std::cout << "sqrt-f fit: on coeff " << csv_number(fit.coeff_on) << " (x"
              << csv_number(fit.coeff_on / predicted) << " of closed form), off coeff "
              << csv_number(fit.coeff_off) << " (x" << csv_number(fit.coeff_off / predicted)
              << "), closed form " << csv_number(predicted) << " mW/sqrt(Hz)\n";
    std::cout << "intercepts: on " << csv_number(fit.p_th_on) << " mW, off "
              << csv_number(fit.p_th_off) << " mW, difference "
              << csv_number(fit.p_th_on - fit.p_th_off) << " mW\n";

    write_threshold_plot(cfg, out.entries, &fit, out.files);
    write_index(cfg.out_dir, out.files);
    return 0;
}

}  // namespace raman
