#include "raman/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "raman/errors.hpp"

namespace raman {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Bounds {
    double p_min;
    double p_max;
};

Bounds sweep_bounds(const DriveProtocol& protocol) {
    if (const auto* tri = std::get_if<TriangleDrive>(&protocol)) {
        return {tri->p_min, tri->p_max};
    }
    if (const auto* sine = std::get_if<SineDrive>(&protocol)) {
        return {sine->p_min, sine->p_max};
    }
    throw ConfigurationError("loop extraction needs a triangle or sine drive");
}

// Value of a piecewise-linear branch (ascending in .first) at p inside its span.
double interp_branch(const std::vector<std::pair<double, double>>& pts, double p) {
    auto it = std::lower_bound(pts.begin(), pts.end(), p,
                               [](const auto& a, double x) { return a.first < x; });
    if (it == pts.begin()) return it->second;
    if (it == pts.end()) return pts.back().second;
    const auto& [p1, i1] = *std::prev(it);
    const auto& [p2, i2] = *it;
    if (p2 == p1) return i1;
    return i1 + (i2 - i1) * (p - p1) / (p2 - p1);
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? kNaN : s / static_cast<double>(v.size());
}

}  // namespace

HysteresisLoop extract_loop(const TimeSeries& ts, const DriveProtocol& protocol, int bins) {
    const Bounds b = sweep_bounds(protocol);
    if (bins < 1) throw std::invalid_argument("extract_loop requires bins >= 1");
    const double period = *period_us(protocol);
    if (ts.size() < 2) throw std::runtime_error("insufficient data: empty series");
    const double t0 = ts.front().t;
    const double span = ts.back().t - t0;
    const long covered = static_cast<long>(std::floor(span / period + 1e-9));
    if (covered < 2) {
        throw std::runtime_error("insufficient data: series spans fewer than 2 periods");
    }
    // Discard the first (transient) period, keep the remaining whole ones.
    const double win_lo = t0 + period;
    const double win_hi = t0 + static_cast<double>(covered) * period;
    const double eps = 1e-9 * std::max(1.0, std::abs(win_hi));

    struct Acc {
        double sum_p = 0.0;
        double sum_i = 0.0;
        long n = 0;
    };
    std::vector<Acc> up(static_cast<size_t>(bins)), down(static_cast<size_t>(bins));
    const double width = (b.p_max - b.p_min) / static_cast<double>(bins);
    for (const Sample& s : ts) {
        if (s.t < win_lo - eps || s.t > win_hi + eps) continue;
        long k = static_cast<long>(std::floor((s.p1 - b.p_min) / width));
        k = std::clamp(k, 0L, static_cast<long>(bins) - 1);
        Acc& acc = sweep_rate(protocol, s.t) >= 0.0 ? up[static_cast<size_t>(k)]
                                                    : down[static_cast<size_t>(k)];
        acc.sum_p += s.p1;
        acc.sum_i += s.intensity;
        ++acc.n;
    }

    HysteresisLoop loop;
    if (const auto* tri = std::get_if<TriangleDrive>(&protocol)) loop.f_mod_hz = tri->f_mod_hz;
    if (const auto* sine = std::get_if<SineDrive>(&protocol)) loop.f_mod_hz = sine->f_mod_hz;
    for (int k = 0; k < bins; ++k) {
        const Acc& acc = up[static_cast<size_t>(k)];
        if (acc.n > 0) {
            loop.up.emplace_back(acc.sum_p / static_cast<double>(acc.n),
                                 acc.sum_i / static_cast<double>(acc.n));
        }
    }
    for (int k = bins - 1; k >= 0; --k) {
        const Acc& acc = down[static_cast<size_t>(k)];
        if (acc.n > 0) {
            loop.down.emplace_back(acc.sum_p / static_cast<double>(acc.n),
                                   acc.sum_i / static_cast<double>(acc.n));
        }
    }
    if (loop.up.empty() || loop.down.empty()) {
        throw std::runtime_error("insufficient data: a sweep branch has no samples");
    }
    return loop;
}

double loop_area(const HysteresisLoop& loop) {
    if (loop.up.size() < 2 || loop.down.size() < 2) {
        throw std::runtime_error("loop area needs at least 2 points per branch");
    }
    std::vector<std::pair<double, double>> down_asc(loop.down.rbegin(), loop.down.rend());
    const double lo = std::max(loop.up.front().first, down_asc.front().first);
    const double hi = std::min(loop.up.back().first, down_asc.back().first);
    if (!(lo < hi)) {
        throw std::runtime_error("loop branches share no power interval");
    }
    // Union of both branches' breakpoints keeps the trapezoidal rule exact for
    // the piecewise-linear difference.
    std::vector<double> grid;
    grid.push_back(lo);
    for (const auto& [p, i] : loop.up) {
        if (p > lo && p < hi) grid.push_back(p);
    }
    for (const auto& [p, i] : down_asc) {
        if (p > lo && p < hi) grid.push_back(p);
    }
    grid.push_back(hi);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    double area = 0.0;
    double prev_p = grid.front();
    double prev_d = interp_branch(loop.up, prev_p) - interp_branch(down_asc, prev_p);
    for (size_t i = 1; i < grid.size(); ++i) {
        const double p = grid[i];
        const double d = interp_branch(loop.up, p) - interp_branch(down_asc, p);
        area += 0.5 * (d + prev_d) * (p - prev_p);
        prev_p = p;
        prev_d = d;
    }
    return std::abs(area);
}

ThresholdResult detect_thresholds(const HysteresisLoop& loop, double detection_level) {
    if (!(detection_level > 0.0 && detection_level < 1.0)) {
        throw std::invalid_argument("detection_level must lie in (0,1)");
    }
    double peak = 0.0;
    for (const auto& [p, i] : loop.up) peak = std::max(peak, i);
    for (const auto& [p, i] : loop.down) peak = std::max(peak, i);
    if (!(peak > 0.0)) {
        throw std::runtime_error("no generation: loop peak intensity is zero");
    }
    const double level = detection_level * peak;

    // First rising-branch point at or above the level.
    double p_on = kNaN;
    for (size_t i = 0; i < loop.up.size(); ++i) {
        if (loop.up[i].second >= level) {
            if (i == 0) {
                p_on = loop.up[i].first;
            } else {
                const auto& [pa, ia] = loop.up[i - 1];
                const auto& [pb, ib] = loop.up[i];
                p_on = pa + (level - ia) * (pb - pa) / (ib - ia);
            }
            break;
        }
    }
    if (std::isnan(p_on)) {
        throw std::runtime_error("no generation on the rising branch");
    }

    // Last falling-branch point (descending order, so lowest power) above the level.
    double p_off = kNaN;
    size_t last = loop.down.size();
    for (size_t j = 0; j < loop.down.size(); ++j) {
        if (loop.down[j].second >= level) last = j;
    }
    if (last == loop.down.size()) {
        throw std::runtime_error("no generation on the falling branch");
    }
    if (last + 1 == loop.down.size()) {
        p_off = loop.down[last].first;
    } else {
        const auto& [pa, ia] = loop.down[last];
        const auto& [pb, ib] = loop.down[last + 1];
        p_off = pa + (level - ia) * (pb - pa) / (ib - ia);
    }

    return {loop.f_mod_hz, p_on, p_off, detection_level, peak};
}

std::vector<SweepEntry> threshold_sweep(const PhysicalParams& params,
                                        const DriveProtocol& protocol,
                                        const std::vector<double>& f_list_hz,
                                        double detection_level,
                                        const IntegratorConfig& base) {
    if (f_list_hz.empty()) {
        throw std::invalid_argument("threshold_sweep requires a nonempty frequency list");
    }
    for (double f : f_list_hz) {
        if (!(f > 0.0)) throw std::invalid_argument("threshold_sweep frequencies must be > 0");
    }
    sweep_bounds(protocol);  // reject non-periodic templates up front

    std::vector<SweepEntry> entries;
    entries.reserve(f_list_hz.size());
    for (double f : f_list_hz) {
        SweepEntry entry;
        entry.f_mod_hz = f;
        entry.area = kNaN;
        try {
            DriveProtocol drive = protocol;
            if (auto* tri = std::get_if<TriangleDrive>(&drive)) tri->f_mod_hz = f;
            if (auto* sine = std::get_if<SineDrive>(&drive)) sine->f_mod_hz = f;
            const double period = 1e6 / f;

            IntegratorConfig cfg = base;
            // Slow sweeps take the adaptive path to keep runtime bounded.
            cfg.method = f >= 100.0 ? Method::FixedRk4 : Method::AdaptiveRk45;
            cfg.sample_interval = period / 4096.0;

            const IntegrationResult run =
                integrate(params, drive, 3.0 * period, SystemState{}, cfg);
            entry.loop = extract_loop(run.series, drive);
            entry.thresholds = detect_thresholds(*entry.loop, detection_level);
            // A peak at the spontaneous-seed floor means the sweep never
            // ignited; thresholds in that noise are meaningless.
            const double floor = params.s0 / params.kappa;
            if (entry.thresholds->peak_intensity <= 1e6 * floor * floor) {
                throw std::runtime_error(
                    "no generation: loop peak sits at the seed floor");
            }
            entry.area = loop_area(*entry.loop);
        } catch (const std::exception& e) {
            entry.error = e.what();
            entry.loop.reset();
            entry.thresholds.reset();
            entry.area = kNaN;
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

namespace {

struct LinearFit {
    double intercept;
    double slope;
    double r2;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw std::runtime_error("degenerate fit: all abscissae coincide");
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss_res += r * r;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {intercept, slope, r2};
}

std::optional<double> free_exponent(const std::vector<double>& f,
                                    const std::vector<double>& excess) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < f.size(); ++i) {
        if (!(excess[i] > 0.0)) return std::nullopt;
        lx.push_back(std::log(f[i]));
        ly.push_back(std::log(excess[i]));
    }
    return least_squares(lx, ly).slope;
}

}  // namespace

FitResult fit_sqrt_scaling(const std::vector<ThresholdResult>& results) {
    std::vector<double> f, sq, on, off;
    for (const ThresholdResult& r : results) {
        f.push_back(r.f_mod_hz);
        sq.push_back(std::sqrt(r.f_mod_hz));
        on.push_back(r.p_on);
        off.push_back(r.p_off);
    }
    std::vector<double> distinct = f;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 4) {
        throw std::invalid_argument("fit_sqrt_scaling needs >= 4 distinct frequencies");
    }

    const LinearFit fit_on = least_squares(sq, on);
    const LinearFit fit_off = least_squares(sq, off);

    FitResult out;
    out.p_th_on = fit_on.intercept;
    out.p_th_off = fit_off.intercept;
    out.coeff_on = fit_on.slope;
    out.coeff_off = -fit_off.slope;
    out.r2_on = fit_on.r2;
    out.r2_off = fit_off.r2;

    std::vector<double> ex_on, ex_off;
    for (size_t i = 0; i < f.size(); ++i) {
        ex_on.push_back(on[i] - out.p_th_on);
        ex_off.push_back(out.p_th_off - off[i]);
    }
    out.exponent_on = free_exponent(f, ex_on);
    out.exponent_off = free_exponent(f, ex_off);
    return out;
}

Spectrum scan_spectrum(const PhysicalParams& params, double p1,
                       const std::vector<double>& delta_list) {
    if (!(p1 > 0.0)) {
        throw std::domain_error("scan_spectrum requires p1 > 0");
    }
    for (size_t i = 1; i < delta_list.size(); ++i) {
        if (!(delta_list[i] > delta_list[i - 1])) {
            throw std::invalid_argument("delta_list must be strictly increasing");
        }
    }
    Spectrum spectrum;
    spectrum.points.reserve(delta_list.size());
    PhysicalParams scan = params;
    for (double d : delta_list) {
        scan.delta = d;
        spectrum.points.emplace_back(d, steady_state_output(scan, p1));
    }
    return spectrum;
}

SwitchReport switch_metrics(const PhysicalParams& params, const TimeSeries& ts,
                            const PulseTrainDrive& train, double detection_level) {
    if (!(detection_level > 0.0 && detection_level < 1.0)) {
        throw std::invalid_argument("detection_level must lie in (0,1)");
    }
    if (!(train.baseline > 0.0)) {
        throw ConfigurationError("switch baseline must be > 0");
    }
    if (ts.empty()) {
        throw std::runtime_error("switch_metrics requires a nonempty series");
    }
    const double tau = compute_tau_s(params, train.baseline);
    const double settle = 5.0 * tau;
    const double t_end = ts.back().t;
    const double on_ref = steady_state_output(params, train.baseline);
    const double level = detection_level * on_ref;

    const size_t n = train.pulses.size();
    if (n > 0) {
        const Pulse& last = train.pulses.back();
        if (t_end + 1e-9 < last.t_start + last.duration + 10.0 * tau) {
            throw std::runtime_error(
                "series must extend at least 10 tau_s beyond the last pulse");
        }
    }

    // Judge window after pulse k: settled part of the gap to the next pulse.
    struct Window {
        double lo, hi;
    };
    std::vector<Window> windows;
    Window pre{ts.front().t, n > 0 ? train.pulses.front().t_start : t_end};
    for (size_t k = 0; k < n; ++k) {
        const double end = train.pulses[k].t_start + train.pulses[k].duration;
        const double next = k + 1 < n ? train.pulses[k + 1].t_start : t_end;
        if (next - end <= settle) {
            throw ConfigurationError(
                "gap after a pulse is shorter than the 5 tau_s settling window");
        }
        windows.push_back({end + settle, next});
    }

    const auto window_stats = [&](const Window& w) {
        std::vector<double> vals;
        for (const Sample& s : ts) {
            if (s.t >= w.lo && s.t < w.hi) vals.push_back(s.intensity);
        }
        if (vals.empty()) {
            throw std::runtime_error("a judge window contains no samples");
        }
        return mean(vals);
    };
    const auto is_on = [&](double mean_intensity) {
        return on_ref > 0.0 && mean_intensity >= level;
    };

    SwitchReport report;
    report.on_reference = on_ref;
    report.detection_level = detection_level;

    double on_sum = 0.0, off_sum = 0.0;
    long on_n = 0, off_n = 0;
    const auto pool = [&](const Window& w, bool on) {
        for (const Sample& s : ts) {
            if (s.t >= w.lo && s.t < w.hi) {
                (on ? on_sum : off_sum) += s.intensity;
                ++(on ? on_n : off_n);
            }
        }
    };

    const double pre_mean = pre.hi > pre.lo ? window_stats(pre) : 0.0;
    bool state = is_on(pre_mean);
    if (pre.hi > pre.lo) pool(pre, state);

    for (size_t k = 0; k < n; ++k) {
        const Pulse& pulse = train.pulses[k];
        const double m = window_stats(windows[k]);
        const bool after = is_on(m);
        PulseRecord rec;
        rec.pulse = static_cast<int>(k);
        rec.is_on_pulse = pulse.level > train.baseline;
        rec.state_before = state;
        rec.state_after = after;
        rec.transition_us = kNaN;
        if (after != state) {
            // First level crossing in the labeled direction after pulse start.
            const double search_hi = windows[k].hi;
            const Sample* prev = nullptr;
            for (const Sample& s : ts) {
                if (s.t < pulse.t_start || s.t >= search_hi) {
                    if (s.t >= search_hi) break;
                    continue;
                }
                const bool crossed = after ? s.intensity >= level : s.intensity < level;
                if (crossed) {
                    double tc = s.t;
                    if (prev != nullptr && s.intensity != prev->intensity) {
                        tc = prev->t + (level - prev->intensity) * (s.t - prev->t) /
                                           (s.intensity - prev->intensity);
                    }
                    rec.transition_us = tc - (pulse.t_start + pulse.duration);
                    break;
                }
                prev = &s;
            }
        }
        report.pulses.push_back(rec);
        pool(windows[k], after);
        state = after;
    }

    if (on_n > 0 && off_n > 0) {
        report.contrast = (on_sum / static_cast<double>(on_n)) /
                          (off_sum / static_cast<double>(off_n));
    } else if (on_n > 0) {
        report.contrast = std::numeric_limits<double>::infinity();
    } else {
        report.contrast = 1.0;  // no on-state anywhere
    }
    return report;
}

}  // namespace raman
