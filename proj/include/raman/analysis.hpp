#ifndef RAMAN_ANALYSIS_HPP
#define RAMAN_ANALYSIS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "raman/dynamics.hpp"

namespace raman {

// Cycle-averaged up/down sweep branches of (p1, intensity).
struct HysteresisLoop {
    double f_mod_hz = 0.0;
    std::vector<std::pair<double, double>> up;    // ascending in p1
    std::vector<std::pair<double, double>> down;  // descending in p1
};

struct ThresholdResult {
    double f_mod_hz;
    double p_on;             // mW, onset on the rising branch
    double p_off;            // mW, extinction on the falling branch
    double detection_level;  // fraction of peak, in (0,1)
    double peak_intensity;
};

struct FitResult {
    double p_th_on;    // fitted intercept of the rising-branch thresholds, mW
    double p_th_off;   // fitted intercept of the falling-branch thresholds, mW
    double coeff_on;   // mW/sqrt(Hz)
    double coeff_off;  // mW/sqrt(Hz)
    double r2_on;
    double r2_off;
    // Free power-law exponents from log-log regression against the fitted
    // intercepts; absent when a residual is non-positive.
    std::optional<double> exponent_on;
    std::optional<double> exponent_off;
};

struct Spectrum {
    std::vector<std::pair<double, double>> points;  // (delta GHz, intensity), ascending
};

struct PulseRecord {
    int pulse;              // index in the train
    bool is_on_pulse;       // level above baseline
    bool state_before;      // generation on before the pulse
    bool state_after;       // generation on in the window after the pulse
    double transition_us;   // crossing time minus pulse end; NaN if no flip
};

struct SwitchReport {
    std::vector<PulseRecord> pulses;
    double contrast;         // mean on-window intensity / mean off-window intensity
    double on_reference;     // closed-form steady output at the baseline power
    double detection_level;  // fraction of on_reference separating on from off
};

struct SweepEntry {
    double f_mod_hz;
    std::optional<HysteresisLoop> loop;
    std::optional<ThresholdResult> thresholds;
    double area;        // NaN when the frequency failed
    std::string error;  // empty on success
};

// Splits a triangle or sine run into rising/falling branches by sweep sign,
// discards the first period, keeps the remaining whole periods, and averages
// intensity over cycles in `bins` equal power bins (each emitted point is the
// in-bin mean of p1 and of intensity; empty bins are skipped).
// Throws ConfigurationError for non-periodic drives, std::runtime_error when
// the series spans fewer than two periods.
HysteresisLoop extract_loop(const TimeSeries& ts, const DriveProtocol& protocol,
                            int bins = 500);

// |closed-loop integral of intensity dP1| over the power interval covered by
// both branches (piecewise-linear branches, trapezoidal rule).
// Throws std::runtime_error when the branches share no interval.
double loop_area(const HysteresisLoop& loop);

// Onset and extinction powers at intensity = detection_level * peak:
// p_on is the first rising-branch crossing, p_off the last falling-branch
// point above the level (both linearly interpolated between bin points).
// Throws std::runtime_error when a branch never reaches the level.
ThresholdResult detect_thresholds(const HysteresisLoop& loop, double detection_level);

// Full pipeline (integrate, extract_loop, detect_thresholds, loop_area) for
// each frequency with otherwise identical settings: 3 periods from a cold
// start, sampled 4096 times per period, fixed RK4 (base.dt) at or above
// 100 Hz and adaptive RK45 (base tolerances) below. A loop whose peak stays
// within 1e6x of the seed-floor intensity (s0/kappa)^2 counts as
// "no generation". Per-frequency failures are captured in the entry's error
// string instead of propagating.
std::vector<SweepEntry> threshold_sweep(const PhysicalParams& params,
                                        const DriveProtocol& protocol,
                                        const std::vector<double>& f_list_hz,
                                        double detection_level,
                                        const IntegratorConfig& base = {});

// Two independent 2-parameter least-squares fits in sqrt(f):
// p_on = p_th_on + coeff_on*sqrt(f) and p_off = p_th_off - coeff_off*sqrt(f),
// with per-branch R^2 and optional free log-log exponents.
// Requires >= 4 distinct frequencies.
FitResult fit_sqrt_scaling(const std::vector<ThresholdResult>& results);

// Closed-form steady output versus pump detuning at fixed power p1 > 0.
// delta_list must be strictly increasing.
Spectrum scan_spectrum(const PhysicalParams& params, double p1,
                       const std::vector<double>& delta_list);

// Classifies the generation state in the gaps between pulses, excluding
// 5*tau_s(baseline) of settling after each pulse edge. States are judged
// against detection_level * steady_state_output(baseline). transition_us
// measures from pulse end to the level crossing (negative when the state
// flips while the pulse is still applied).
// Throws ConfigurationError when a gap is shorter than the settling window;
// std::runtime_error when the series ends less than 10*tau_s after the last
// pulse.
SwitchReport switch_metrics(const PhysicalParams& params, const TimeSeries& ts,
                            const PulseTrainDrive& train, double detection_level);

}  // namespace raman

#endif  // RAMAN_ANALYSIS_HPP
