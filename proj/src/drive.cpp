#include "raman/drive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace raman {

namespace {

constexpr double kHzToPerUs = 1e-6;  // cycles/us per Hz

// Position inside the cycle, in [0, 1).
double cycle_fraction(double f_mod_hz, double phase, double t_us) {
    const double u = std::fmod(t_us * f_mod_hz * kHzToPerUs + phase, 1.0);
    return u < 0.0 ? u + 1.0 : u;
}

void check_periodic(double p_min, double p_max, double f_mod_hz, double phase) {
    if (!(p_min >= 0.0)) throw std::invalid_argument("drive powers must be >= 0");
    if (!(p_min < p_max)) throw std::invalid_argument("drive requires p_min < p_max");
    if (!(f_mod_hz > 0.0)) throw std::invalid_argument("drive requires f_mod > 0");
    if (!(phase >= 0.0 && phase < 1.0)) throw std::invalid_argument("drive phase must lie in [0,1)");
}

}  // namespace

void validate(const DriveProtocol& protocol) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDrive>) {
                if (!(d.p >= 0.0)) throw std::invalid_argument("drive powers must be >= 0");
            } else if constexpr (std::is_same_v<T, TriangleDrive> || std::is_same_v<T, SineDrive>) {
                check_periodic(d.p_min, d.p_max, d.f_mod_hz, d.phase);
            } else {
                if (!(d.baseline >= 0.0)) throw std::invalid_argument("drive powers must be >= 0");
                double prev_end = -1.0;
                for (const Pulse& pulse : d.pulses) {
                    if (!(pulse.level >= 0.0)) throw std::invalid_argument("drive powers must be >= 0");
                    if (!(pulse.t_start >= 0.0)) throw std::invalid_argument("pulse t_start must be >= 0");
                    if (!(pulse.duration > 0.0)) throw std::invalid_argument("pulse duration must be > 0");
                    if (pulse.t_start < prev_end) {
                        throw std::invalid_argument("pulses must be sorted and non-overlapping");
                    }
                    prev_end = pulse.t_start + pulse.duration;
                }
            }
        },
        protocol);
}

double evaluate(const DriveProtocol& protocol, double t_us) {
    return std::visit(
        [t_us](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDrive>) {
                return d.p;
            } else if constexpr (std::is_same_v<T, TriangleDrive>) {
                const double u = cycle_fraction(d.f_mod_hz, d.phase, t_us);
                const double span = d.p_max - d.p_min;
                return u < 0.5 ? d.p_min + span * 2.0 * u
                               : d.p_max - span * 2.0 * (u - 0.5);
            } else if constexpr (std::is_same_v<T, SineDrive>) {
                const double theta =
                    2.0 * std::numbers::pi * (t_us * d.f_mod_hz * kHzToPerUs + d.phase);
                return d.p_min + (d.p_max - d.p_min) * 0.5 * (1.0 - std::cos(theta));
            } else {
                // Pulses are sorted: find the last pulse starting at or before t.
                auto it = std::upper_bound(
                    d.pulses.begin(), d.pulses.end(), t_us,
                    [](double t, const Pulse& pulse) { return t < pulse.t_start; });
                if (it != d.pulses.begin()) {
                    const Pulse& pulse = *std::prev(it);
                    if (t_us < pulse.t_start + pulse.duration) return pulse.level;
                }
                return d.baseline;
            }
        },
        protocol);
}

double sweep_rate(const DriveProtocol& protocol, double t_us) {
    return std::visit(
        [t_us](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, TriangleDrive>) {
                const double u = cycle_fraction(d.f_mod_hz, d.phase, t_us);
                const double slope = 2.0 * (d.p_max - d.p_min) * d.f_mod_hz * kHzToPerUs;
                // Right-hand derivative: the rising branch owns u = 0, the
                // falling branch owns u = 0.5.
                return u < 0.5 ? slope : -slope;
            } else if constexpr (std::is_same_v<T, SineDrive>) {
                const double theta =
                    2.0 * std::numbers::pi * (t_us * d.f_mod_hz * kHzToPerUs + d.phase);
                return (d.p_max - d.p_min) * std::numbers::pi * d.f_mod_hz * kHzToPerUs *
                       std::sin(theta);
            } else {
                // Constant and PulseTrain are piecewise constant; jumps carry a
                // zero right-hand derivative.
                (void)d;
                return 0.0;
            }
        },
        protocol);
}

std::optional<double> period_us(const DriveProtocol& protocol) {
    if (const auto* tri = std::get_if<TriangleDrive>(&protocol)) return 1e6 / tri->f_mod_hz;
    if (const auto* sine = std::get_if<SineDrive>(&protocol)) return 1e6 / sine->f_mod_hz;
    return std::nullopt;
}

double max_power(const DriveProtocol& protocol) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDrive>) {
                return d.p;
            } else if constexpr (std::is_same_v<T, TriangleDrive> || std::is_same_v<T, SineDrive>) {
                return d.p_max;
            } else {
                double m = d.baseline;
                for (const Pulse& pulse : d.pulses) m = std::max(m, pulse.level);
                return m;
            }
        },
        protocol);
}

}  // namespace raman
