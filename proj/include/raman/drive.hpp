#ifndef RAMAN_DRIVE_HPP
#define RAMAN_DRIVE_HPP

#include <optional>
#include <variant>
#include <vector>

namespace raman {

// Pump-power waveforms P1(t). Powers mW, times us, frequencies Hz,
// phase as a fraction of the period in [0, 1).

struct ConstantDrive {
    double p = 2.0;
    bool operator==(const ConstantDrive&) const = default;
};

struct TriangleDrive {
    double p_min = 0.2;
    double p_max = 3.0;
    double f_mod_hz = 1200.0;
    double phase = 0.0;
    bool operator==(const TriangleDrive&) const = default;
};

struct SineDrive {
    double p_min = 0.2;
    double p_max = 3.0;
    double f_mod_hz = 1200.0;
    double phase = 0.0;
    bool operator==(const SineDrive&) const = default;
};

struct Pulse {
    double t_start;   // us
    double duration;  // us
    double level;     // mW
    bool operator==(const Pulse&) const = default;
};

struct PulseTrainDrive {
    double baseline = 1.0042;
    std::vector<Pulse> pulses;  // sorted by t_start, non-overlapping
    bool operator==(const PulseTrainDrive&) const = default;
};

using DriveProtocol = std::variant<ConstantDrive, TriangleDrive, SineDrive, PulseTrainDrive>;

// Throws std::invalid_argument unless: all powers >= 0; p_min < p_max and
// f_mod > 0 for the periodic forms; phase in [0, 1); pulse durations > 0,
// pulses sorted by t_start and non-overlapping.
void validate(const DriveProtocol& protocol);

// Waveform value at t >= 0. Triangle rises linearly from p_min at phase 0 to
// p_max at half period, then falls back. Sine is
// p_min + (p_max - p_min) * (1 - cos(2*pi*(f*t + phase)))/2. PulseTrain
// returns the pulse level inside [t_start, t_start + duration), else baseline.
double evaluate(const DriveProtocol& protocol, double t_us);

// Time derivative of evaluate, mW/us. At a non-differentiable corner the
// right-hand derivative is returned.
double sweep_rate(const DriveProtocol& protocol, double t_us);

// Period in us for Triangle and Sine; nullopt for Constant and PulseTrain.
std::optional<double> period_us(const DriveProtocol& protocol);

// Largest power the waveform can attain (for a priori amplitude bounds).
double max_power(const DriveProtocol& protocol);

}  // namespace raman

#endif  // RAMAN_DRIVE_HPP
