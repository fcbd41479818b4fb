#ifndef RAMAN_MODEL_HPP
#define RAMAN_MODEL_HPP

namespace raman {

// All model constants. Units: time us, power mW, detuning GHz, rates MHz or 1/us.
// The defaults form one consistent calibration:
//   - c_r, c_s fix the response times tau_r(4 GHz, 2 mW, 4 mW) = 0.5 us and
//     tau_s(4 GHz, 2 mW) = 30 us.
//   - g0 is solved so that the static generation threshold sits at 1.0 mW.
//   - c_read and s0 place a narrow static bistable window (about
//     [1.0035, 1.0049] mW) just above threshold; the switch baseline default
//     lives inside it.
struct PhysicalParams {
    double delta = 4.0;          // off-resonant pump detuning, GHz
    double gamma = 5.7;          // excited-state relaxation rate, MHz
    double t2 = 2000.0;          // ground-state coherence lifetime, us
    double p2 = 4.0;             // resonant pump power, mW
    double c_r = 0.35355339059327373;  // field-response calibration, us*sqrt(mW*mW)/GHz
    double c_s = 21.375;         // coherence-pumping calibration, us*MHz*mW/GHz^2
    double q_max = 0.5;          // maximum normalized coherence
    double p_q = 0.5;            // coherence saturation power, mW
    double g0 = 18.78011970370371;  // gain coefficient, 1/(us*mW); threshold at 1.0 mW
    double kappa = 2.0;          // linear field loss rate, 1/us
    double s0 = 1e-12;           // spontaneous seed rate, amplitude/us
    double a_sat = 1.0;          // gain-saturation amplitude
    double a_d = 0.05;           // dark-state protection amplitude scale
    double c_read = 20000.0;     // coherence readout constant, us*mW
    double p_opt = 2.2;          // phase-matching optimum pump power, mW
    double w_pm = 1.0;           // phase-matching width, mW
    double gamma_abs = 0.8;      // resonant-absorption half-width, GHz
    double delta_cut = 6.0;      // high-detuning cutoff, GHz
    int m_cut = 2;               // cutoff sharpness exponent, >= 1

    bool operator==(const PhysicalParams&) const = default;
};

// Throws std::invalid_argument unless every field is strictly positive,
// m_cut >= 1, q_max <= 1, and the timescale hierarchy
// tau_r < tau_s < t2 holds at 2 mW with at least a factor 10 between stages.
void validate(const PhysicalParams& params);

// Inverse bandwidth of the field response: c_r * delta / sqrt(p1 * p2), us.
// Throws std::domain_error for p1 <= 0.
double compute_tau_r(const PhysicalParams& params, double p1);

// Coherence pumping time: c_s * delta^2 / (gamma * p1), us.
// Throws std::domain_error for p1 <= 0.
double compute_tau_s(const PhysicalParams& params, double p1);

// Detuning envelope of the gain, in [0, 1]:
//   [d^2/(d^2+gamma_abs^2)] * 1/(1+(d/delta_cut)^(2*m_cut)).
// Zero at d = 0, even in d, -> 0 for |d| -> inf.
double spectral_envelope(const PhysicalParams& params, double delta);

// Phase-matching factor 1/(1 + ((p1-p_opt)/w_pm)^2), in (0, 1].
double phase_matching(const PhysicalParams& params, double p1);

// Coherence the pump drives toward: q_max * p1/(p1 + p_q).
double pump_coherence(const PhysicalParams& params, double p1);

// Coherence fixed point with generation on (drain suppressed):
// pump_coherence / (1 + tau_s/t2). Zero at p1 = 0.
double settled_coherence(const PhysicalParams& params, double p1);

// Unsaturated gain G = g0 * spectral_envelope(delta) * phase_matching(p1) * p1 * q, 1/us.
double small_signal_gain(const PhysicalParams& params, double p1, double q);

// Closed-form output intensity of the generation fixed point:
// a_sat^2 * (G/kappa - 1) with q = settled_coherence(p1) when G > kappa, else 0.
// Seed-level output below threshold is reported as 0.
double steady_state_output(const PhysicalParams& params, double p1);

// Smallest p1 in (0, p_opt] where the settled gain crosses kappa, by bisection
// to relative tolerance 1e-10. Throws std::runtime_error when the gain never
// reaches kappa on the interval (miscalibrated model).
double static_threshold(const PhysicalParams& params);

struct ThresholdPair {
    double p_on;   // mW
    double p_off;  // mW
};

// Closed-form dynamic thresholds P_th * (1 +- 0.5*sqrt(f_mod * tau_s_th)),
// tau_s_th = compute_tau_s(static_threshold) in seconds. f_mod in Hz, >= 0.
ThresholdPair predicted_thresholds(const PhysicalParams& params, double f_mod_hz);

}  // namespace raman

#endif  // RAMAN_MODEL_HPP
