#include "raman/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace raman {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be strictly positive");
    }
}

}  // namespace

void validate(const PhysicalParams& p) {
    require_positive(p.delta, "delta");
    require_positive(p.gamma, "gamma");
    require_positive(p.t2, "t2");
    require_positive(p.p2, "p2");
    require_positive(p.c_r, "c_r");
    require_positive(p.c_s, "c_s");
    require_positive(p.q_max, "q_max");
    require_positive(p.p_q, "p_q");
    require_positive(p.g0, "g0");
    require_positive(p.kappa, "kappa");
    require_positive(p.s0, "s0");
    require_positive(p.a_sat, "a_sat");
    require_positive(p.a_d, "a_d");
    require_positive(p.c_read, "c_read");
    require_positive(p.p_opt, "p_opt");
    require_positive(p.w_pm, "w_pm");
    require_positive(p.gamma_abs, "gamma_abs");
    require_positive(p.delta_cut, "delta_cut");
    if (p.m_cut < 1) {
        throw std::invalid_argument("m_cut must be an integer >= 1");
    }
    if (p.q_max > 1.0) {
        throw std::invalid_argument("q_max must be <= 1");
    }
    // Slow-fast hierarchy at the nominal 2 mW operating point.
    const double tr = compute_tau_r(p, 2.0);
    const double ts = compute_tau_s(p, 2.0);
    if (!(10.0 * tr <= ts && 10.0 * ts <= p.t2)) {
        throw std::invalid_argument(
            "timescale hierarchy violated: need tau_r*10 <= tau_s*10 <= t2 at 2 mW");
    }
}

double compute_tau_r(const PhysicalParams& p, double p1) {
    if (!(p1 > 0.0)) {
        throw std::domain_error("compute_tau_r requires p1 > 0");
    }
    return p.c_r * p.delta / std::sqrt(p1 * p.p2);
}

double compute_tau_s(const PhysicalParams& p, double p1) {
    if (!(p1 > 0.0)) {
        throw std::domain_error("compute_tau_s requires p1 > 0");
    }
    return p.c_s * p.delta * p.delta / (p.gamma * p1);
}

double spectral_envelope(const PhysicalParams& p, double delta) {
    const double d2 = delta * delta;
    const double absorption = d2 / (d2 + p.gamma_abs * p.gamma_abs);
    // (delta/delta_cut)^(2*m_cut) via the squared ratio keeps the envelope even.
    const double r2 = d2 / (p.delta_cut * p.delta_cut);
    const double cutoff = 1.0 / (1.0 + std::pow(r2, p.m_cut));
    return absorption * cutoff;
}

double phase_matching(const PhysicalParams& p, double p1) {
    const double x = (p1 - p.p_opt) / p.w_pm;
    return 1.0 / (1.0 + x * x);
}

double pump_coherence(const PhysicalParams& p, double p1) {
    return p.q_max * p1 / (p1 + p.p_q);
}

double settled_coherence(const PhysicalParams& p, double p1) {
    if (p1 <= 0.0) {
        return 0.0;
    }
    return pump_coherence(p, p1) / (1.0 + compute_tau_s(p, p1) / p.t2);
}

double small_signal_gain(const PhysicalParams& p, double p1, double q) {
    return p.g0 * spectral_envelope(p, p.delta) * phase_matching(p, p1) * p1 * q;
}

double steady_state_output(const PhysicalParams& p, double p1) {
    if (p1 < 0.0) {
        throw std::domain_error("steady_state_output requires p1 >= 0");
    }
    if (p1 == 0.0) {
        return 0.0;
    }
    const double g = small_signal_gain(p, p1, settled_coherence(p, p1));
    if (g <= p.kappa) {
        return 0.0;
    }
    return p.a_sat * p.a_sat * (g / p.kappa - 1.0);
}

double static_threshold(const PhysicalParams& p) {
    const auto above = [&](double p1) {
        return small_signal_gain(p, p1, settled_coherence(p, p1)) > p.kappa;
    };
    double lo = 0.0;  // settled gain -> 0 as p1 -> 0
    double hi = p.p_opt;
    if (!above(hi)) {
        throw std::runtime_error(
            "no threshold: settled gain stays below kappa on (0, p_opt]");
    }
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (above(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

ThresholdPair predicted_thresholds(const PhysicalParams& p, double f_mod_hz) {
    if (!(f_mod_hz >= 0.0)) {
        throw std::domain_error("predicted_thresholds requires f_mod >= 0");
    }
    const double p_th = static_threshold(p);
    const double tau_s_seconds = compute_tau_s(p, p_th) * 1e-6;
    const double excess = 0.5 * std::sqrt(f_mod_hz * tau_s_seconds);
    return {p_th * (1.0 + excess), p_th * (1.0 - excess)};
}

}  // namespace raman
