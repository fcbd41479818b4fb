#include "raman/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace raman {

namespace {

struct Vec2 {
    double a;
    double q;
};

Vec2 rhs(const PhysicalParams& p, double t, double a, double q, const DriveProtocol& protocol) {
    const double p1 = evaluate(protocol, t);
    const double sat = 1.0 + (a * a) / (p.a_sat * p.a_sat);
    const double g = small_signal_gain(p, p1, q);
    const double da = (g / sat - p.kappa) * a + p.s0;
    const double drain =
        q * (p.p2 / p.c_read) * (p.a_d * p.a_d) / (a * a + p.a_d * p.a_d);
    double dq = -q / p.t2 - drain;
    if (p1 > 0.0) {
        dq += (pump_coherence(p, p1) - q) / compute_tau_s(p, p1);
    }
    return {da, dq};
}

// Projection into the physical range {a >= 0, 0 <= q <= q_max}.
void clamp_state(SystemState& s, const PhysicalParams& p, ClampCounters& clamps) {
    if (s.a < 0.0) {
        s.a = 0.0;
        ++clamps.a_clamps;
    }
    if (s.q < 0.0) {
        s.q = 0.0;
        ++clamps.q_clamps;
    } else if (s.q > p.q_max) {
        s.q = p.q_max;
        ++clamps.q_clamps;
    }
}

void check_finite(const SystemState& s) {
    if (!std::isfinite(s.a) || !std::isfinite(s.q)) {
        throw IntegrationError("integration failure: non-finite state", s.t);
    }
}

// Cubic Hermite interpolant on [t0, t1] from values and derivatives at the ends.
double hermite(double t0, double y0, double f0, double t1, double y1, double f1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * h * f0 +
           (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * h * f1;
}

class Sampler {
public:
    Sampler(TimeSeries& out, const DriveProtocol& protocol, double t0, double t_end,
            double interval)
        : out_(out), protocol_(protocol), t0_(t0), t_end_(t_end), interval_(interval) {}

    // Emits every sample time inside (prev step end, t1], interpolating
    // between the step endpoints; call once per accepted step.
    void advance(double ta, const Vec2& ya, const Vec2& fa, double tb, const Vec2& yb,
                 const Vec2& fb) {
        const double eps = 1e-9 * std::max(1.0, std::abs(tb));
        const double eps_end = 1e-9 * std::max(1.0, std::abs(t_end_));
        while (true) {
            const double ts = t0_ + static_cast<double>(next_) * interval_;
            if (ts > t_end_ + eps_end || ts > tb + eps) break;
            const double tc = std::min(ts, tb);
            double a, q;
            if (tc <= ta) {
                a = ya.a;
                q = ya.q;
            } else {
                a = hermite(ta, ya.a, fa.a, tb, yb.a, fb.a, tc);
                q = hermite(ta, ya.q, fa.q, tb, yb.q, fb.q, tc);
            }
            out_.push_back({ts, evaluate(protocol_, ts), q, a, a * a});
            ++next_;
        }
    }

private:
    TimeSeries& out_;
    const DriveProtocol& protocol_;
    double t0_;
    double t_end_;
    double interval_;
    long next_ = 0;
};

IntegrationResult integrate_fixed(const PhysicalParams& params, const DriveProtocol& protocol,
                                  double t_end, const SystemState& init,
                                  const IntegratorConfig& cfg) {
    IntegrationResult result;
    result.series.reserve(
        static_cast<size_t>((t_end - init.t) / cfg.sample_interval) + 2);
    Sampler sampler(result.series, protocol, init.t, t_end, cfg.sample_interval);

    SystemState s = init;
    Vec2 f_here = rhs(params, s.t, s.a, s.q, protocol);
    const double span = t_end - init.t;
    const long n_steps = std::max(1L, static_cast<long>(std::ceil(span / cfg.dt - 1e-12)));
    for (long i = 0; i < n_steps; ++i) {
        // Step ends land on init.t + k*dt exactly (no accumulation drift);
        // the final step is shortened to hit t_end.
        const double t1 = (i + 1 == n_steps)
                              ? t_end
                              : init.t + static_cast<double>(i + 1) * cfg.dt;
        SystemState before = s;
        Vec2 f_before = f_here;
        s = step_rk4(s, params, protocol, t1 - s.t, result.clamps);
        s.t = t1;
        check_finite(s);
        ++result.steps;
        f_here = rhs(params, s.t, s.a, s.q, protocol);
        sampler.advance(before.t, {before.a, before.q}, {f_before.a, f_before.q}, s.t,
                        {s.a, s.q}, f_here);
    }
    return result;
}

// Dormand-Prince 4(5) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0},
};
// 5th-order weights equal the last stage row (FSAL); embedded 4th-order weights:
constexpr double kB4[7] = {5179.0 / 57600.0, 0.0,           7571.0 / 16695.0, 393.0 / 640.0,
                           -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0};

IntegrationResult integrate_adaptive(const PhysicalParams& params, const DriveProtocol& protocol,
                                     double t_end, const SystemState& init,
                                     const IntegratorConfig& cfg) {
    IntegrationResult result;
    Sampler sampler(result.series, protocol, init.t, t_end, cfg.sample_interval);

    const double h_max = cfg.sample_interval;
    const double h_min = 1e-9;
    SystemState s = init;
    Vec2 k[7];
    k[0] = rhs(params, s.t, s.a, s.q, protocol);
    double h = std::min(h_max, 0.01);

    while (s.t < t_end) {
        const bool final_step = s.t + h >= t_end;
        const double h_try = final_step ? t_end - s.t : h;

        for (int i = 1; i < 7; ++i) {
            double a_i = s.a, q_i = s.q;
            for (int j = 0; j < i; ++j) {
                a_i += h_try * kA[i][j] * k[j].a;
                q_i += h_try * kA[i][j] * k[j].q;
            }
            k[i] = rhs(params, s.t + kC[i] * h_try, a_i, q_i, protocol);
        }
        // Stage 7 state is the 5th-order solution.
        double a5 = s.a, q5 = s.q;
        for (int j = 0; j < 6; ++j) {
            a5 += h_try * kA[6][j] * k[j].a;
            q5 += h_try * kA[6][j] * k[j].q;
        }
        double a4 = s.a, q4 = s.q;
        for (int j = 0; j < 7; ++j) {
            a4 += h_try * kB4[j] * k[j].a;
            q4 += h_try * kB4[j] * k[j].q;
        }

        const double sc_a = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(s.a), std::abs(a5));
        const double sc_q = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(s.q), std::abs(q5));
        const double ea = (a5 - a4) / sc_a;
        const double eq = (q5 - q4) / sc_q;
        const double err = std::sqrt(0.5 * (ea * ea + eq * eq));

        if (!std::isfinite(err)) {
            throw IntegrationError("integration failure: non-finite state", s.t);
        }

        const double factor =
            std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
        if (err <= 1.0) {
            SystemState before = s;
            Vec2 f_before = k[0];
            s.t = final_step ? t_end : s.t + h_try;
            s.a = a5;
            s.q = q5;
            clamp_state(s, params, result.clamps);
            check_finite(s);
            ++result.steps;
            k[0] = k[6];  // FSAL
            sampler.advance(before.t, {before.a, before.q}, {f_before.a, f_before.q}, s.t,
                            {s.a, s.q}, k[0]);
            h = std::min(h_try * factor, h_max);
        } else {
            ++result.rejected_steps;
            h = h_try * factor;
        }
        if (h < h_min && s.t < t_end) {
            throw StiffnessError("stiffness: adaptive step underflow below 1e-9 us", s.t);
        }
    }
    return result;
}

}  // namespace

Derivatives derivatives(const SystemState& state, const PhysicalParams& params, double p1) {
    if (p1 < 0.0) {
        throw std::domain_error("derivatives requires p1 >= 0");
    }
    const DriveProtocol constant = ConstantDrive{p1};
    const Vec2 d = rhs(params, state.t, state.a, state.q, constant);
    return {d.a, d.q};
}

SystemState step_rk4(const SystemState& state, const PhysicalParams& params,
                     const DriveProtocol& protocol, double dt, ClampCounters& clamps) {
    if (!(dt > 0.0)) {
        throw std::domain_error("step_rk4 requires dt > 0");
    }
    const double t = state.t;
    const Vec2 k1 = rhs(params, t, state.a, state.q, protocol);
    const Vec2 k2 = rhs(params, t + 0.5 * dt, state.a + 0.5 * dt * k1.a,
                        state.q + 0.5 * dt * k1.q, protocol);
    const Vec2 k3 = rhs(params, t + 0.5 * dt, state.a + 0.5 * dt * k2.a,
                        state.q + 0.5 * dt * k2.q, protocol);
    const Vec2 k4 =
        rhs(params, t + dt, state.a + dt * k3.a, state.q + dt * k3.q, protocol);

    SystemState next;
    next.t = t + dt;
    next.a = state.a + dt / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
    next.q = state.q + dt / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    clamp_state(next, params, clamps);
    check_finite(next);
    return next;
}

IntegrationResult integrate(const PhysicalParams& params, const DriveProtocol& protocol,
                            double t_end, const SystemState& init,
                            const IntegratorConfig& cfg) {
    if (!(t_end > init.t)) {
        throw std::invalid_argument("integrate requires t_end > init.t");
    }
    if (!(cfg.sample_interval > 0.0)) {
        throw std::invalid_argument("sample_interval must be > 0");
    }
    if (cfg.method == Method::FixedRk4) {
        if (!(cfg.dt > 0.0)) {
            throw std::invalid_argument("fixed-step dt must be > 0");
        }
        if (cfg.dt > compute_tau_r(params, 2.0) / 10.0) {
            throw std::invalid_argument(
                "fixed-step dt must not exceed a tenth of the nominal field response time");
        }
        return integrate_fixed(params, protocol, t_end, init, cfg);
    }
    if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0) || !(cfg.abs_tol > 0.0 && cfg.abs_tol < 1.0)) {
        throw std::invalid_argument("adaptive tolerances must lie in (0,1)");
    }
    return integrate_adaptive(params, protocol, t_end, init, cfg);
}

}  // namespace raman
