#ifndef RAMAN_DYNAMICS_HPP
#define RAMAN_DYNAMICS_HPP

#include <stdexcept>
#include <vector>

#include "raman/drive.hpp"
#include "raman/model.hpp"

namespace raman {

// Instantaneous state of the reduced model: Stokes amplitude a >= 0 and
// normalized coherence q in [0, q_max], at time t (us).
struct SystemState {
    double t = 0.0;
    double a = 0.0;
    double q = 0.0;
};

struct Sample {
    double t;          // us
    double p1;         // mW
    double q;
    double a;
    double intensity;  // a^2
};

// Samples with strictly increasing t; intensity = a^2 at every record.
using TimeSeries = std::vector<Sample>;

enum class Method { FixedRk4, AdaptiveRk45 };

struct IntegratorConfig {
    Method method = Method::FixedRk4;
    double dt = 0.02;               // us, fixed-step size
    double rel_tol = 1e-9;          // adaptive, in (0,1)
    double abs_tol = 1e-18;         // adaptive, in (0,1); below the seed floor
    double sample_interval = 1.0;   // us, output sampling

    bool operator==(const IntegratorConfig&) const = default;
};

struct Derivatives {
    double da;  // amplitude/us
    double dq;  // 1/us
};

// Raised when the state leaves the finite range; t_us is the failing time.
struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const std::string& what, double t)
        : std::runtime_error(what), t_us(t) {}
    double t_us;
};

// Raised when the adaptive controller underflows the step size (dt < 1e-9 us).
struct StiffnessError : IntegrationError {
    using IntegrationError::IntegrationError;
};

// Count of post-step projections back into the physical range. These guards
// are numerical only; a healthy run never fires them.
struct ClampCounters {
    long a_clamps = 0;
    long q_clamps = 0;
};

// Right-hand side of the reduced model:
//   da/dt = [G/(1 + a^2/a_sat^2) - kappa]*a + s0,
//           G = g0 * spectral_envelope(delta) * phase_matching(p1) * p1 * q
//   dq/dt = (q_d(p1) - q)/tau_s(p1) - q/t2 - q*(p2/c_read)*a_d^2/(a^2 + a_d^2)
// with q_d = pump_coherence(p1) and the pumping term dropped at p1 = 0
// (tau_s(0) is taken as infinite).
Derivatives derivatives(const SystemState& state, const PhysicalParams& params, double p1);

// One classical 4th-order Runge-Kutta step of size dt > 0, evaluating the
// drive at the standard stage nodes t, t+dt/2, t+dt. The result is projected
// into {a >= 0, 0 <= q <= q_max}, counting any projection in `clamps`.
SystemState step_rk4(const SystemState& state, const PhysicalParams& params,
                     const DriveProtocol& protocol, double dt, ClampCounters& clamps);

struct IntegrationResult {
    TimeSeries series;
    ClampCounters clamps;
    long steps = 0;
    long rejected_steps = 0;  // adaptive only
};

// Deterministic trajectory from init.t to t_end, sampled uniformly every
// cfg.sample_interval (cubic Hermite interpolation between accepted steps).
// Fixed RK4 requires dt <= compute_tau_r(params, 2 mW)/10. The adaptive
// method is embedded Dormand-Prince 4(5) with error control against
// abs_tol + rel_tol*|y| and a step cap of one sampling interval.
IntegrationResult integrate(const PhysicalParams& params, const DriveProtocol& protocol,
                            double t_end, const SystemState& init,
                            const IntegratorConfig& cfg);

}  // namespace raman

#endif  // RAMAN_DYNAMICS_HPP
