#include "expou/ou_core.hpp"

#include "expou/errors.hpp"

#include <cmath>

namespace expou::ou {

namespace {

// Below this alpha*dt the exponential factors switch to their first-order
// expansions.
constexpr double kSmallRate = 1e-12;

// (1 - e^{-a h}) / a
double decay_integral(double a, double h) {
    const double ah = a * h;
    if (ah < kSmallRate) {
        return h * (1.0 - 0.5 * ah);
    }
    return -std::expm1(-ah) / a;
}

}  // namespace

void OUParams::validate() const {
    if (!(alpha > 0.0)) {
        throw ValidationError("OU mean-reversion speed alpha must be > 0");
    }
    if (!(beta > 0.0)) {
        throw ValidationError("OU volatility beta must be > 0");
    }
    if (!std::isfinite(theta) || !std::isfinite(v0)) {
        throw ValidationError("OU theta and v0 must be finite");
    }
}

GaussianLaw marginal_law(const OUParams& p, double t) {
    if (!(t >= 0.0)) {
        throw ValidationError("marginal_law: t must be >= 0");
    }
    return GaussianLaw{
        .mean = p.v0 * std::exp(-p.alpha * t) + p.theta * decay_integral(p.alpha, t),
        .variance = p.beta * p.beta * decay_integral(2.0 * p.alpha, t),
    };
}

TransitionCoeffs transition_coeffs(double alpha, double beta, double dt) {
    return TransitionCoeffs{
        .decay = std::exp(-alpha * dt),
        .level_factor = decay_integral(alpha, dt),
        .stddev = beta * std::sqrt(decay_integral(2.0 * alpha, dt)),
    };
}

double exact_step(double v, const OUParams& p, double dt, double z) {
    if (!(dt > 0.0)) {
        throw ValidationError("exact_step: dt must be > 0");
    }
    const TransitionCoeffs c = transition_coeffs(p.alpha, p.beta, dt);
    return v * c.decay + p.theta * c.level_factor + c.stddev * z;
}

}  // namespace expou::ou
