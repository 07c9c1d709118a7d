#pragma once

// Exact law and exact one-step transition of the Ornstein-Uhlenbeck factor
//
//   dV_t = (theta - alpha V_t) dt + beta dW_t,   V_0 = v0.
//
// V_t is Gaussian with mean theta/alpha + e^{-alpha t}(v0 - theta/alpha) and
// variance beta^2/(2 alpha) (1 - e^{-2 alpha t}).  The transition over [t, t+dt]
// is the same law restarted at V_t, which gives a bias-free sampler.

namespace expou::ou {

struct OUParams {
    double theta = 0.0;  ///< drift constant; long-run level is theta/alpha
    double alpha = 1.0;  ///< mean-reversion speed, 1/time
    double beta = 1.0;   ///< vol-of-vol, 1/sqrt(time)
    double v0 = 0.0;

    /// Throws ValidationError unless alpha > 0 and beta > 0.
    void validate() const;
};

struct GaussianLaw {
    double mean = 0.0;
    double variance = 0.0;
};

/// Closed-form law of V_t. Requires t >= 0.
[[nodiscard]] GaussianLaw marginal_law(const OUParams& p, double t);

/// Coefficients of the one-step transition v -> decay*v + drift + stddev*z.
/// Stable as alpha*dt -> 0 (alpha = 0 is accepted and gives Brownian motion
/// with drift theta).
struct TransitionCoeffs {
    double decay = 1.0;        ///< e^{-alpha dt}
    double level_factor = 0.0; ///< (1 - e^{-alpha dt}) / alpha
    double stddev = 0.0;       ///< beta sqrt((1 - e^{-2 alpha dt}) / (2 alpha))
};

[[nodiscard]] TransitionCoeffs transition_coeffs(double alpha, double beta, double dt);

/// One exact transition step of length dt > 0 driven by a standard normal z.
[[nodiscard]] double exact_step(double v, const OUParams& p, double dt, double z);

}  // namespace expou::ou
