#pragma once

#include "expou/ou_core.hpp"

namespace expou {

/// Which parameter region a ModelParams is checked against.
enum class Admissibility {
    /// sigma, alpha, beta > 0: the model as posed.
    strict,
    /// Also accepts alpha = 0 and beta = 0, the frozen-volatility limits used
    /// by closed-form oracles (constant Y reduces the model to Black-Scholes).
    degenerate_limits,
};

/// Parameters of the exponential Ornstein-Uhlenbeck model
///
///   dS_t = S_t ((mu + kappa t) e^{V_t} dt + sigma e^{V_t} dB_t)
///   dV_t = (theta - alpha V_t) dt + beta dW_t,   W = rho B + rho_bar B~
///
/// with the volatility state Y = sigma e^V started at y0.
struct ModelParams {
    double mu = 0.25;
    double kappa = 0.0;
    double sigma = 0.5;
    double alpha = 0.75;
    double theta = 0.1;
    double beta = 0.2;
    double rho = -0.5;
    double s0 = 100.0;
    double y0 = 0.3;
    double horizon = 1.0;

    /// Throws ValidationError naming the first violated invariant.
    void validate(Admissibility mode = Admissibility::strict) const;

    [[nodiscard]] double rho_bar() const;
    /// Initial log-volatility factor v = ln(y0 / sigma).
    [[nodiscard]] double v0() const;
    /// The factor V under the physical measure.
    [[nodiscard]] ou::OUParams ou_params() const;
};

}  // namespace expou
