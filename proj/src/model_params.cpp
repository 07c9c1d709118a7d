#include "expou/model_params.hpp"

#include "expou/errors.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace expou {

void ModelParams::validate(Admissibility mode) const {
    const std::array<std::pair<const char*, double>, 10> fields{{
        {"mu", mu}, {"kappa", kappa}, {"sigma", sigma}, {"alpha", alpha},
        {"theta", theta}, {"beta", beta}, {"rho", rho}, {"s0", s0},
        {"y0", y0}, {"horizon", horizon},
    }};
    for (const auto& [name, value] : fields) {
        if (!std::isfinite(value)) {
            throw ValidationError(std::string(name) + " must be finite");
        }
    }
    if (!(sigma > 0.0)) throw ValidationError("sigma must be > 0");
    if (mode == Admissibility::strict) {
        if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
        if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
    } else {
        if (alpha < 0.0) throw ValidationError("alpha must be >= 0");
        if (beta < 0.0) throw ValidationError("beta must be >= 0");
    }
    if (rho < -1.0 || rho > 1.0) throw ValidationError("rho must lie in [-1, 1]");
    if (!(s0 > 0.0)) throw ValidationError("s0 must be > 0");
    if (!(y0 > 0.0)) throw ValidationError("y0 must be > 0");
    if (!(horizon > 0.0)) throw ValidationError("horizon must be > 0");
}

double ModelParams::rho_bar() const { return std::sqrt(1.0 - rho * rho); }

double ModelParams::v0() const { return std::log(y0 / sigma); }

ou::OUParams ModelParams::ou_params() const {
    return ou::OUParams{.theta = theta, .alpha = alpha, .beta = beta, .v0 = v0()};
}

}  // namespace expou
