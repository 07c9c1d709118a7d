#include "expou/emm_entropy.hpp"

#include "expou/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace expou::emm {

double lambda_mpr(double t, const ModelParams& p) {
    return (p.mu + p.kappa * t) / p.sigma;
}

double entropy_f(double t, const ModelParams& p) {
    const double T = p.horizon;
    const double width = T - t;
    // (T^2 - t^2) and (T^3 - t^3) factored through (T - t) to avoid cancellation
    const double bracket = p.mu * p.mu + p.mu * p.kappa * (T + t) +
                           p.kappa * p.kappa * (T * T + T * t + t * t) / 3.0;
    return 0.5 * width * bracket / (p.sigma * p.sigma);
}

namespace {

void check_path_length(std::span<const double> db, const TimeGrid& grid) {
    if (db.size() != grid.steps()) {
        throw PathDataError("path has " + std::to_string(db.size()) +
                            " increments but the grid has " +
                            std::to_string(grid.steps()) + " steps");
    }
}

}  // namespace

double log_density(std::span<const double> db, const TimeGrid& grid, const ModelParams& p) {
    check_path_length(db, grid);
    const double dt = grid.dt();
    double stochastic = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < db.size(); ++i) {
        const double lam = lambda_mpr(grid.t(i), p);
        stochastic += lam * db[i];
        quadratic += lam * lam * dt;
    }
    return -stochastic - 0.5 * quadratic;
}

double girsanov_eta(std::span<const double> db, const TimeGrid& grid, const ModelParams& p) {
    check_path_length(db, grid);
    const double dt = grid.dt();
    double eta = 0.0;
    for (std::size_t i = 0; i < db.size(); ++i) {
        const double lam = lambda_mpr(grid.t(i), p);
        eta += lam * (db[i] + lam * dt);
    }
    return eta;
}

double hobson_residual(const TimeGrid& grid, const ModelParams& p) {
    // On [t_i, t_i + h]:  1/2 int (lambda_i^2 - lambda(s)^2) ds
    //   = -1/2 (g lambda_i h^2 + g^2 h^3 / 3),  g = kappa / sigma.
    const double g = p.kappa / p.sigma;
    const double h = grid.dt();
    double residual = 0.0;
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        const double lam = lambda_mpr(grid.t(i), p);
        residual -= 0.5 * (g * lam * h * h + g * g * h * h * h / 3.0);
    }
    return residual;
}

double ode_residual(const ModelParams& p, std::size_t n_check, double h) {
    if (!(h > 0.0)) throw ValidationError("ode_residual: h must be > 0");
    if (n_check < 2) throw ValidationError("ode_residual: need at least 2 check points");
    const double T = p.horizon;
    const double spacing = T / static_cast<double>(n_check + 1);
    if (h >= spacing) {
        throw ValidationError("ode_residual: h must be smaller than the check-point spacing");
    }
    double worst = 0.0;
    for (std::size_t j = 1; j <= n_check; ++j) {
        const double t = spacing * static_cast<double>(j);
        const double fdot = (entropy_f(t + h, p) - entropy_f(t - h, p)) / (2.0 * h);
        const double lam = lambda_mpr(t, p);
        worst = std::max(worst, std::abs(fdot + 0.5 * lam * lam));
    }
    return worst;
}

double q_drift_level(double t, const ModelParams& p) {
    return p.theta + 0.5 * p.beta * p.beta + p.alpha * std::log(p.sigma) -
           p.beta * p.rho * lambda_mpr(t, p);
}

double q_drift_y(double t, double y, const ModelParams& p) {
    if (!(y > 0.0)) {
        throw InvalidVolatilityState("volatility state must be > 0, got " + std::to_string(y));
    }
    return y * (q_drift_level(t, p) - p.alpha * std::log(y));
}

EntropyReport entropy_report(const ModelParams& p, const TimeGrid& grid, std::size_t n_check,
                             double h) {
    return EntropyReport{
        .j_value = entropy_j(p),
        .hobson_residual = hobson_residual(grid, p),
        .ode_max_residual = ode_residual(p, n_check, h),
    };
}

}  // namespace expou::emm
