#include "doctest.h"
#include "oracles.hpp"

#include "expou/emm_entropy.hpp"
#include "expou/errors.hpp"
#include "expou/increments.hpp"

#include <cmath>
#include <vector>

using namespace expou;
using namespace expou::emm;

namespace {

ModelParams paper() { return ModelParams{}; }  // Fig. 8.2 defaults, T = 1

ModelParams with_kappa(double kappa) {
    ModelParams p = paper();
    p.kappa = kappa;
    return p;
}

// f(t) = 1/2 int_t^T ((mu + kappa s)/sigma)^2 ds by Simpson's rule.
double f_quadrature(double t, const ModelParams& p) {
    return 0.5 * oracle::simpson(
                     [&](double s) {
                         const double lam = (p.mu + p.kappa * s) / p.sigma;
                         return lam * lam;
                     },
                     t, p.horizon);
}

}  // namespace

TEST_CASE("market price of risk") {
    CHECK(lambda_mpr(0.7, paper()) == doctest::Approx(0.5).epsilon(1e-15));
    ModelParams zero = paper();
    zero.mu = 0.0;
    CHECK(lambda_mpr(0.3, zero) == 0.0);
    CHECK(lambda_mpr(1.0, with_kappa(0.1)) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("entropy value function against quadrature") {
    CHECK(entropy_f(0.0, with_kappa(0.1)) == doctest::Approx(0.181666666666666667).epsilon(1e-12));
    CHECK(entropy_f(0.0, paper()) == doctest::Approx(0.125).epsilon(1e-15));
    for (double kappa : {0.0, 0.1, -0.4, 2.0}) {
        const ModelParams p = with_kappa(kappa);
        for (double t = 0.0; t <= 1.0; t += 0.125) {
            CAPTURE(kappa);
            CAPTURE(t);
            CHECK(std::abs(entropy_f(t, p) - f_quadrature(t, p)) < 1e-10);
        }
    }
}

TEST_CASE("entropy value function vanishes at the horizon") {
    for (double kappa : {0.0, 0.1, -3.0}) {
        ModelParams p = with_kappa(kappa);
        p.horizon = 0.37;
        CHECK(entropy_f(p.horizon, p) == 0.0);
    }
}

TEST_CASE("J agrees with the cubic closed form at t = 0") {
    const ModelParams p = with_kappa(0.1);
    const double cubic = (std::pow(p.mu + p.kappa * p.horizon, 3) - std::pow(p.mu, 3)) /
                         (6.0 * p.sigma * p.sigma * p.kappa);
    CHECK(entropy_j(p) == doctest::Approx(cubic).epsilon(1e-12));
}

TEST_CASE("entropy value function is continuous at kappa = 0") {
    const ModelParams p = with_kappa(1e-12);
    for (int i = 0; i < 100; ++i) {
        const double t = p.horizon * i / 99.0;
        const double limit = p.mu * p.mu * (p.horizon - t) / (2.0 * p.sigma * p.sigma);
        CHECK(std::abs(entropy_f(t, p) - limit) < 1e-12);
    }
}

TEST_CASE("entropy value function is non-increasing when lambda does not vanish") {
    for (double kappa : {0.0, 0.1, -0.2}) {
        const ModelParams p = with_kappa(kappa);
        double prev = entropy_f(0.0, p);
        for (int i = 1; i <= 200; ++i) {
            const double f = entropy_f(i / 200.0, p);
            CHECK(f <= prev);
            prev = f;
        }
    }
}

TEST_CASE("log density: hand-evaluated paths") {
    ModelParams zero = paper();
    zero.mu = 0.0;
    const TimeGrid grid(1.0, 252);
    const auto inc = path_increments(grid, 3, 0.0, 7);
    CHECK(log_density(inc.db, grid, zero) == 0.0);

    const std::vector<double> flat(252, 0.0);
    CHECK(log_density(flat, grid, paper()) == doctest::Approx(-0.125).epsilon(1e-13));

    const std::vector<double> one{1.0};
    CHECK(log_density(one, TimeGrid(1.0, 1), paper()) == doctest::Approx(-0.625).epsilon(1e-15));
}

TEST_CASE("log density rejects a path of the wrong length") {
    const std::vector<double> short_path(10, 0.0);
    CHECK_THROWS_AS((void)log_density(short_path, TimeGrid(1.0, 11), paper()), PathDataError);
    CHECK_THROWS_AS((void)girsanov_eta(short_path, TimeGrid(1.0, 9), paper()), PathDataError);
}

TEST_CASE("pathwise identity ln Z = J - eta") {
    const TimeGrid grid(1.0, 252);
    const ModelParams p = paper();
    for (std::size_t path = 0; path < 200; ++path) {
        const auto inc = path_increments(grid, path, p.rho, 99);
        CHECK(std::abs(log_density(inc.db, grid, p) - (entropy_j(p) - girsanov_eta(inc.db, grid, p))) <
              1e-10);
    }
    // with time-dependent lambda the gap is exactly the quadrature residual
    const ModelParams q = with_kappa(0.1);
    for (std::size_t path = 0; path < 50; ++path) {
        const auto inc = path_increments(grid, path, q.rho, 5);
        const double gap =
            log_density(inc.db, grid, q) - (entropy_j(q) - girsanov_eta(inc.db, grid, q));
        CHECK(gap == doctest::Approx(hobson_residual(grid, q)).epsilon(1e-9));
    }
}

TEST_CASE("Hobson residual") {
    SUBCASE("exactly zero for constant lambda") {
        for (std::size_t m : {1u, 7u, 252u, 1000u}) {
            CHECK(hobson_residual(TimeGrid(1.0, m), paper()) == 0.0);
        }
    }
    SUBCASE("equals left-rule quadrature minus J") {
        const ModelParams p = with_kappa(0.1);
        const TimeGrid grid(1.0, 252);
        double quad = 0.0;
        for (std::size_t i = 0; i < grid.steps(); ++i) {
            const double lam = (p.mu + p.kappa * grid.t(i)) / p.sigma;
            quad += 0.5 * lam * lam * grid.dt();
        }
        // left rule on (mu + kappa t)^2 / (2 sigma^2): error -h/2 (g(T) - g(0)) + O(h^2)
        CHECK(hobson_residual(grid, p) == doctest::Approx(quad - 0.181666666666666667).epsilon(1e-9));
        CHECK(hobson_residual(grid, p) == doctest::Approx(-2.38042747963382884e-4).epsilon(1e-9));
    }
    SUBCASE("first-order convergence under refinement") {
        const ModelParams p = with_kappa(0.1);
        for (std::size_t m : {16u, 64u, 252u}) {
            const double ratio = hobson_residual(TimeGrid(1.0, m), p) /
                                 hobson_residual(TimeGrid(1.0, 2 * m), p);
            CHECK(ratio == doctest::Approx(2.0).epsilon(0.02));
        }
    }
}

TEST_CASE("ODE residual certifies f") {
    CHECK(ode_residual(paper(), 100, 1e-4) < 1e-6);
    CHECK(ode_residual(with_kappa(0.1), 100, 1e-4) < 1e-6);
    ModelParams zero = paper();
    zero.mu = 0.0;
    CHECK(ode_residual(zero, 10, 1e-3) == 0.0);
    CHECK_THROWS_AS((void)ode_residual(paper(), 1, 1e-4), ValidationError);
    CHECK_THROWS_AS((void)ode_residual(paper(), 10, 0.0), ValidationError);
}

TEST_CASE("Q-drift of the volatility state") {
    const ModelParams p = paper();
    CHECK(q_drift_y(0.0, 0.3, p) == doctest::Approx(0.165935765347347904).epsilon(1e-13));
    CHECK(std::abs(q_drift_y(0.0, 0.627205830511328879, p)) < 1e-15);

    ModelParams flat = p;
    flat.beta = 0.0;
    flat.sigma = 1.0;
    flat.theta = 0.0;
    CHECK(q_drift_y(0.4, 1.0, flat) == 0.0);

    CHECK_THROWS_AS((void)q_drift_y(0.0, 0.0, p), InvalidVolatilityState);
    CHECK_THROWS_AS((void)q_drift_y(0.0, -1.0, p), InvalidVolatilityState);
}

TEST_CASE("Q-drift matches Ito's formula applied to sigma e^V") {
    // dV = (theta - beta rho lambda - alpha V) dt + beta dW under Q°, so
    // dY = Y (dV + beta^2 / 2 dt).
    for (double kappa : {0.0, 0.3}) {
        const ModelParams p = with_kappa(kappa);
        for (double t : {0.0, 0.5, 1.0}) {
            for (double y : {0.05, 0.3, 1.7}) {
                const double v = std::log(y / p.sigma);
                const double lam = (p.mu + p.kappa * t) / p.sigma;
                const double dv = p.theta - p.beta * p.rho * lam - p.alpha * v;
                const double expected = y * (dv + 0.5 * p.beta * p.beta);
                CHECK(q_drift_y(t, y, p) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("entropy report bundles the three numbers") {
    const EntropyReport r = entropy_report(paper(), TimeGrid(1.0, 252));
    CHECK(r.j_value == 0.125);
    CHECK(r.hobson_residual == 0.0);
    CHECK(r.ode_max_residual < 1e-6);
}
