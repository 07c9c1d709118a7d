#include "doctest.h"
#include "oracles.hpp"

#include "expou/emm_entropy.hpp"
#include "expou/errors.hpp"
#include "expou/pricing.hpp"

#include <cmath>

using namespace expou;
using namespace expou::pricing;

namespace {

ModelParams paper() { return ModelParams{}; }

ModelParams frozen_vol(double y0) {
    ModelParams p;
    p.alpha = 0.0;
    p.theta = 0.0;
    p.beta = 0.0;
    p.y0 = y0;
    return p;
}

const OptionSpec kCall90{.strike = 90.0, .expiry = 1.0};

}  // namespace

TEST_CASE("vanilla payoffs") {
    CHECK(payoff(kCall90, 100.0) == 10.0);
    CHECK(payoff(kCall90, 80.0) == 0.0);
    CHECK(payoff(OptionSpec{.strike = 90.0, .kind = OptionKind::put}, 80.0) == 10.0);
}

TEST_CASE("Black-Scholes reference") {
    CHECK(bs_reference(100.0, 100.0, 0.04) == doctest::Approx(oracle::kBsAtm).epsilon(1e-13));
    CHECK(bs_reference(100.0, 1e-300, 0.09) == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(bs_reference(100.0, 90.0, 0.0) == 10.0);
    CHECK(bs_reference(80.0, 90.0, 0.0) == 0.0);
    CHECK_THROWS_AS((void)bs_reference(100.0, 0.0, 0.04), ValidationError);
}

TEST_CASE("zero-volatility batch prices at intrinsic value with zero error") {
    const PathBatch b = simulate(frozen_vol(1e-200), TimeGrid(1.0, 252), 1000, 1, Scheme::euler);
    for (ControlVariate cv : {ControlVariate::off, ControlVariate::terminal_asset}) {
        const MCEstimate e = price(b, kCall90, 100.0, cv);
        CHECK(e.value == 10.0);
        CHECK(e.std_error == 0.0);
    }
    const MartingaleCheck m = martingale_diagnostic(b, 100.0);
    CHECK(m.mean == 100.0);
    CHECK(m.std_error == 0.0);
    CHECK(m.z_score == 0.0);
}

TEST_CASE("frozen volatility 0.2 reproduces Black-Scholes") {
    const PathBatch b = simulate(frozen_vol(0.2), TimeGrid(1.0, 252), 100'000, 2024, Scheme::euler);
    const OptionSpec atm{.strike = 100.0, .expiry = 1.0};
    const MCEstimate plain = price(b, atm, 100.0, ControlVariate::off);
    const MCEstimate cv = price(b, atm, 100.0, ControlVariate::terminal_asset);
    CHECK(std::abs(plain.value - oracle::kBsAtm) < 3.0 * plain.std_error);
    CHECK(std::abs(cv.value - oracle::kBsAtm) < 3.0 * cv.std_error);
    CHECK(cv.std_error < 0.05);
    CHECK(cv.n_paths == 90'000);
    CHECK(plain.n_paths == 100'000);
    CHECK(cv.cv_coefficient > 0.0);
    CHECK(plain.cv_coefficient == 0.0);
}

TEST_CASE("control variate does not increase the standard error of a call") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const PathBatch b = simulate(paper(), TimeGrid(1.0, 52), 20'000, seed, Scheme::euler);
        CHECK(price(b, kCall90, 100.0, ControlVariate::terminal_asset).std_error <=
              price(b, kCall90, 100.0, ControlVariate::off).std_error);
    }
}

TEST_CASE("control-variate and plain estimators agree across seeds") {
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        const PathBatch b = simulate(paper(), TimeGrid(1.0, 52), 20'000, seed, Scheme::euler);
        const MCEstimate plain = price(b, kCall90, 100.0, ControlVariate::off);
        const MCEstimate cv = price(b, kCall90, 100.0, ControlVariate::terminal_asset);
        const PathBatch other = simulate(paper(), TimeGrid(1.0, 52), 20'000, seed + 1000, Scheme::euler);
        const MCEstimate cv_other = price(other, kCall90, 100.0, ControlVariate::terminal_asset);
        const double combined = std::hypot(plain.std_error, cv_other.std_error);
        CHECK(std::abs(plain.value - cv_other.value) < 3.0 * combined);
        CHECK(std::abs(plain.value - cv.value) < 3.0 * plain.std_error);
    }
}

TEST_CASE("put-call parity holds as a sample identity") {
    const PathBatch b = simulate(paper(), TimeGrid(1.0, 52), 10'000, 4, Scheme::exact_vol);
    const MartingaleCheck m = martingale_diagnostic(b, 100.0);
    for (double k : {70.0, 90.0, 100.0, 130.0}) {
        const double call = price(b, {.strike = k, .expiry = 1.0}, 100.0, ControlVariate::off).value;
        const double put = price(b, {.strike = k, .expiry = 1.0, .kind = OptionKind::put}, 100.0,
                                 ControlVariate::off).value;
        CHECK(call - put == doctest::Approx(m.mean - k).epsilon(1e-12));
    }
}

TEST_CASE("prices are monotone in the strike") {
    const PathBatch b = simulate(paper(), TimeGrid(1.0, 52), 10'000, 5, Scheme::euler);
    double prev_call = HUGE_VAL, prev_put = -HUGE_VAL;
    for (double k = 50.0; k <= 150.0; k += 5.0) {
        const double call = price(b, {.strike = k, .expiry = 1.0}, 100.0, ControlVariate::off).value;
        const double put = price(b, {.strike = k, .expiry = 1.0, .kind = OptionKind::put}, 100.0,
                                 ControlVariate::off).value;
        CHECK(call <= prev_call);
        CHECK(put >= prev_put);
        prev_call = call;
        prev_put = put;
    }
}

TEST_CASE("American call equals the European call bit for bit") {
    const PathBatch b = simulate(paper(), TimeGrid(1.0, 52), 5'000, 6, Scheme::euler);
    OptionSpec american = kCall90;
    american.style = ExerciseStyle::american_as_european;
    for (ControlVariate cv : {ControlVariate::off, ControlVariate::terminal_asset}) {
        const MCEstimate a = price(b, american, 100.0, cv);
        const MCEstimate e = price(b, kCall90, 100.0, cv);
        CHECK(a.value == e.value);
        CHECK(a.std_error == e.std_error);
    }
}

TEST_CASE("pricing error paths") {
    const PathBatch small = simulate(paper(), TimeGrid(1.0, 10), 99, 1, Scheme::euler);
    CHECK_THROWS_AS((void)price(small, kCall90, 100.0, ControlVariate::terminal_asset), InsufficientPaths);
    CHECK_NOTHROW((void)price(small, kCall90, 100.0, ControlVariate::off));
    OptionSpec wrong_expiry = kCall90;
    wrong_expiry.expiry = 0.5;
    CHECK_THROWS_AS((void)price(small, wrong_expiry, 100.0, ControlVariate::off), ValidationError);
    OptionSpec american_put{.strike = 90.0, .expiry = 1.0, .kind = OptionKind::put,
                            .style = ExerciseStyle::american_as_european};
    CHECK_THROWS_AS(american_put.validate(), ValidationError);
}

TEST_CASE("martingale diagnostic under Q") {
    const PathBatch b = simulate(paper(), TimeGrid(1.0, 52), 50'000, 8, Scheme::euler);
    CHECK(std::abs(martingale_diagnostic(b, 100.0).z_score) < 3.0);
}

TEST_CASE("Monte Carlo relative entropy") {
    const TimeGrid grid(1.0, 50);
    const EntropyEstimate e = entropy_monte_carlo(paper(), grid, 20'000, 3);
    CHECK(std::abs(e.mean - 0.125) < 3.0 * e.std_error);

    ModelParams zero = paper();
    zero.mu = 0.0;
    const EntropyEstimate z = entropy_monte_carlo(zero, grid, 1000, 3);
    CHECK(z.mean == 0.0);
    CHECK(z.std_error == 0.0);
}
