#include "expou/pricing.hpp"

#include "expou/emm_entropy.hpp"
#include "expou/errors.hpp"
#include "expou/increments.hpp"
#include "expou/kernels.hpp"
#include "expou/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace expou::pricing {

void OptionSpec::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike)) {
        throw ValidationError("option strike must be finite and > 0");
    }
    if (!(expiry >= 0.0) || !std::isfinite(expiry)) {
        throw ValidationError("option expiry must be finite and >= 0");
    }
    if (style == ExerciseStyle::american_as_european && kind != OptionKind::call) {
        throw ValidationError("american_as_european applies to calls only");
    }
}

double payoff(const OptionSpec& spec, double s_T) {
    const double d = spec.kind == OptionKind::call ? s_T - spec.strike : spec.strike - s_T;
    return d > 0.0 ? d : 0.0;
}

MCEstimate price(const PathBatch& batch, const OptionSpec& spec, double s0, ControlVariate cv) {
    spec.validate();
    const double horizon = batch.grid().horizon();
    if (std::abs(horizon - spec.expiry) > 1e-12 * std::max(1.0, horizon)) {
        throw ValidationError("batch horizon does not match the option expiry");
    }
    const std::size_t n = batch.n_paths();
    const auto s_T = batch.terminal_s();
    std::vector<double> pay(n);
    kernels::active().vanilla_payoff(s_T.data(), spec.strike, spec.kind == OptionKind::call, n,
                                     pay.data());

    if (cv == ControlVariate::off) {
        const SampleMoments m = sample_moments(pay);
        return MCEstimate{m.mean, m.std_error, n, 0.0};
    }

    if (n < kMinControlVariatePaths) {
        throw InsufficientPaths("control variate needs at least " +
                                std::to_string(kMinControlVariatePaths) + " paths, got " +
                                std::to_string(n));
    }
    const auto n_pilot = static_cast<std::size_t>(kPilotFraction * static_cast<double>(n));

    const std::span<const double> pilot_pay(pay.data(), n_pilot);
    const std::span<const double> pilot_s(s_T.data(), n_pilot);
    const double pay_mean = pairwise_sum(pilot_pay) / static_cast<double>(n_pilot);
    const double s_mean = pairwise_sum(pilot_s) / static_cast<double>(n_pilot);
    std::vector<double> cross(n_pilot), sq(n_pilot);
    for (std::size_t i = 0; i < n_pilot; ++i) {
        const double ds = pilot_s[i] - s_mean;
        cross[i] = (pilot_pay[i] - pay_mean) * ds;
        sq[i] = ds * ds;
    }
    const double s_var = pairwise_sum(sq);
    const double b = s_var > 0.0 ? pairwise_sum(cross) / s_var : 0.0;

    std::vector<double> adjusted(n - n_pilot);
    for (std::size_t i = n_pilot; i < n; ++i) {
        adjusted[i - n_pilot] = pay[i] - b * (s_T[i] - s0);
    }
    const SampleMoments m = sample_moments(adjusted);
    return MCEstimate{m.mean, m.std_error, adjusted.size(), b};
}

MartingaleCheck martingale_diagnostic(const PathBatch& batch, double s0) {
    const SampleMoments m = sample_moments(batch.terminal_s());
    MartingaleCheck out{m.mean, m.std_error, 0.0};
    if (m.std_error > 0.0) {
        out.z_score = (m.mean - s0) / m.std_error;
    } else if (m.mean != s0) {
        out.z_score = m.mean > s0 ? HUGE_VAL : -HUGE_VAL;
    }
    return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bs_reference(double s0, double strike, double total_variance) {
    if (!(s0 > 0.0) || !(strike > 0.0)) {
        throw ValidationError("bs_reference: s0 and strike must be > 0");
    }
    if (!(total_variance >= 0.0)) {
        throw ValidationError("bs_reference: total variance must be >= 0");
    }
    if (total_variance == 0.0) {
        return std::max(s0 - strike, 0.0);
    }
    const double vol = std::sqrt(total_variance);
    const double d1 = (std::log(s0 / strike) + 0.5 * total_variance) / vol;
    const double d2 = d1 - vol;
    return s0 * normal_cdf(d1) - strike * normal_cdf(d2);
}

EntropyEstimate entropy_monte_carlo(const ModelParams& p, const TimeGrid& grid,
                                    std::size_t n_paths, std::uint64_t seed) {
    if (n_paths < 2) {
        throw ValidationError("entropy_monte_carlo: need at least two paths");
    }
    constexpr std::size_t kBlock = 256;
    const std::size_t m = grid.steps();
    const double sqrt_dt = std::sqrt(grid.dt());
    const kernels::KernelTable& kt = kernels::active();

    std::vector<double> terms(n_paths);
    std::vector<double> paths(kBlock * m);
    std::vector<double> db(kBlock), db_indep(kBlock), dw(kBlock);
    std::vector<std::uint32_t> bits(4 * kBlock);
    for (std::size_t first = 0; first < n_paths; first += kBlock) {
        const std::size_t n = std::min(kBlock, n_paths - first);
        for (std::size_t j = 0; j < m; ++j) {
            // only B matters here; the correlation is irrelevant
            fill_step_increments(kt, seed, j, first, n, sqrt_dt, 0.0, db.data(),
                                 db_indep.data(), dw.data(), bits.data());
            for (std::size_t i = 0; i < n; ++i) paths[i * m + j] = db[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double log_z =
                emm::log_density(std::span<const double>(paths).subspan(i * m, m), grid, p);
            terms[first + i] = std::exp(log_z) * log_z;
        }
    }
    const SampleMoments mom = sample_moments(terms);
    return EntropyEstimate{mom.mean, mom.std_error};
}

}  // namespace expou::pricing
