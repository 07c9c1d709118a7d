#pragma once

#include "expou/model_params.hpp"
#include "expou/sde_engine.hpp"
#include "expou/time_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace expou::pricing {

enum class OptionKind { call, put };

/// american_as_european: with the riskless asset as numeraire (zero rate, no
/// dividends) early exercise of a call is never optimal, so the American call
/// is priced as the European one.  Puts have no such reduction and are rejected.
enum class ExerciseStyle { european, american_as_european };

struct OptionSpec {
    double strike = 90.0;
    double expiry = 1.0;
    OptionKind kind = OptionKind::call;
    ExerciseStyle style = ExerciseStyle::european;

    void validate() const;
};

enum class ControlVariate { off, terminal_asset };

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;     ///< paths in the final estimate (pilot excluded)
    double cv_coefficient = 0.0; ///< b*, 0 without control variate
};

/// Share of paths used to estimate b*; they are not scored.
inline constexpr double kPilotFraction = 0.10;
inline constexpr std::size_t kMinControlVariatePaths = 100;

[[nodiscard]] double payoff(const OptionSpec& spec, double s_T);

/// Monte Carlo value of the option on a batch.
///
/// With ControlVariate::terminal_asset the estimator is
/// mean(payoff - b* (S_T - s0)) over the paths after the first 10%, with b*
/// the regression slope of payoff on S_T over that first 10%.  S_T has mean
/// s0 under any martingale measure, so the correction is unbiased.
///
/// Throws ValidationError if the batch horizon differs from the expiry and
/// InsufficientPaths for fewer than 100 paths with the control variate.
[[nodiscard]] MCEstimate price(const PathBatch& batch, const OptionSpec& spec, double s0,
                               ControlVariate cv);

struct MartingaleCheck {
    double mean = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;
};

/// Sample mean of S_T against s0.
[[nodiscard]] MartingaleCheck martingale_diagnostic(const PathBatch& batch, double s0);

/// Zero-rate Black-Scholes call with total variance sigma^2 T.
[[nodiscard]] double bs_reference(double s0, double strike, double total_variance);

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double x);

struct EntropyEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo estimate of the relative entropy E[Z° ln Z°] from paths of the
/// physical Brownian motion B.
[[nodiscard]] EntropyEstimate entropy_monte_carlo(const ModelParams& p, const TimeGrid& grid,
                                                  std::size_t n_paths, std::uint64_t seed);

}  // namespace expou::pricing
