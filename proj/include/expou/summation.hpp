#pragma once

#include <cstddef>
#include <span>

namespace expou {

/// Pairwise (cascade) sum with a fixed split rule, so the result depends only
/// on the sequence, never on how it was produced.
[[nodiscard]] inline double pairwise_sum(std::span<const double> v) noexcept {
    constexpr std::size_t kLeaf = 64;
    if (v.size() <= kLeaf) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased, 0 for fewer than two samples
    double std_error = 0.0;
};

/// Two-pass mean and variance.
[[nodiscard]] SampleMoments sample_moments(std::span<const double> v);

}  // namespace expou
