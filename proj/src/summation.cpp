#include "expou/summation.hpp"

#include <cmath>
#include <vector>

namespace expou {

SampleMoments sample_moments(std::span<const double> v) {
    SampleMoments out;
    if (v.empty()) return out;
    const double n = static_cast<double>(v.size());
    // shifted by the first value: cancels the bulk of the magnitude and makes a
    // constant sample come out with exactly zero variance
    const double shift = v[0];
    std::vector<double> work(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) work[i] = v[i] - shift;
    const double offset = pairwise_sum(work) / n;
    out.mean = shift + offset;
    if (v.size() < 2) return out;
    std::vector<double>& sq = work;
    for (double& d : sq) d = (d - offset) * (d - offset);
    out.variance = pairwise_sum(sq) / (n - 1.0);
    out.std_error = std::sqrt(out.variance / n);
    return out;
}

}  // namespace expou
