#pragma once

#include <cstddef>

namespace expou {

/// Uniform grid 0 = t_0 < t_1 < ... < t_m = T.
class TimeGrid {
public:
    /// Throws ValidationError unless horizon > 0 and steps >= 1.
    TimeGrid(double horizon, std::size_t steps);

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }

    /// Node i in [0, steps]; t(0) == 0 and t(steps) == horizon exactly.
    [[nodiscard]] double t(std::size_t i) const noexcept;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double horizon_;
    std::size_t steps_;
    double dt_;
};

}  // namespace expou
