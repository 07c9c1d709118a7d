#include "expou/time_grid.hpp"

#include "expou/errors.hpp"

#include <cmath>

namespace expou {

TimeGrid::TimeGrid(double horizon, std::size_t steps)
    : horizon_(horizon), steps_(steps), dt_(0.0) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("time grid horizon must be finite and > 0");
    }
    if (steps == 0) {
        throw ValidationError("time grid needs at least one step");
    }
    dt_ = horizon_ / static_cast<double>(steps_);
}

double TimeGrid::t(std::size_t i) const noexcept {
    if (i >= steps_) {
        return horizon_;
    }
    return horizon_ * (static_cast<double>(i) / static_cast<double>(steps_));
}

}  // namespace expou
