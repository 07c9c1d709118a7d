#include "expou/kernels.hpp"
#include "expou/philox.hpp"

#include <cstddef>
#include <cstdint>

namespace expou::kernels {

namespace {

void philox_block(std::uint64_t key, std::uint32_t step, std::uint64_t first_path,
                  std::uint32_t stream, std::size_t n, std::uint32_t* out) {
    const philox::Key k = philox::key_from_seed(key);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t path = first_path + i;
        const philox::Counter c{step, static_cast<std::uint32_t>(path),
                                static_cast<std::uint32_t>(path >> 32), stream};
        const philox::Counter r = philox::philox4x32_10(c, k);
        out[4 * i + 0] = r[0];
        out[4 * i + 1] = r[1];
        out[4 * i + 2] = r[2];
        out[4 * i + 3] = r[3];
    }
}

void correlate(const double* db, const double* db_indep, double rho, double rho_bar,
               std::size_t n, double* dw) {
    for (std::size_t i = 0; i < n; ++i) {
        dw[i] = rho * db[i] + rho_bar * db_indep[i];
    }
}

void log_price_step(double* x, const double* y, const double* db, double half_dt,
                    std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = (x[i] - half_dt * (y[i] * y[i])) + y[i] * db[i];
    }
}

std::size_t euler_vol_step(double* y, const double* log_y, const double* dw, double level,
                           double alpha, double beta, double dt, double y_floor,
                           std::size_t n) {
    std::size_t floored = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double drift = level - alpha * log_y[i];
        const double next = (y[i] + (y[i] * drift) * dt) + (beta * y[i]) * dw[i];
        if (next <= 0.0) {
            y[i] = y_floor;
            ++floored;
        } else {
            y[i] = next;
        }
    }
    return floored;
}

void ou_step(double* v, const double* dw, double decay, double shift, double noise,
             std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = (v[i] * decay + shift) + noise * dw[i];
    }
}

void vanilla_payoff(const double* s, double strike, bool call, std::size_t n, double* out) {
    if (call) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = s[i] - strike;
            out[i] = d > 0.0 ? d : 0.0;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = strike - s[i];
            out[i] = d > 0.0 ? d : 0.0;
        }
    }
}

constexpr KernelTable kScalar{
    .isa = Isa::scalar,
    .philox_block = philox_block,
    .correlate = correlate,
    .log_price_step = log_price_step,
    .euler_vol_step = euler_vol_step,
    .ou_step = ou_step,
    .vanilla_payoff = vanilla_payoff,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace expou::kernels
