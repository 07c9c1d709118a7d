#include "expou/increments.hpp"

#include "expou/errors.hpp"
#include "expou/philox.hpp"

#include <cmath>
#include <numbers>

namespace expou {

namespace {

constexpr std::uint32_t kBrownianStream = 0;

double correlation_complement(double rho) {
    if (rho < -1.0 || rho > 1.0) {
        throw ValidationError("correlation must lie in [-1, 1]");
    }
    return std::sqrt(1.0 - rho * rho);
}

}  // namespace

void fill_step_increments(const kernels::KernelTable& kt, std::uint64_t seed,
                          std::size_t step, std::uint64_t first_path, std::size_t n,
                          double sqrt_dt, double rho, double* db, double* db_indep,
                          double* dw, std::uint32_t* scratch) {
    kt.philox_block(seed, static_cast<std::uint32_t>(step), first_path, kBrownianStream, n,
                    scratch);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t* w = scratch + 4 * i;
        const double u1 = philox::to_open_unit(w[0], w[1]);
        const double u2 = philox::to_open_unit(w[2], w[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1)) * sqrt_dt;
        const double angle = 2.0 * std::numbers::pi * u2;
        db[i] = radius * std::cos(angle);
        db_indep[i] = radius * std::sin(angle);
    }
    kt.correlate(db, db_indep, rho, correlation_complement(rho), n, dw);
}

Increments sample_increments(const TimeGrid& grid, std::size_t n_paths, double rho,
                             std::uint64_t seed) {
    if (n_paths == 0) {
        throw ValidationError("sample_increments: need at least one path");
    }
    const std::size_t m = grid.steps();
    const double sqrt_dt = std::sqrt(grid.dt());
    const kernels::KernelTable& kt = kernels::active();

    Increments out{n_paths, m, std::vector<double>(n_paths * m), std::vector<double>(n_paths * m)};
    std::vector<double> db(n_paths), db_indep(n_paths), dw(n_paths);
    std::vector<std::uint32_t> scratch(4 * n_paths);
    for (std::size_t step = 0; step < m; ++step) {
        fill_step_increments(kt, seed, step, 0, n_paths, sqrt_dt, rho, db.data(),
                             db_indep.data(), dw.data(), scratch.data());
        for (std::size_t path = 0; path < n_paths; ++path) {
            out.db[path * m + step] = db[path];
            out.dw[path * m + step] = dw[path];
        }
    }
    return out;
}

Increments path_increments(const TimeGrid& grid, std::size_t path, double rho,
                           std::uint64_t seed) {
    const std::size_t m = grid.steps();
    const double sqrt_dt = std::sqrt(grid.dt());
    const kernels::KernelTable& kt = kernels::scalar_table();
    Increments out{1, m, std::vector<double>(m), std::vector<double>(m)};
    double db_indep = 0.0;
    std::uint32_t scratch[4];
    for (std::size_t step = 0; step < m; ++step) {
        fill_step_increments(kt, seed, step, path, 1, sqrt_dt, rho, &out.db[step], &db_indep,
                             &out.dw[step], scratch);
    }
    return out;
}

}  // namespace expou
