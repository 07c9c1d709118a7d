#pragma once

#include "expou/kernels.hpp"
#include "expou/time_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace expou {

/// Brownian increments for n paths, path-major: entry [path * steps + step].
/// db drives the price, dw = rho db + rho_bar db~ drives the volatility.
struct Increments {
    std::size_t n_paths = 0;
    std::size_t steps = 0;
    std::vector<double> db;
    std::vector<double> dw;
};

/// Increments of paths [first_path, first_path + n) at one step, written to
/// db, db_indep and dw (n entries each).  Every value is a pure function of
/// (seed, path, step): one Philox block per (path, step) feeds a Box-Muller
/// pair.  scratch must hold 4 n words.
void fill_step_increments(const kernels::KernelTable& kt, std::uint64_t seed,
                          std::size_t step, std::uint64_t first_path, std::size_t n,
                          double sqrt_dt, double rho, double* db, double* db_indep,
                          double* dw, std::uint32_t* scratch);

[[nodiscard]] Increments sample_increments(const TimeGrid& grid, std::size_t n_paths,
                                           double rho, std::uint64_t seed);

/// Increments of a single path; identical to the corresponding rows of
/// sample_increments for any batch size.
[[nodiscard]] Increments path_increments(const TimeGrid& grid, std::size_t path, double rho,
                                         std::uint64_t seed);

}  // namespace expou
