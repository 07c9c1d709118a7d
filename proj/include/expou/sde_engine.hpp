#pragma once

// Simulation of (S, Y) under the entropy-minimal measure Q°:
//
//   dS = S Y dB°,
//   dY = Y (theta + beta^2/2 + alpha ln sigma - beta rho lambda(t) - alpha ln Y) dt
//        + beta Y dW°,                      W° = rho B° + rho_bar B~°.
//
// Two schemes share the same seeded increments:
//   euler      the Euler recursion on (Y, X = ln S) used for the reported prices;
//   exact_vol  V = ln(Y / sigma) advanced by the exact OU transition with the
//              Q° level theta - beta rho lambda(t_i) frozen per step, X by the
//              same Euler rule.  Used to measure the Euler bias in Y.

#include "expou/increments.hpp"
#include "expou/kernels.hpp"
#include "expou/model_params.hpp"
#include "expou/time_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace expou {

enum class Scheme { euler, exact_vol };

[[nodiscard]] std::string_view scheme_name(Scheme s) noexcept;

enum class StoreMode {
    terminal,  ///< keep only Y_T, X_T, S_T per path
    full,      ///< keep every node and every increment
};

struct SimOptions {
    StoreMode store = StoreMode::terminal;
    /// 0 picks std::thread::hardware_concurrency().  Results do not depend on it.
    unsigned threads = 0;
    /// nullptr uses kernels::active().
    const kernels::KernelTable* kernels = nullptr;
};

/// Floor value substituted when an Euler update of Y is non-positive.
[[nodiscard]] inline double y_floor(const ModelParams& p) { return 1e-8 * p.sigma; }

/// Share of Euler volatility updates that hit the floor above which a batch
/// carries a warning.
inline constexpr double kFloorWarningRate = 0.01;

class PathBatch {
public:
    [[nodiscard]] std::size_t n_paths() const noexcept { return n_paths_; }
    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] Scheme scheme() const noexcept { return scheme_; }

    [[nodiscard]] std::span<const double> terminal_y() const noexcept { return y_T_; }
    [[nodiscard]] std::span<const double> terminal_x() const noexcept { return x_T_; }
    [[nodiscard]] std::span<const double> terminal_s() const noexcept { return s_T_; }

    [[nodiscard]] bool has_trajectories() const noexcept { return !y_.empty(); }
    /// Node values of one path (steps + 1 entries); full mode only.
    [[nodiscard]] std::span<const double> y(std::size_t path) const;
    [[nodiscard]] std::span<const double> x(std::size_t path) const;
    [[nodiscard]] std::span<const double> s(std::size_t path) const;
    /// Increments of one path (steps entries); full mode only.
    [[nodiscard]] std::span<const double> db(std::size_t path) const;
    [[nodiscard]] std::span<const double> dw(std::size_t path) const;

    /// Increments that drove a path: the stored ones in full mode, otherwise
    /// regenerated from the seed.
    [[nodiscard]] Increments increments(std::size_t path) const;

    [[nodiscard]] std::size_t floor_events() const noexcept { return floor_events_; }
    [[nodiscard]] double floor_rate() const noexcept;
    [[nodiscard]] bool floor_warning() const noexcept { return floor_rate() > kFloorWarningRate; }

private:
    PathBatch(const ModelParams& p, const TimeGrid& grid, std::size_t n, std::uint64_t seed,
              Scheme scheme, bool seeded);

    friend class Simulator;

    ModelParams params_;
    TimeGrid grid_;
    std::size_t n_paths_;
    std::uint64_t seed_;
    Scheme scheme_;
    bool seeded_;
    std::size_t floor_events_ = 0;

    std::vector<double> y_T_, x_T_, s_T_;
    // full mode, path-major
    std::vector<double> y_, x_, s_;
    std::vector<double> db_, dw_;
};

/// Seeded batch.  Params are checked with Admissibility::degenerate_limits.
[[nodiscard]] PathBatch simulate(const ModelParams& p, const TimeGrid& grid,
                                 std::size_t n_paths, std::uint64_t seed, Scheme scheme,
                                 const SimOptions& opts = {});

[[nodiscard]] inline PathBatch euler_paths(const ModelParams& p, const TimeGrid& grid,
                                           std::size_t n_paths, std::uint64_t seed,
                                           const SimOptions& opts = {}) {
    return simulate(p, grid, n_paths, seed, Scheme::euler, opts);
}

[[nodiscard]] inline PathBatch exactvol_paths(const ModelParams& p, const TimeGrid& grid,
                                              std::size_t n_paths, std::uint64_t seed,
                                              const SimOptions& opts = {}) {
    return simulate(p, grid, n_paths, seed, Scheme::exact_vol, opts);
}

/// Batch driven by caller-supplied increments (always stored in full).
[[nodiscard]] PathBatch simulate_from_increments(const ModelParams& p, const TimeGrid& grid,
                                                 const Increments& inc, Scheme scheme,
                                                 const SimOptions& opts = {});

/// CSV dump with header `path,step,t,y,x,s`, one row per (path, node).
void write_path_csv(const PathBatch& batch, std::ostream& out);

}  // namespace expou
