#include "expou/sde_engine.hpp"

#include "expou/emm_entropy.hpp"
#include "expou/errors.hpp"
#include "expou/ou_core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>

namespace expou {

std::string_view scheme_name(Scheme s) noexcept {
    return s == Scheme::euler ? "euler" : "exact_vol";
}

PathBatch::PathBatch(const ModelParams& p, const TimeGrid& grid, std::size_t n,
                     std::uint64_t seed, Scheme scheme, bool seeded)
    : params_(p), grid_(grid), n_paths_(n), seed_(seed), scheme_(scheme), seeded_(seeded),
      y_T_(n), x_T_(n), s_T_(n) {}

namespace {

void require_full(bool has, const char* what) {
    if (!has) {
        throw PathDataError(std::string(what) + " requires a batch simulated with StoreMode::full");
    }
}

void require_path(std::size_t path, std::size_t n) {
    if (path >= n) {
        throw PathDataError("path index " + std::to_string(path) + " out of range");
    }
}

}  // namespace

std::span<const double> PathBatch::y(std::size_t path) const {
    require_full(has_trajectories(), "node access");
    require_path(path, n_paths_);
    const std::size_t nodes = grid_.steps() + 1;
    return std::span<const double>(y_).subspan(path * nodes, nodes);
}

std::span<const double> PathBatch::x(std::size_t path) const {
    require_full(has_trajectories(), "node access");
    require_path(path, n_paths_);
    const std::size_t nodes = grid_.steps() + 1;
    return std::span<const double>(x_).subspan(path * nodes, nodes);
}

std::span<const double> PathBatch::s(std::size_t path) const {
    require_full(has_trajectories(), "node access");
    require_path(path, n_paths_);
    const std::size_t nodes = grid_.steps() + 1;
    return std::span<const double>(s_).subspan(path * nodes, nodes);
}

std::span<const double> PathBatch::db(std::size_t path) const {
    require_full(has_trajectories(), "increment access");
    require_path(path, n_paths_);
    const std::size_t m = grid_.steps();
    return std::span<const double>(db_).subspan(path * m, m);
}

std::span<const double> PathBatch::dw(std::size_t path) const {
    require_full(has_trajectories(), "increment access");
    require_path(path, n_paths_);
    const std::size_t m = grid_.steps();
    return std::span<const double>(dw_).subspan(path * m, m);
}

Increments PathBatch::increments(std::size_t path) const {
    require_path(path, n_paths_);
    if (has_trajectories()) {
        const auto b = db(path);
        const auto w = dw(path);
        return Increments{1, grid_.steps(), {b.begin(), b.end()}, {w.begin(), w.end()}};
    }
    if (!seeded_) {
        throw PathDataError("increments of an unseeded batch were not stored");
    }
    return path_increments(grid_, path, params_.rho, seed_);
}

double PathBatch::floor_rate() const noexcept {
    if (scheme_ != Scheme::euler || n_paths_ == 0) {
        return 0.0;
    }
    return static_cast<double>(floor_events_) /
           (static_cast<double>(n_paths_) * static_cast<double>(grid_.steps()));
}

class Simulator {
public:
    Simulator(const ModelParams& p, const TimeGrid& grid, Scheme scheme, const SimOptions& opts,
              std::uint64_t seed, const Increments* provided)
        : p_(p), grid_(grid), scheme_(scheme), opts_(opts), seed_(seed), provided_(provided),
          kt_(opts.kernels != nullptr ? *opts.kernels : kernels::active()) {
        const std::size_t m = grid_.steps();
        const double dt = grid_.dt();
        const ou::TransitionCoeffs ou = ou::transition_coeffs(p_.alpha, p_.beta, dt);
        sqrt_dt_ = std::sqrt(dt);
        decay_ = ou.decay;
        noise_ = ou.stddev / sqrt_dt_;
        level_.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double t = grid_.t(j);
            if (scheme_ == Scheme::euler) {
                level_[j] = emm::q_drift_level(t, p_);
            } else {
                const double q_theta = p_.theta - p_.beta * p_.rho * emm::lambda_mpr(t, p_);
                level_[j] = q_theta * ou.level_factor;
            }
        }
    }

    PathBatch run(std::size_t n_paths) {
        PathBatch batch(p_, grid_, n_paths, seed_, scheme_, provided_ == nullptr);
        const std::size_t m = grid_.steps();
        if (opts_.store == StoreMode::full) {
            batch.y_.resize(n_paths * (m + 1));
            batch.x_.resize(n_paths * (m + 1));
            batch.s_.resize(n_paths * (m + 1));
            batch.db_.resize(n_paths * m);
            batch.dw_.resize(n_paths * m);
        }

        const std::size_t n_blocks = (n_paths + kBlock - 1) / kBlock;
        std::vector<std::size_t> floors(n_blocks, 0);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            Workspace ws;
            for (std::size_t b = next++; b < n_blocks; b = next++) {
                const std::size_t first = b * kBlock;
                floors[b] = run_block(batch, ws, first, std::min(kBlock, n_paths - first));
            }
        };

        unsigned threads = opts_.threads != 0 ? opts_.threads : std::thread::hardware_concurrency();
        threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, n_blocks));
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        for (std::size_t f : floors) batch.floor_events_ += f;
        return batch;
    }

private:
    static constexpr std::size_t kBlock = 256;

    struct Workspace {
        std::vector<double> y = std::vector<double>(kBlock);
        std::vector<double> x = std::vector<double>(kBlock);
        std::vector<double> v = std::vector<double>(kBlock);
        std::vector<double> log_y = std::vector<double>(kBlock);
        std::vector<double> db = std::vector<double>(kBlock);
        std::vector<double> db_indep = std::vector<double>(kBlock);
        std::vector<double> dw = std::vector<double>(kBlock);
        std::vector<std::uint32_t> bits = std::vector<std::uint32_t>(4 * kBlock);
    };

    void load_increments(Workspace& ws, std::size_t step, std::size_t first, std::size_t n) const {
        if (provided_ == nullptr) {
            fill_step_increments(kt_, seed_, step, first, n, sqrt_dt_, p_.rho, ws.db.data(),
                                 ws.db_indep.data(), ws.dw.data(), ws.bits.data());
            return;
        }
        const std::size_t m = grid_.steps();
        for (std::size_t i = 0; i < n; ++i) {
            ws.db[i] = provided_->db[(first + i) * m + step];
            ws.dw[i] = provided_->dw[(first + i) * m + step];
        }
    }

    // Measured from ln s0 so an unmoved path returns s0 exactly.
    static double to_price(double x, double x0, double s0) { return s0 * std::exp(x - x0); }

    static void store_node(PathBatch& batch, const Workspace& ws, std::size_t first,
                           std::size_t n, std::size_t node) {
        const double s0 = batch.params_.s0;
        const double x0 = std::log(s0);
        const std::size_t nodes = batch.grid_.steps() + 1;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t at = (first + i) * nodes + node;
            batch.y_[at] = ws.y[i];
            batch.x_[at] = ws.x[i];
            batch.s_[at] = to_price(ws.x[i], x0, s0);
        }
    }

    std::size_t run_block(PathBatch& batch, Workspace& ws, std::size_t first, std::size_t n) const {
        const std::size_t m = grid_.steps();
        const bool full = opts_.store == StoreMode::full;
        const double dt = grid_.dt();
        const double half_dt = 0.5 * dt;
        const double x0 = std::log(p_.s0);
        const double v0 = p_.v0();
        const double floor_value = y_floor(p_);

        std::fill_n(ws.y.begin(), n, p_.y0);
        std::fill_n(ws.x.begin(), n, x0);
        std::fill_n(ws.v.begin(), n, v0);
        if (full) store_node(batch, ws, first, n, 0);

        std::size_t floored = 0;
        for (std::size_t j = 0; j < m; ++j) {
            load_increments(ws, j, first, n);
            kt_.log_price_step(ws.x.data(), ws.y.data(), ws.db.data(), half_dt, n);
            if (scheme_ == Scheme::euler) {
                for (std::size_t i = 0; i < n; ++i) ws.log_y[i] = std::log(ws.y[i]);
                floored += kt_.euler_vol_step(ws.y.data(), ws.log_y.data(), ws.dw.data(),
                                              level_[j], p_.alpha, p_.beta, dt, floor_value, n);
            } else {
                kt_.ou_step(ws.v.data(), ws.dw.data(), decay_, level_[j], noise_, n);
                for (std::size_t i = 0; i < n; ++i) ws.y[i] = p_.sigma * std::exp(ws.v[i]);
            }
            if (full) {
                store_node(batch, ws, first, n, j + 1);
                for (std::size_t i = 0; i < n; ++i) {
                    batch.db_[(first + i) * m + j] = ws.db[i];
                    batch.dw_[(first + i) * m + j] = ws.dw[i];
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            batch.y_T_[first + i] = ws.y[i];
            batch.x_T_[first + i] = ws.x[i];
            batch.s_T_[first + i] = to_price(ws.x[i], x0, p_.s0);
        }
        return floored;
    }

    const ModelParams& p_;
    const TimeGrid& grid_;
    Scheme scheme_;
    SimOptions opts_;
    std::uint64_t seed_;
    const Increments* provided_;
    const kernels::KernelTable& kt_;
    double sqrt_dt_ = 0.0;
    double decay_ = 1.0;
    double noise_ = 0.0;
    // per step: Euler drift level, or the exact-vol shift (Q° level times the
    // OU level factor)
    std::vector<double> level_;
};

PathBatch simulate(const ModelParams& p, const TimeGrid& grid, std::size_t n_paths,
                   std::uint64_t seed, Scheme scheme, const SimOptions& opts) {
    p.validate(Admissibility::degenerate_limits);
    if (n_paths == 0) {
        throw ValidationError("simulate: need at least one path");
    }
    return Simulator(p, grid, scheme, opts, seed, nullptr).run(n_paths);
}

PathBatch simulate_from_increments(const ModelParams& p, const TimeGrid& grid,
                                   const Increments& inc, Scheme scheme,
                                   const SimOptions& opts) {
    p.validate(Admissibility::degenerate_limits);
    if (inc.steps != grid.steps() || inc.db.size() != inc.n_paths * inc.steps ||
        inc.dw.size() != inc.n_paths * inc.steps) {
        throw PathDataError("increment arrays do not match the grid");
    }
    if (inc.n_paths == 0) {
        throw ValidationError("simulate_from_increments: need at least one path");
    }
    SimOptions full = opts;
    full.store = StoreMode::full;
    return Simulator(p, grid, scheme, full, 0, &inc).run(inc.n_paths);
}

void write_path_csv(const PathBatch& batch, std::ostream& out) {
    if (!batch.has_trajectories()) {
        throw PathDataError("path dump requires a batch simulated with StoreMode::full");
    }
    out << "path,step,t,y,x,s\n";
    char line[160];
    const std::size_t m = batch.grid().steps();
    for (std::size_t path = 0; path < batch.n_paths(); ++path) {
        const auto y = batch.y(path);
        const auto x = batch.x(path);
        const auto s = batch.s(path);
        for (std::size_t j = 0; j <= m; ++j) {
            const int len = std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g,%.17g,%.17g\n",
                                          path, j, batch.grid().t(j), y[j], x[j], s[j]);
            out.write(line, len);
        }
    }
}

}  // namespace expou
