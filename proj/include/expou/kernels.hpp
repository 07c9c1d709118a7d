#pragma once

// Data-parallel inner loops of the path engine.
//
// Every kernel works on one block of paths at a fixed time step.  The scalar
// table is the reference; the vector tables evaluate the same IEEE operations
// in the same order (no FMA contraction, no reassociation), so every ISA
// produces bit-identical output.  Transcendentals (log, exp, sin, cos) stay in
// scalar libm calls outside the kernels for the same reason.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace expou::kernels {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;

    /// Philox4x32-10 on counters (step, path_lo, path_hi, stream) for paths
    /// first_path .. first_path + n - 1; out receives 4 words per path.
    void (*philox_block)(std::uint64_t key, std::uint32_t step, std::uint64_t first_path,
                         std::uint32_t stream, std::size_t n, std::uint32_t* out);

    /// dw = rho * db + rho_bar * db_indep
    void (*correlate)(const double* db, const double* db_indep, double rho, double rho_bar,
                      std::size_t n, double* dw);

    /// x = (x - half_dt * (y * y)) + y * db
    void (*log_price_step)(double* x, const double* y, const double* db, double half_dt,
                           std::size_t n);

    /// y = (y + (y * (level - alpha * log_y)) * dt) + (beta * y) * dw; entries
    /// that come out <= 0 are replaced by y_floor.  Returns how many were.
    std::size_t (*euler_vol_step)(double* y, const double* log_y, const double* dw,
                                  double level, double alpha, double beta, double dt,
                                  double y_floor, std::size_t n);

    /// v = (v * decay + shift) + noise * dw
    void (*ou_step)(double* v, const double* dw, double decay, double shift, double noise,
                    std::size_t n);

    /// out = max(s - strike, 0) for calls, max(strike - s, 0) for puts.
    void (*vanilla_payoff)(const double* s, double strike, bool call, std::size_t n,
                           double* out);
};

[[nodiscard]] const KernelTable& scalar_table() noexcept;

/// Tables usable on this machine, scalar first.
[[nodiscard]] std::vector<Isa> available_isas();

/// Table for a given ISA; throws std::invalid_argument if it is not usable here.
[[nodiscard]] const KernelTable& table_for(Isa isa);

/// The table the engine uses: the widest available ISA, unless EXPOU_SIMD is
/// set to "scalar", "avx2" or "neon".  Resolved once per process.
[[nodiscard]] const KernelTable& active();

namespace detail {
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(__aarch64__)
const KernelTable& neon_table() noexcept;
#endif
}  // namespace detail

}  // namespace expou::kernels
