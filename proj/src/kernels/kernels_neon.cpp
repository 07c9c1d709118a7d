// NEON (AArch64) variants of the path-engine kernels.  AdvSIMD is baseline
// on AArch64, so no runtime probe is needed beyond compiling this file.

#include "expou/kernels.hpp"

#if defined(__aarch64__)

#include "expou/philox.hpp"

#include <arm_neon.h>

#include <cstddef>
#include <cstdint>

namespace expou::kernels {

namespace {

constexpr std::size_t kLanes = 2;

void philox_block(std::uint64_t key, std::uint32_t step, std::uint64_t first_path,
                  std::uint32_t stream, std::size_t n, std::uint32_t* out) {
    const uint32x2_t mul0 = vdup_n_u32(philox::kMul0);
    const uint32x2_t mul1 = vdup_n_u32(philox::kMul1);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const std::uint64_t p = first_path + i;
        const std::uint32_t lo[2] = {static_cast<std::uint32_t>(p),
                                     static_cast<std::uint32_t>(p + 1)};
        const std::uint32_t hi[2] = {static_cast<std::uint32_t>(p >> 32),
                                     static_cast<std::uint32_t>((p + 1) >> 32)};
        uint32x2_t c0 = vdup_n_u32(step);
        uint32x2_t c1 = vld1_u32(lo);
        uint32x2_t c2 = vld1_u32(hi);
        uint32x2_t c3 = vdup_n_u32(stream);
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int r = 0; r < philox::kRounds; ++r) {
            if (r > 0) {
                k0 += philox::kWeyl0;
                k1 += philox::kWeyl1;
            }
            const uint64x2_t prod0 = vmull_u32(mul0, c0);
            const uint64x2_t prod1 = vmull_u32(mul1, c2);
            const uint32x2_t hi0 = vshrn_n_u64(prod0, 32);
            const uint32x2_t lo0 = vmovn_u64(prod0);
            const uint32x2_t hi1 = vshrn_n_u64(prod1, 32);
            const uint32x2_t lo1 = vmovn_u64(prod1);
            c0 = veor_u32(veor_u32(hi1, c1), vdup_n_u32(k0));
            c1 = lo1;
            c2 = veor_u32(veor_u32(hi0, c3), vdup_n_u32(k1));
            c3 = lo0;
        }
        std::uint32_t w[4][kLanes];
        vst1_u32(w[0], c0);
        vst1_u32(w[1], c1);
        vst1_u32(w[2], c2);
        vst1_u32(w[3], c3);
        for (std::size_t lane = 0; lane < kLanes; ++lane) {
            for (std::size_t word = 0; word < 4; ++word) {
                out[4 * (i + lane) + word] = w[word][lane];
            }
        }
    }
    if (i < n) {
        scalar_table().philox_block(key, step, first_path + i, stream, n - i, out + 4 * i);
    }
}

void correlate(const double* db, const double* db_indep, double rho, double rho_bar,
               std::size_t n, double* dw) {
    const float64x2_t r = vdupq_n_f64(rho);
    const float64x2_t rb = vdupq_n_f64(rho_bar);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t a = vmulq_f64(r, vld1q_f64(db + i));
        const float64x2_t b = vmulq_f64(rb, vld1q_f64(db_indep + i));
        vst1q_f64(dw + i, vaddq_f64(a, b));
    }
    for (; i < n; ++i) {
        dw[i] = rho * db[i] + rho_bar * db_indep[i];
    }
}

void log_price_step(double* x, const double* y, const double* db, double half_dt,
                    std::size_t n) {
    const float64x2_t h = vdupq_n_f64(half_dt);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t yv = vld1q_f64(y + i);
        const float64x2_t drift = vmulq_f64(h, vmulq_f64(yv, yv));
        const float64x2_t shock = vmulq_f64(yv, vld1q_f64(db + i));
        const float64x2_t xv = vsubq_f64(vld1q_f64(x + i), drift);
        vst1q_f64(x + i, vaddq_f64(xv, shock));
    }
    for (; i < n; ++i) {
        x[i] = (x[i] - half_dt * (y[i] * y[i])) + y[i] * db[i];
    }
}

std::size_t euler_vol_step(double* y, const double* log_y, const double* dw, double level,
                           double alpha, double beta, double dt, double y_floor,
                           std::size_t n) {
    const float64x2_t lv = vdupq_n_f64(level);
    const float64x2_t al = vdupq_n_f64(alpha);
    const float64x2_t be = vdupq_n_f64(beta);
    const float64x2_t dtv = vdupq_n_f64(dt);
    const float64x2_t fl = vdupq_n_f64(y_floor);
    std::size_t floored = 0;
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t yv = vld1q_f64(y + i);
        const float64x2_t drift = vsubq_f64(lv, vmulq_f64(al, vld1q_f64(log_y + i)));
        const float64x2_t det = vaddq_f64(yv, vmulq_f64(vmulq_f64(yv, drift), dtv));
        const float64x2_t shock = vmulq_f64(vmulq_f64(be, yv), vld1q_f64(dw + i));
        const float64x2_t next = vaddq_f64(det, shock);
        const uint64x2_t below = vcleq_f64(next, vdupq_n_f64(0.0));
        floored += static_cast<std::size_t>((vgetq_lane_u64(below, 0) & 1u) +
                                            (vgetq_lane_u64(below, 1) & 1u));
        vst1q_f64(y + i, vbslq_f64(below, fl, next));
    }
    if (i < n) {
        floored += scalar_table().euler_vol_step(y + i, log_y + i, dw + i, level, alpha, beta,
                                                 dt, y_floor, n - i);
    }
    return floored;
}

void ou_step(double* v, const double* dw, double decay, double shift, double noise,
             std::size_t n) {
    const float64x2_t de = vdupq_n_f64(decay);
    const float64x2_t sh = vdupq_n_f64(shift);
    const float64x2_t no = vdupq_n_f64(noise);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t base = vaddq_f64(vmulq_f64(vld1q_f64(v + i), de), sh);
        vst1q_f64(v + i, vaddq_f64(base, vmulq_f64(no, vld1q_f64(dw + i))));
    }
    for (; i < n; ++i) {
        v[i] = (v[i] * decay + shift) + noise * dw[i];
    }
}

void vanilla_payoff(const double* s, double strike, bool call, std::size_t n, double* out) {
    const float64x2_t k = vdupq_n_f64(strike);
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t sv = vld1q_f64(s + i);
        const float64x2_t d = call ? vsubq_f64(sv, k) : vsubq_f64(k, sv);
        // d > 0 ? d : 0, matching the scalar select (vmaxq differs on NaN)
        vst1q_f64(out + i, vbslq_f64(vcgtq_f64(d, zero), d, zero));
    }
    if (i < n) {
        scalar_table().vanilla_payoff(s + i, strike, call, n - i, out + i);
    }
}

constexpr KernelTable kNeon{
    .isa = Isa::neon,
    .philox_block = philox_block,
    .correlate = correlate,
    .log_price_step = log_price_step,
    .euler_vol_step = euler_vol_step,
    .ou_step = ou_step,
    .vanilla_payoff = vanilla_payoff,
};

}  // namespace

namespace detail {
const KernelTable& neon_table() noexcept { return kNeon; }
}  // namespace detail

}  // namespace expou::kernels

#endif
