// AVX2 variants of the path-engine kernels.  Functions carry a target
// attribute instead of the file being built with -mavx2, so nothing from
// shared headers is instantiated with AVX2 encodings.

#include "expou/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include "expou/philox.hpp"

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#define EXPOU_AVX2 __attribute__((target("avx2")))

namespace expou::kernels {

namespace {

constexpr std::size_t kLanes = 4;

EXPOU_AVX2 void philox_block(std::uint64_t key, std::uint32_t step, std::uint64_t first_path,
                             std::uint32_t stream, std::size_t n, std::uint32_t* out) {
    const __m256i mask32 = _mm256_set1_epi64x(0xFFFFFFFFLL);
    const __m256i mul0 = _mm256_set1_epi64x(philox::kMul0);
    const __m256i mul1 = _mm256_set1_epi64x(philox::kMul1);

    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const std::uint64_t p = first_path + i;
        __m256i c0 = _mm256_set1_epi64x(step);
        __m256i c1 = _mm256_and_si256(
            _mm256_set_epi64x(static_cast<long long>(p + 3), static_cast<long long>(p + 2),
                              static_cast<long long>(p + 1), static_cast<long long>(p)),
            mask32);
        __m256i c2 = _mm256_set_epi64x(static_cast<long long>((p + 3) >> 32),
                                       static_cast<long long>((p + 2) >> 32),
                                       static_cast<long long>((p + 1) >> 32),
                                       static_cast<long long>(p >> 32));
        __m256i c3 = _mm256_set1_epi64x(stream);

        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int r = 0; r < philox::kRounds; ++r) {
            if (r > 0) {
                k0 += philox::kWeyl0;
                k1 += philox::kWeyl1;
            }
            const __m256i prod0 = _mm256_mul_epu32(mul0, c0);
            const __m256i prod1 = _mm256_mul_epu32(mul1, c2);
            const __m256i hi0 = _mm256_srli_epi64(prod0, 32);
            const __m256i lo0 = _mm256_and_si256(prod0, mask32);
            const __m256i hi1 = _mm256_srli_epi64(prod1, 32);
            const __m256i lo1 = _mm256_and_si256(prod1, mask32);
            const __m256i vk0 = _mm256_set1_epi64x(k0);
            const __m256i vk1 = _mm256_set1_epi64x(k1);
            c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), vk0);
            c1 = lo1;
            c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), vk1);
            c3 = lo0;
        }

        alignas(32) std::uint64_t w[4][kLanes];
        _mm256_store_si256(reinterpret_cast<__m256i*>(w[0]), c0);
        _mm256_store_si256(reinterpret_cast<__m256i*>(w[1]), c1);
        _mm256_store_si256(reinterpret_cast<__m256i*>(w[2]), c2);
        _mm256_store_si256(reinterpret_cast<__m256i*>(w[3]), c3);
        for (std::size_t lane = 0; lane < kLanes; ++lane) {
            for (std::size_t word = 0; word < 4; ++word) {
                out[4 * (i + lane) + word] = static_cast<std::uint32_t>(w[word][lane]);
            }
        }
    }
    if (i < n) {
        scalar_table().philox_block(key, step, first_path + i, stream, n - i, out + 4 * i);
    }
}

EXPOU_AVX2 void correlate(const double* db, const double* db_indep, double rho, double rho_bar,
                          std::size_t n, double* dw) {
    const __m256d r = _mm256_set1_pd(rho);
    const __m256d rb = _mm256_set1_pd(rho_bar);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d a = _mm256_mul_pd(r, _mm256_loadu_pd(db + i));
        const __m256d b = _mm256_mul_pd(rb, _mm256_loadu_pd(db_indep + i));
        _mm256_storeu_pd(dw + i, _mm256_add_pd(a, b));
    }
    for (; i < n; ++i) {
        dw[i] = rho * db[i] + rho_bar * db_indep[i];
    }
}

EXPOU_AVX2 void log_price_step(double* x, const double* y, const double* db, double half_dt,
                               std::size_t n) {
    const __m256d h = _mm256_set1_pd(half_dt);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d yv = _mm256_loadu_pd(y + i);
        const __m256d drift = _mm256_mul_pd(h, _mm256_mul_pd(yv, yv));
        const __m256d shock = _mm256_mul_pd(yv, _mm256_loadu_pd(db + i));
        const __m256d xv = _mm256_sub_pd(_mm256_loadu_pd(x + i), drift);
        _mm256_storeu_pd(x + i, _mm256_add_pd(xv, shock));
    }
    for (; i < n; ++i) {
        x[i] = (x[i] - half_dt * (y[i] * y[i])) + y[i] * db[i];
    }
}

EXPOU_AVX2 std::size_t euler_vol_step(double* y, const double* log_y, const double* dw,
                                      double level, double alpha, double beta, double dt,
                                      double y_floor, std::size_t n) {
    const __m256d lv = _mm256_set1_pd(level);
    const __m256d al = _mm256_set1_pd(alpha);
    const __m256d be = _mm256_set1_pd(beta);
    const __m256d dtv = _mm256_set1_pd(dt);
    const __m256d fl = _mm256_set1_pd(y_floor);
    std::size_t floored = 0;
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d yv = _mm256_loadu_pd(y + i);
        const __m256d drift = _mm256_sub_pd(lv, _mm256_mul_pd(al, _mm256_loadu_pd(log_y + i)));
        const __m256d det = _mm256_add_pd(yv, _mm256_mul_pd(_mm256_mul_pd(yv, drift), dtv));
        const __m256d shock = _mm256_mul_pd(_mm256_mul_pd(be, yv), _mm256_loadu_pd(dw + i));
        const __m256d next = _mm256_add_pd(det, shock);
        const __m256d below = _mm256_cmp_pd(next, _mm256_setzero_pd(), _CMP_LE_OQ);
        floored += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(below)));
        _mm256_storeu_pd(y + i, _mm256_blendv_pd(next, fl, below));
    }
    if (i < n) {
        floored += scalar_table().euler_vol_step(y + i, log_y + i, dw + i, level, alpha, beta,
                                                 dt, y_floor, n - i);
    }
    return floored;
}

EXPOU_AVX2 void ou_step(double* v, const double* dw, double decay, double shift, double noise,
                        std::size_t n) {
    const __m256d de = _mm256_set1_pd(decay);
    const __m256d sh = _mm256_set1_pd(shift);
    const __m256d no = _mm256_set1_pd(noise);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d base = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(v + i), de), sh);
        _mm256_storeu_pd(v + i, _mm256_add_pd(base, _mm256_mul_pd(no, _mm256_loadu_pd(dw + i))));
    }
    for (; i < n; ++i) {
        v[i] = (v[i] * decay + shift) + noise * dw[i];
    }
}

EXPOU_AVX2 void vanilla_payoff(const double* s, double strike, bool call, std::size_t n,
                               double* out) {
    const __m256d k = _mm256_set1_pd(strike);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d sv = _mm256_loadu_pd(s + i);
        const __m256d d = call ? _mm256_sub_pd(sv, k) : _mm256_sub_pd(k, sv);
        _mm256_storeu_pd(out + i, _mm256_max_pd(d, zero));
    }
    if (i < n) {
        scalar_table().vanilla_payoff(s + i, strike, call, n - i, out + i);
    }
}

constexpr KernelTable kAvx2{
    .isa = Isa::avx2,
    .philox_block = philox_block,
    .correlate = correlate,
    .log_price_step = log_price_step,
    .euler_vol_step = euler_vol_step,
    .ou_step = ou_step,
    .vanilla_payoff = vanilla_payoff,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace expou::kernels

#endif
