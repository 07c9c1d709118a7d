#include "expou/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace expou::kernels {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

namespace {

bool usable(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
        case Isa::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& resolve() {
    if (const char* forced = std::getenv("EXPOU_SIMD"); forced != nullptr && *forced != '\0') {
        const std::string want(forced);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == isa_name(isa)) {
                return table_for(isa);
            }
        }
        throw std::invalid_argument("EXPOU_SIMD: unknown kernel set '" + want + "'");
    }
    const auto isas = available_isas();
    return table_for(isas.back());
}

}  // namespace

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (usable(isa)) {
            out.push_back(isa);
        }
    }
    return out;
}

const KernelTable& table_for(Isa isa) {
    if (!usable(isa)) {
        throw std::invalid_argument("kernel set '" + std::string(isa_name(isa)) +
                                    "' is not available on this machine");
    }
    switch (isa) {
        case Isa::scalar: return scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2: return detail::avx2_table();
#endif
#if defined(__aarch64__)
        case Isa::neon: return detail::neon_table();
#endif
        default: break;
    }
    return scalar_table();
}

const KernelTable& active() {
    static const KernelTable& table = resolve();
    return table;
}

}  // namespace expou::kernels
