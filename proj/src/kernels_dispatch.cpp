#include "projlat/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>

namespace projlat::kernels {

bool cpu_supports_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelTable* choose() {
    const char* force = std::getenv("PROJLAT_KERNELS");
    if (force != nullptr) {
        if (std::strcmp(force, "scalar") == 0) return &scalar_table;
        if (std::strcmp(force, "avx2") == 0) {
            const KernelTable* t = avx2_table();
            if (t != nullptr && cpu_supports_avx2_fma()) return t;
            return &scalar_table;  // requested variant unavailable
        }
    }
    const KernelTable* t = avx2_table();
    if (t != nullptr && cpu_supports_avx2_fma()) return t;
    return &scalar_table;
}

}  // namespace

const KernelTable& active() {
    static const KernelTable* table = nullptr;
    static std::once_flag flag;
    std::call_once(flag, [] { table = choose(); });
    return *table;
}

}  // namespace projlat::kernels
