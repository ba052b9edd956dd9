#include "kernels_impl.hpp"

#include "enthier/error.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace enthier::kernels {

namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(ENTHIER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* initial_table() noexcept {
    const char* env = std::getenv("ENTHIER_KERNELS");
    const std::string choice = env ? env : "auto";
    if (choice == "scalar" || !avx2_supported()) return &detail::kScalarTable;
    return avx2_table();
}

std::atomic<const KernelTable*>& current() noexcept {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return detail::kScalarTable; }

const KernelTable* avx2_table() noexcept {
#if defined(ENTHIER_HAVE_AVX2)
    return &detail::kAvx2Table;
#else
    return nullptr;
#endif
}

bool avx2_supported() noexcept {
    static const bool supported = avx2_table() != nullptr && cpu_has_avx2_fma();
    return supported;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

Backend active_backend() noexcept { return active().backend; }

void set_backend(Backend b) {
    if (b == Backend::scalar) {
        current().store(&detail::kScalarTable);
        return;
    }
    if (!avx2_supported()) throw Error("AVX2 kernels are not available on this machine");
    current().store(avx2_table());
}

std::string_view backend_name(Backend b) noexcept { return b == Backend::avx2 ? "avx2" : "scalar"; }

}  // namespace enthier::kernels
