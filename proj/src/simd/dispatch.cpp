#include <atomic>
#include <cstdlib>
#include <string>

#include "archpursuit/errors.hpp"
#include "archpursuit/simd/kernels.hpp"

namespace archpursuit::simd {

bool avx2_runtime_supported() noexcept;

namespace {

std::atomic<const KernelTable*>& active_slot() noexcept {
    static std::atomic<const KernelTable*> slot{&kernels(detect_isa())};
    return slot;
}

} // namespace

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return avx2_runtime_supported();
    }
    return false;
}

Isa detect_isa() noexcept {
    if (const char* env = std::getenv("ARCHPURSUIT_SIMD"); env && std::string(env) == "scalar")
        return Isa::scalar;
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

const KernelTable& kernels(Isa isa) {
    if (!isa_supported(isa)) throw ArgumentError(std::string("unsupported ISA: ") + std::string(isa_name(isa)));
    return isa == Isa::avx2 ? avx2_kernels() : scalar_kernels();
}

const KernelTable& kernels() noexcept { return *active_slot().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) { active_slot().store(&kernels(isa), std::memory_order_release); }

Isa active_isa() noexcept { return kernels().isa; }

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

} // namespace archpursuit::simd
