#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"

namespace graphrank::simd {

namespace {

bool cpu_has_avx2() {
#if defined(GRAPHRANK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return &detail::kScalarTable;
    case Isa::avx2: return avx2_kernels();
  }
  return nullptr;
}

const KernelTable* initial_table() {
  Isa wanted = best_available_isa();
  if (const char* env = std::getenv("GRAPHRANK_SIMD")) {
    if (auto parsed = parse_isa(env)) wanted = *parsed;
  }
  const KernelTable* table = table_for(wanted);
  return table != nullptr ? table : &detail::kScalarTable;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "auto") return best_available_isa();
  return std::nullopt;
}

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* avx2_kernels() {
#if defined(GRAPHRANK_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

Isa best_available_isa() {
  return avx2_kernels() != nullptr ? Isa::avx2 : Isa::scalar;
}

const KernelTable& active_kernels() {
  return *active_slot().load(std::memory_order_acquire);
}

bool select_isa(Isa isa) {
  const KernelTable* table = table_for(isa);
  if (table == nullptr) return false;
  active_slot().store(table, std::memory_order_release);
  return true;
}

}  // namespace graphrank::simd
