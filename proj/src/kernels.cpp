#include "crkfr/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace crkfr::kernels {

#if defined(CRKFR_WITH_AVX2)
const KernelTable* avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#if defined(CRKFR_WITH_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* initial_choice() {
  if (const char* env = std::getenv("CRKFR_SIMD")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && avx2_table()) return avx2_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select(const std::string& name) {
  if (name == "scalar") {
    current().store(&scalar_table());
    return true;
  }
  if (name == "avx2" && avx2_table()) {
    current().store(avx2_table());
    return true;
  }
  return false;
}

std::vector<std::string> available_variants() {
  std::vector<std::string> v{"scalar"};
  if (avx2_table()) v.emplace_back("avx2");
  return v;
}

}  // namespace crkfr::kernels
