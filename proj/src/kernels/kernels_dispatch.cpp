#include <cstdlib>
#include <cstring>

#include "htlab/kernels.hpp"

namespace htlab::kernels {

const KernelTable* avx2_table_impl();  // kernels_avx2.cpp

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_active() {
  const char* mode = std::getenv("HTLAB_SIMD");
  if (mode && std::strcmp(mode, "scalar") == 0) return &scalar_table();
  const KernelTable* avx2 = avx2_table();
  if (mode && std::strcmp(mode, "avx2") == 0 && avx2) return avx2;
  return avx2 ? avx2 : &scalar_table();
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable* table =
      cpu_has_avx2() ? avx2_table_impl() : nullptr;
  return table;
}

const KernelTable& active_table() {
  static const KernelTable* table = pick_active();
  return *table;
}

}  // namespace htlab::kernels
