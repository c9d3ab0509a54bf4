#include <cstdlib>
#include <string>

#include "vemg/simd.hpp"

namespace vemg::simd {

#ifndef VEMG_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("VEMG_KERNELS");
      env != nullptr && std::string(env) == "scalar")
    return scalar_kernels();
  if (const KernelTable* t = avx2_kernels(); t != nullptr && cpu_has_avx2())
    return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

}  // namespace vemg::simd
