#include "variants.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace mixtest::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(MIXTEST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* lookup(std::string_view name) noexcept {
  if (name == "scalar")
    return &scalar_kernels();
#if defined(MIXTEST_HAVE_AVX2)
  if (name == "avx2" && cpu_has_avx2())
    return &detail::avx2_kernels();
#endif
  return nullptr;
}

const KernelTable* initial_choice() noexcept {
  if (const char* env = std::getenv("MIXTEST_KERNELS"))
    if (const KernelTable* t = lookup(env))
      return t;
  if (const KernelTable* t = lookup("avx2"))
    return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{initial_choice()};
  return current;
}

} // namespace

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const KernelTable* t = lookup("avx2"))
    out.push_back(t);
  return out;
}

const KernelTable& active() noexcept {
  return *slot().load(std::memory_order_acquire);
}

bool select_kernels(std::string_view name) {
  const KernelTable* t = lookup(name);
  if (t == nullptr)
    return false;
  slot().store(t, std::memory_order_release);
  return true;
}

} // namespace mixtest::kernels
