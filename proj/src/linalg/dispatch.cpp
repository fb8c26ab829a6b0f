#include <atomic>
#include <cstdlib>
#include <string>

#include "kernel_tables.hpp"
#include "netcascade/error.hpp"

namespace netcascade::kernels {
namespace {

bool cpu_has(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(NETCASCADE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(NETCASCADE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("NETCASCADE_KERNELS")) {
    const std::string want(env);
    for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
      if (want == name(b) && cpu_has(b)) return &table(b);
    }
  }
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (cpu_has(b)) return &table(b);
  }
  return &detail::scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> t{initial_table()};
  return t;
}

}  // namespace

std::string_view name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool is_available(Backend b) { return cpu_has(b); }

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
    if (cpu_has(b)) out.push_back(b);
  }
  return out;
}

const KernelTable& table(Backend b) {
  if (!cpu_has(b)) fail(ErrorCode::InvalidArgument, "kernel backend not available: " + std::string(name(b)));
  switch (b) {
#if defined(NETCASCADE_HAVE_AVX2)
    case Backend::Avx2: return detail::avx2_table();
#endif
#if defined(NETCASCADE_HAVE_NEON)
    case Backend::Neon: return detail::neon_table();
#endif
    default: return detail::scalar_table();
  }
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

Backend active_backend() { return active().backend; }

void set_backend(Backend b) { current().store(&table(b), std::memory_order_relaxed); }

}  // namespace netcascade::kernels
