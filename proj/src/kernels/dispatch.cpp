#include <cstdlib>
#include <string>
#include <string_view>

#include "kernels/variants.hpp"
#include "qubonet/error.hpp"

namespace qubonet::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

namespace {

constexpr Table kScalar{Isa::kScalar, scalar::add_scaled,
                        scalar::network_forward};
#if defined(QUBONET_HAVE_AVX2)
constexpr Table kAvx2{Isa::kAvx2, avx2::add_scaled, avx2::network_forward};
#endif
#if defined(QUBONET_HAVE_NEON)
constexpr Table kNeon{Isa::kNeon, neon::add_scaled, neon::network_forward};
#endif

const Table& select() {
  Isa best = Isa::kScalar;
  if (available(Isa::kAvx2)) best = Isa::kAvx2;
  if (available(Isa::kNeon)) best = Isa::kNeon;
  if (const char* env = std::getenv("QUBONET_KERNELS")) {
    std::string_view want(env);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (want == isa_name(isa) && available(isa)) best = isa;
    }
  }
  return table(best);
}

}  // namespace

bool available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(QUBONET_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(QUBONET_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Table& table(Isa isa) {
  if (!available(isa)) {
    throw InvalidArgument("kernel variant '" + std::string(isa_name(isa)) +
                          "' is not available on this CPU");
  }
  switch (isa) {
#if defined(QUBONET_HAVE_AVX2)
    case Isa::kAvx2: return kAvx2;
#endif
#if defined(QUBONET_HAVE_NEON)
    case Isa::kNeon: return kNeon;
#endif
    default: return kScalar;
  }
}

const Table& active() {
  static const Table& t = select();
  return t;
}

}  // namespace qubonet::kernels
