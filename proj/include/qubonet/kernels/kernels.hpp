#pragma once

// Data-parallel inner loops with a scalar reference and vectorized variants.
//
// Every variant performs the same IEEE operations in the same order per
// element (no fused multiply-add, no cross-lane reductions), so results are
// bit-identical to the scalar reference. The solvers rely on that for
// reproducibility across machines.

#include <cstddef>
#include <span>
#include <string_view>

namespace qubonet::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// Batched evaluation of Y(x) = v0 + sum_u v[u] * g(sum_j w[u][j] * x_j)
// over n points stored column-wise.
struct ForwardArgs {
  std::size_t units = 0;
  std::size_t inputs = 0;
  const double* const* columns = nullptr;  // inputs pointers, n values each
  const double* weights = nullptr;         // units x inputs, row-major
  const double* out_weights = nullptr;     // units
  double out_bias = 0.0;
  const double* activation = nullptr;      // c0..c_degree
  std::size_t activation_degree = 0;
};

struct Table {
  Isa isa;
  // dst[k] += scale * row[k]
  void (*add_scaled)(double* dst, const double* row, double scale,
                     std::size_t n);
  void (*network_forward)(const ForwardArgs& args, double* out, std::size_t n);
};

bool available(Isa isa);
const Table& table(Isa isa);

// Best variant the CPU supports. QUBONET_KERNELS=scalar|avx2|neon overrides
// when that variant is available.
const Table& active();

}  // namespace qubonet::kernels
