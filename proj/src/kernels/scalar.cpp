#include "kernels/variants.hpp"

namespace qubonet::kernels::scalar {

void add_scaled(double* dst, const double* row, double scale, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) dst[k] = dst[k] + scale * row[k];
}

// Reference for the vectorized variants; keep the operation order in sync.
void network_forward(const ForwardArgs& a, double* out, std::size_t n) {
  const double* c = a.activation;
  for (std::size_t p = 0; p < n; ++p) {
    double acc = a.out_bias;
    for (std::size_t u = 0; u < a.units; ++u) {
      const double* w = a.weights + u * a.inputs;
      double s = 0.0;
      for (std::size_t j = 0; j < a.inputs; ++j) s = s + w[j] * a.columns[j][p];
      double g = c[a.activation_degree];
      for (std::size_t k = a.activation_degree; k-- > 0;) g = g * s + c[k];
      acc = acc + a.out_weights[u] * g;
    }
    out[p] = acc;
  }
}

}  // namespace qubonet::kernels::scalar
