#include <arm_neon.h>

#include <vector>

#include "kernels/variants.hpp"

namespace qubonet::kernels::neon {

void add_scaled(double* dst, const double* row, double scale, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(scale);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    float64x2_t d = vld1q_f64(dst + k);
    float64x2_t r = vld1q_f64(row + k);
    vst1q_f64(dst + k, vaddq_f64(d, vmulq_f64(vs, r)));
  }
  for (; k < n; ++k) dst[k] = dst[k] + scale * row[k];
}

void network_forward(const ForwardArgs& a, double* out, std::size_t n) {
  const double* c = a.activation;
  std::size_t p = 0;
  for (; p + 2 <= n; p += 2) {
    float64x2_t acc = vdupq_n_f64(a.out_bias);
    for (std::size_t u = 0; u < a.units; ++u) {
      const double* w = a.weights + u * a.inputs;
      float64x2_t s = vdupq_n_f64(0.0);
      for (std::size_t j = 0; j < a.inputs; ++j) {
        float64x2_t x = vld1q_f64(a.columns[j] + p);
        s = vaddq_f64(s, vmulq_f64(vdupq_n_f64(w[j]), x));
      }
      float64x2_t g = vdupq_n_f64(c[a.activation_degree]);
      for (std::size_t k = a.activation_degree; k-- > 0;) {
        g = vaddq_f64(vmulq_f64(g, s), vdupq_n_f64(c[k]));
      }
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(a.out_weights[u]), g));
    }
    vst1q_f64(out + p, acc);
  }
  if (p < n) {
    std::vector<const double*> cols(a.inputs);
    for (std::size_t j = 0; j < a.inputs; ++j) cols[j] = a.columns[j] + p;
    ForwardArgs tail = a;
    tail.columns = cols.data();
    scalar::network_forward(tail, out + p, n - p);
  }
}

}  // namespace qubonet::kernels::neon
