// Built with -mavx2 only; dispatch guarantees the CPU supports it.

#include <immintrin.h>

#include <vector>

#include "kernels/variants.hpp"

namespace qubonet::kernels::avx2 {

void add_scaled(double* dst, const double* row, double scale, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d d = _mm256_loadu_pd(dst + k);
    __m256d r = _mm256_loadu_pd(row + k);
    _mm256_storeu_pd(dst + k, _mm256_add_pd(d, _mm256_mul_pd(vs, r)));
  }
  for (; k < n; ++k) dst[k] = dst[k] + scale * row[k];
}

void network_forward(const ForwardArgs& a, double* out, std::size_t n) {
  const double* c = a.activation;
  std::size_t p = 0;
  for (; p + 4 <= n; p += 4) {
    __m256d acc = _mm256_set1_pd(a.out_bias);
    for (std::size_t u = 0; u < a.units; ++u) {
      const double* w = a.weights + u * a.inputs;
      __m256d s = _mm256_setzero_pd();
      for (std::size_t j = 0; j < a.inputs; ++j) {
        __m256d x = _mm256_loadu_pd(a.columns[j] + p);
        s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(w[j]), x));
      }
      __m256d g = _mm256_set1_pd(c[a.activation_degree]);
      for (std::size_t k = a.activation_degree; k-- > 0;) {
        g = _mm256_add_pd(_mm256_mul_pd(g, s), _mm256_set1_pd(c[k]));
      }
      acc = _mm256_add_pd(acc,
                          _mm256_mul_pd(_mm256_set1_pd(a.out_weights[u]), g));
    }
    _mm256_storeu_pd(out + p, acc);
  }
  if (p < n) {
    // Tail points are shifted views into the same columns.
    std::vector<const double*> cols(a.inputs);
    for (std::size_t j = 0; j < a.inputs; ++j) cols[j] = a.columns[j] + p;
    ForwardArgs tail = a;
    tail.columns = cols.data();
    scalar::network_forward(tail, out + p, n - p);
  }
}

}  // namespace qubonet::kernels::avx2
