#pragma once

#include "qubonet/kernels/kernels.hpp"

namespace qubonet::kernels {

namespace scalar {
void add_scaled(double* dst, const double* row, double scale, std::size_t n);
void network_forward(const ForwardArgs& args, double* out, std::size_t n);
}  // namespace scalar

#if defined(QUBONET_HAVE_AVX2)
namespace avx2 {
void add_scaled(double* dst, const double* row, double scale, std::size_t n);
void network_forward(const ForwardArgs& args, double* out, std::size_t n);
}  // namespace avx2
#endif

#if defined(QUBONET_HAVE_NEON)
namespace neon {
void add_scaled(double* dst, const double* row, double scale, std::size_t n);
void network_forward(const ForwardArgs& args, double* out, std::size_t n);
}  // namespace neon
#endif

}  // namespace qubonet::kernels
