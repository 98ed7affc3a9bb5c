#pragma once

// Two-layer network  Y(x) = sum_i v_i g(sum_j w_ij x_j) + v0  with binary
// encoded parameters, and its compilation into a QUBO whose ground state is
// the MSE-optimal parameter configuration.
//
// Layout modes:
//  - first_layer_bias = false: hidden units i = 1..N_h see the N_f raw
//    features; v0 is a separate output bias.
//  - first_layer_bias = true: the fully extended form. A constant feature
//    x_0 = 1 is prepended and an extra unit i = 0 carries the output bias,
//    so sums run over i = 0..N_h and j = 0..N_f and there is no separate v0.
// In both modes the output-bias parameter (v0, or v_0 of unit 0) uses the
// `last_bias_levels` encoding.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qubonet/dataset.hpp"
#include "qubonet/poly.hpp"
#include "qubonet/quadratize.hpp"
#include "qubonet/qubo.hpp"

namespace qubonet {

// g(x) = sum_k coeffs[k] x^k
struct ActivationPoly {
  std::vector<double> coeffs;
  std::string name;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double operator()(double x) const;
  double derivative(double x) const;

  static ActivationPoly square();       // x^2
  static ActivationPoly relu2();        // (1 + x)^2 / 4
  static ActivationPoly sigmoid_fit();  // least-squares cubic on [-4, 4]
  // Throws ConfigError naming the presets for unknown names.
  static ActivationPoly preset(std::string_view name);
  static std::vector<std::string> preset_names();
};

// Affine map from N_b bits (bit 0 most significant) onto [lo, hi]:
//   p = lo + (hi - lo) * sum_a 2^-a t_a / (2 - 2^(1 - N_b))
// The standard encoding is lo = -1, hi = 1.
struct Encoding {
  double lo = -1.0;
  double hi = 1.0;

  static Encoding standard() { return {-1.0, 1.0}; }
  static Encoding levels(double a, double b) { return {a, b}; }
  bool is_standard() const { return lo == -1.0 && hi == 1.0; }
  // Coefficient of bit a.
  double bit_weight(std::size_t a, std::size_t n_bits) const;

  friend bool operator==(const Encoding&, const Encoding&) = default;
};

double decode_param(std::span<const std::uint8_t> bits, const Encoding& enc,
                    std::size_t n_bits);

struct NetworkShape {
  std::size_t n_features = 2;
  std::size_t n_hidden = 2;
  std::size_t n_bits = 1;
  bool first_layer_bias = false;
  ActivationPoly activation = ActivationPoly::square();
  std::pair<double, double> last_bias_levels{-0.5, 0.0};

  // Throws ConfigError with the offending field name.
  void validate() const;
  std::size_t unit_count() const { return n_hidden + (first_layer_bias ? 1 : 0); }
  std::size_t input_count() const {
    return n_features + (first_layer_bias ? 1 : 0);
  }
  bool separate_output_bias() const { return !first_layer_bias; }
};

enum class ParamRole { kHiddenWeight, kOutputWeight, kOutputBias };

struct ParamBlock {
  std::string name;
  ParamRole role = ParamRole::kHiddenWeight;
  std::size_t unit = 0;   // layout unit index (0-based)
  std::size_t input = 0;  // layout input index (0-based), hidden weights only
  Var first_var = 0;
  std::size_t n_bits = 0;
  Encoding encoding;
};

// Parameter blocks in order: w[unit][input] row-major, then v[unit], then v0
// when separate. Blocks are disjoint and contiguous from variable 0.
struct ParamLayout {
  std::vector<ParamBlock> params;
  std::size_t total_spins = 0;

  static ParamLayout for_shape(const NetworkShape& shape);

  const ParamBlock& hidden_weight(std::size_t unit, std::size_t input) const;
  const ParamBlock& output_weight(std::size_t unit) const;
  const ParamBlock* output_bias() const;  // nullptr in extended mode

 private:
  std::size_t units_ = 0;
  std::size_t inputs_ = 0;
};

// The parameter as a unit-basis polynomial in its bits.
MultilinearPoly param_poly(const ParamBlock& block);

// Y(x) over the parameter bits. `x` has n_features raw entries; the
// constant feature is prepended internally in extended mode.
MultilinearPoly network_output_poly(const NetworkShape& shape,
                                    std::span<const double> x);

// (1/N_d) sum_a (y_a - Y(x_a))^2 over the parameter bits.
MultilinearPoly loss_poly(const NetworkShape& shape, const Dataset& data);

struct SpinCounts {
  std::size_t parameter_bits = 0;
  std::size_t n_vw = 0;
  std::size_t n_vww = 0;
  // Products of two first-layer weight bits of the same unit. These arise
  // from the constant part of the output weight multiplying w_ij w_ij'.
  std::size_t n_ww = 0;
  // All auxiliaries (sum of the families above, or the generic count).
  std::size_t n_aux = 0;
  std::size_t abstract_spins = 0;

  friend bool operator==(const SpinCounts&, const SpinCounts&) = default;
};

enum class CompilePath { kStructured, kGeneric };

std::string_view compile_path_name(CompilePath path);
CompilePath parse_compile_path(std::string_view name);

struct CompiledModel {
  NetworkShape shape;
  FeatureScaler scaler;
  ParamLayout layout;
  ReductionMap reduction;
  // qubo.offset carries the loss constant, so qubo.energy(s) is the loss at
  // gadget-consistent s.
  QuboModel qubo;
  double offset = 0.0;
  SpinCounts counts;
  double lambda = 0.0;
  CompilePath path = CompilePath::kStructured;
};

// Closed-form auxiliary counts for the structured path; the generic count
// is obtained by quadratizing the loss of a fixed synthetic dataset, since
// the monomial support does not depend on data values.
SpinCounts count_spins(const NetworkShape& shape, CompilePath path);

// Products of parameter bits are replaced by auxiliaries until Y is linear,
// the residual is squared, and one gadget per auxiliary is added with
// strength lambda. Default lambda: 2 * max|loss coefficient| * number of
// non-constant loss terms. Requires activation degree <= 2.
CompiledModel compile_structured(const NetworkShape& shape, const Dataset& data,
                                 std::optional<double> lambda = {});

// loss_poly followed by quadratize.
CompiledModel compile_generic(const NetworkShape& shape, const Dataset& data,
                              LambdaStrategy strategy = {});

// Structured when the activation allows it, generic otherwise.
CompiledModel compile(const NetworkShape& shape, const Dataset& data,
                      std::optional<double> lambda = {});

class TrainedNetwork {
 public:
  TrainedNetwork() = default;
  TrainedNetwork(NetworkShape shape, FeatureScaler scaler,
                 std::vector<double> hidden_weights,
                 std::vector<double> output_weights, double output_bias);

  const NetworkShape& shape() const { return shape_; }
  const FeatureScaler& scaler() const { return scaler_; }
  // units x inputs, row-major, in layout order.
  const std::vector<double>& hidden_weights() const { return hidden_; }
  const std::vector<double>& output_weights() const { return output_; }
  double output_bias() const { return bias_; }

  // Y at a raw (unscaled) feature vector.
  double score(std::span<const double> x) const;
  // +1 when Y >= 0.
  int predict(std::span<const double> x) const;
  // Batched scores for raw rows (vectorized kernel).
  std::vector<double> scores(const Dataset& data) const;
  std::vector<double> scores_scaled_columns(
      const std::vector<std::vector<double>>& scaled_columns) const;
  double mse(const Dataset& data) const;

 private:
  NetworkShape shape_;
  FeatureScaler scaler_;
  std::vector<double> hidden_;
  std::vector<double> output_;
  double bias_ = 0.0;
};

// Reads every parameter block from a full model assignment.
TrainedNetwork decode_solution(const CompiledModel& model,
                               std::span<const std::uint8_t> assignment);

}  // namespace qubonet
