#include "qubonet/network.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "qubonet/error.hpp"
#include "qubonet/kernels/kernels.hpp"

namespace qubonet {

double ActivationPoly::operator()(double x) const {
  double g = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) g = g * x + *it;
  return g;
}

double ActivationPoly::derivative(double x) const {
  double g = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    g = g * x + static_cast<double>(k) * coeffs[k];
  }
  return g;
}

ActivationPoly ActivationPoly::square() { return {{0.0, 0.0, 1.0}, "square"}; }

ActivationPoly ActivationPoly::relu2() {
  return {{0.25, 0.5, 0.25}, "relu2"};
}

ActivationPoly ActivationPoly::sigmoid_fit() {
  constexpr int kPoints = 801;
  constexpr int kDegree = 3;
  Eigen::MatrixXd a(kPoints, kDegree + 1);
  Eigen::VectorXd b(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double x = -4.0 + 8.0 * i / (kPoints - 1);
    double p = 1.0;
    for (int k = 0; k <= kDegree; ++k, p *= x) a(i, k) = p;
    b(i) = 1.0 / (1.0 + std::exp(-x));
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  ActivationPoly g{{}, "sigmoid-fit"};
  for (int k = 0; k <= kDegree; ++k) {
    // The even coefficients vanish by symmetry up to rounding.
    g.coeffs.push_back(std::abs(c(k)) < 1e-12 ? 0.0 : c(k));
  }
  return g;
}

std::vector<std::string> ActivationPoly::preset_names() {
  return {"square", "relu2", "sigmoid-fit"};
}

ActivationPoly ActivationPoly::preset(std::string_view name) {
  if (name == "square") return square();
  if (name == "relu2") return relu2();
  if (name == "sigmoid-fit") return sigmoid_fit();
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("activation: unknown preset '" + std::string(name) +
                    "' (available: " + list + ")");
}

double Encoding::bit_weight(std::size_t a, std::size_t n_bits) const {
  const double norm = 2.0 - std::ldexp(1.0, 1 - static_cast<int>(n_bits));
  return (hi - lo) * std::ldexp(1.0, -static_cast<int>(a)) / norm;
}

double decode_param(std::span<const std::uint8_t> bits, const Encoding& enc,
                    std::size_t n_bits) {
  if (bits.size() != n_bits) {
    throw InvalidArgument("parameter has " + std::to_string(bits.size()) +
                          " bits, expected " + std::to_string(n_bits));
  }
  // Same value as summing bit weights, but via the big-endian integer so the
  // endpoints come out exact.
  std::uint64_t k = 0;
  for (std::size_t a = 0; a < n_bits; ++a) {
    if (bits[a] > 1) throw InvalidArgument("parameter bit must be 0 or 1");
    k = 2 * k + bits[a];
  }
  const double top = std::ldexp(1.0, static_cast<int>(n_bits)) - 1.0;
  return enc.lo + (enc.hi - enc.lo) * (static_cast<double>(k) / top);
}

void NetworkShape::validate() const {
  if (n_features < 1) throw ConfigError("features: must be at least 1");
  if (n_hidden < 1) throw ConfigError("hidden: must be at least 1");
  if (n_bits < 1) throw ConfigError("bits: must be at least 1");
  if (n_bits > 30) throw ConfigError("bits: at most 30 supported");
  if (activation.degree() < 1) {
    throw ConfigError("activation: degree must be at least 1");
  }
  for (double c : activation.coeffs) {
    if (!std::isfinite(c)) throw ConfigError("activation: non-finite coefficient");
  }
  const auto [a, b] = last_bias_levels;
  if (!std::isfinite(a) || !std::isfinite(b) || a == b) {
    throw ConfigError("last_bias_levels: must be two distinct finite values");
  }
}

ParamLayout ParamLayout::for_shape(const NetworkShape& shape) {
  shape.validate();
  ParamLayout layout;
  layout.units_ = shape.unit_count();
  layout.inputs_ = shape.input_count();
  // Printed indices start at 0 when the extended unit/feature exists.
  const std::size_t base = shape.first_layer_bias ? 0 : 1;
  const Encoding bias_enc =
      Encoding::levels(shape.last_bias_levels.first, shape.last_bias_levels.second);
  Var next = 0;
  auto push = [&](std::string name, ParamRole role, std::size_t u,
                  std::size_t j, Encoding enc) {
    layout.params.push_back(
        {std::move(name), role, u, j, next, shape.n_bits, enc});
    next += static_cast<Var>(shape.n_bits);
  };
  for (std::size_t u = 0; u < layout.units_; ++u) {
    for (std::size_t j = 0; j < layout.inputs_; ++j) {
      push("w_" + std::to_string(u + base) + "_" + std::to_string(j + base),
           ParamRole::kHiddenWeight, u, j, Encoding::standard());
    }
  }
  for (std::size_t u = 0; u < layout.units_; ++u) {
    const bool is_bias_unit = shape.first_layer_bias && u == 0;
    push("v_" + std::to_string(u + base), ParamRole::kOutputWeight, u, 0,
         is_bias_unit ? bias_enc : Encoding::standard());
  }
  if (shape.separate_output_bias()) {
    push("v_0", ParamRole::kOutputBias, 0, 0, bias_enc);
  }
  layout.total_spins = next;
  return layout;
}

const ParamBlock& ParamLayout::hidden_weight(std::size_t unit,
                                             std::size_t input) const {
  if (unit >= units_ || input >= inputs_) {
    throw InvalidArgument("hidden weight index out of range");
  }
  return params[unit * inputs_ + input];
}

const ParamBlock& ParamLayout::output_weight(std::size_t unit) const {
  if (unit >= units_) throw InvalidArgument("output weight index out of range");
  return params[units_ * inputs_ + unit];
}

const ParamBlock* ParamLayout::output_bias() const {
  const std::size_t k = units_ * inputs_ + units_;
  return k < params.size() ? &params[k] : nullptr;
}

MultilinearPoly param_poly(const ParamBlock& block) {
  MultilinearPoly p = MultilinearPoly::constant(Basis::kUnit, block.encoding.lo);
  for (std::size_t a = 0; a < block.n_bits; ++a) {
    p.add_term(Monomial{block.first_var + static_cast<Var>(a)},
               block.encoding.bit_weight(a, block.n_bits));
  }
  return p;
}

namespace {

std::vector<double> layout_inputs(const NetworkShape& shape,
                                  std::span<const double> x) {
  if (x.size() != shape.n_features) {
    throw InvalidArgument("feature vector has " + std::to_string(x.size()) +
                          " entries, network expects " +
                          std::to_string(shape.n_features));
  }
  std::vector<double> in;
  in.reserve(shape.input_count());
  if (shape.first_layer_bias) in.push_back(1.0);
  in.insert(in.end(), x.begin(), x.end());
  return in;
}

MultilinearPoly output_poly(const NetworkShape& shape, const ParamLayout& layout,
                            const std::vector<MultilinearPoly>& params,
                            std::span<const double> x) {
  const auto in = layout_inputs(shape, x);
  const std::size_t inputs = shape.input_count();
  MultilinearPoly y(Basis::kUnit);
  for (std::size_t u = 0; u < shape.unit_count(); ++u) {
    MultilinearPoly z(Basis::kUnit);
    for (std::size_t j = 0; j < inputs; ++j) {
      if (in[j] == 0.0) continue;
      z += in[j] * params[u * inputs + j];
    }
    // Horner in the polynomial ring.
    const auto& c = shape.activation.coeffs;
    MultilinearPoly g = MultilinearPoly::constant(Basis::kUnit, c.back());
    for (std::size_t k = c.size() - 1; k-- > 0;) {
      g = g * z;
      g += MultilinearPoly::constant(Basis::kUnit, c[k]);
    }
    y += params[layout.output_weight(u).first_var / shape.n_bits] * g;
  }
  if (const ParamBlock* b = layout.output_bias()) {
    y += params[b->first_var / shape.n_bits];
  }
  return y;
}

std::vector<MultilinearPoly> all_param_polys(const ParamLayout& layout) {
  std::vector<MultilinearPoly> out;
  out.reserve(layout.params.size());
  for (const auto& b : layout.params) out.push_back(param_poly(b));
  return out;
}

}  // namespace

MultilinearPoly network_output_poly(const NetworkShape& shape,
                                    std::span<const double> x) {
  const ParamLayout layout = ParamLayout::for_shape(shape);
  return output_poly(shape, layout, all_param_polys(layout), x);
}

MultilinearPoly loss_poly(const NetworkShape& shape, const Dataset& data) {
  data.validate();
  if (data.size() == 0) throw InvalidArgument("loss needs a non-empty dataset");
  if (data.n_features != shape.n_features) {
    throw InvalidArgument("dataset has " + std::to_string(data.n_features) +
                          " features, network expects " +
                          std::to_string(shape.n_features));
  }
  const ParamLayout layout = ParamLayout::for_shape(shape);
  const auto params = all_param_polys(layout);
  const double inv_n = 1.0 / static_cast<double>(data.size());
  MultilinearPoly loss(Basis::kUnit);
  for (std::size_t a = 0; a < data.size(); ++a) {
    MultilinearPoly r = MultilinearPoly::constant(
        Basis::kUnit, static_cast<double>(data.labels[a]));
    r -= output_poly(shape, layout, params, data.row(a));
    loss += inv_n * (r * r);
  }
  return loss;
}

TrainedNetwork::TrainedNetwork(NetworkShape shape, FeatureScaler scaler,
                               std::vector<double> hidden_weights,
                               std::vector<double> output_weights,
                               double output_bias)
    : shape_(std::move(shape)),
      scaler_(std::move(scaler)),
      hidden_(std::move(hidden_weights)),
      output_(std::move(output_weights)),
      bias_(output_bias) {
  if (hidden_.size() != shape_.unit_count() * shape_.input_count() ||
      output_.size() != shape_.unit_count()) {
    throw InvalidArgument("weight arrays do not match the network shape");
  }
  if (scaler_.size() != shape_.n_features) {
    throw InvalidArgument("scaler does not match the feature count");
  }
}

double TrainedNetwork::score(std::span<const double> x) const {
  const auto in = layout_inputs(shape_, scaler_.apply(x));
  const std::size_t inputs = shape_.input_count();
  double y = bias_;
  for (std::size_t u = 0; u < shape_.unit_count(); ++u) {
    double z = 0.0;
    for (std::size_t j = 0; j < inputs; ++j) z += hidden_[u * inputs + j] * in[j];
    y += output_[u] * shape_.activation(z);
  }
  return y;
}

int TrainedNetwork::predict(std::span<const double> x) const {
  return score(x) >= 0.0 ? 1 : -1;
}

std::vector<double> TrainedNetwork::scores_scaled_columns(
    const std::vector<std::vector<double>>& scaled_columns) const {
  if (scaled_columns.size() != shape_.n_features) {
    throw InvalidArgument("column count does not match the feature count");
  }
  const std::size_t n = scaled_columns.empty() ? 0 : scaled_columns[0].size();
  std::vector<double> ones;
  std::vector<const double*> cols;
  if (shape_.first_layer_bias) {
    ones.assign(n, 1.0);
    cols.push_back(ones.data());
  }
  for (const auto& c : scaled_columns) {
    if (c.size() != n) throw InvalidArgument("ragged feature columns");
    cols.push_back(c.data());
  }
  kernels::ForwardArgs args;
  args.units = shape_.unit_count();
  args.inputs = shape_.input_count();
  args.columns = cols.data();
  args.weights = hidden_.data();
  args.out_weights = output_.data();
  args.out_bias = bias_;
  args.activation = shape_.activation.coeffs.data();
  args.activation_degree = shape_.activation.degree();
  std::vector<double> out(n);
  kernels::active().network_forward(args, out.data(), n);
  return out;
}

std::vector<double> TrainedNetwork::scores(const Dataset& data) const {
  if (data.n_features != shape_.n_features) {
    throw InvalidArgument("dataset feature count does not match the network");
  }
  std::vector<std::vector<double>> cols(shape_.n_features);
  for (std::size_t j = 0; j < shape_.n_features; ++j) {
    cols[j] = data.column(j);
    for (double& v : cols[j]) v = scaler_.apply(j, v);
  }
  return scores_scaled_columns(cols);
}

double TrainedNetwork::mse(const Dataset& data) const {
  if (data.size() == 0) throw InvalidArgument("mse of an empty dataset");
  double sum = 0.0;
  for (std::size_t a = 0; a < data.size(); ++a) {
    const double r = data.labels[a] - score(data.row(a));
    sum += r * r;
  }
  return sum / static_cast<double>(data.size());
}

}  // namespace qubonet
