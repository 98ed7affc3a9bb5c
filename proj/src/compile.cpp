#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qubonet/error.hpp"
#include "qubonet/network.hpp"

namespace qubonet {

std::string_view compile_path_name(CompilePath path) {
  return path == CompilePath::kStructured ? "structured" : "generic";
}

CompilePath parse_compile_path(std::string_view name) {
  if (name == "structured") return CompilePath::kStructured;
  if (name == "generic") return CompilePath::kGeneric;
  throw ConfigError("path: expected 'structured' or 'generic', got '" +
                    std::string(name) + "'");
}

namespace {

bool needs_vw(const NetworkShape& s) {
  const auto& c = s.activation.coeffs;
  return (c.size() > 1 && c[1] != 0.0) || (c.size() > 2 && c[2] != 0.0);
}

bool needs_vww(const NetworkShape& s) {
  const auto& c = s.activation.coeffs;
  return c.size() > 2 && c[2] != 0.0;
}

void require_structured(const NetworkShape& s) {
  if (s.activation.degree() > 2) {
    throw InvalidArgument("structured compilation supports activation degree "
                          "<= 2, got " +
                          std::to_string(s.activation.degree()) +
                          "; use the generic path");
  }
}

// Auxiliary variable numbering for the structured path. Families are laid
// out contiguously after the parameter bits: vw, then vww, then ww.
struct AuxIndex {
  std::size_t units = 0, inputs = 0, nb = 0;
  Var params = 0;
  std::size_t n_vw = 0, n_vww = 0, n_ww = 0;
  std::size_t ww_per_unit = 0;

  explicit AuxIndex(const NetworkShape& s) {
    units = s.unit_count();
    inputs = s.input_count();
    nb = s.n_bits;
    params = static_cast<Var>(ParamLayout::for_shape(s).total_spins);
    if (needs_vw(s)) n_vw = units * inputs * nb * nb;
    if (needs_vww(s)) {
      n_vww = units * inputs * inputs * nb * nb * nb;
      const std::size_t bits = inputs * nb;
      ww_per_unit = bits * (bits - 1) / 2;
      n_ww = units * ww_per_unit;
    }
  }
  std::size_t total() const { return params + n_vw + n_vww + n_ww; }

  Var vw(std::size_t u, std::size_t j, std::size_t a, std::size_t b) const {
    return params + static_cast<Var>(((u * inputs + j) * nb + a) * nb + b);
  }
  Var vww(std::size_t u, std::size_t j, std::size_t k, std::size_t a,
          std::size_t b, std::size_t c) const {
    const std::size_t idx =
        ((((u * inputs + j) * inputs + k) * nb + a) * nb + b) * nb + c;
    return params + static_cast<Var>(n_vw + idx);
  }
  // Weight bits of one unit are numbered p = j * nb + beta.
  Var ww(std::size_t u, std::size_t p, std::size_t q) const {
    if (p > q) std::swap(p, q);
    const std::size_t bits = inputs * nb;
    // Row-major index of (p, q), p < q, in the strict upper triangle.
    const std::size_t idx = p * (2 * bits - p - 1) / 2 + (q - p - 1);
    return params + static_cast<Var>(n_vw + n_vww + u * ww_per_unit + idx);
  }
};

// Constant plus sparse linear part over model variables.
struct LinForm {
  double c = 0.0;
  std::vector<std::pair<Var, double>> terms;

  void add(Var v, double k) {
    if (k != 0.0) terms.emplace_back(v, k);
  }
};

struct Param {
  double a;                  // value with all bits zero
  std::vector<double> step;  // per-bit weights
  Var first;
};

Param param_of(const ParamBlock& b) {
  Param p{b.encoding.lo, {}, b.first_var};
  for (std::size_t k = 0; k < b.n_bits; ++k) {
    p.step.push_back(b.encoding.bit_weight(k, b.n_bits));
  }
  return p;
}

void add_bits(LinForm& f, const Param& p, double scale) {
  for (std::size_t k = 0; k < p.step.size(); ++k) {
    f.add(p.first + static_cast<Var>(k), scale * p.step[k]);
  }
}

void add_linear(LinForm& f, const Param& p, double scale) {
  f.c += scale * p.a;
  add_bits(f, p, scale);
}

struct UnitForms {
  LinForm v;
  std::vector<LinForm> vw;   // per input
  std::vector<LinForm> vww;  // per (j, k), row-major
};

UnitForms unit_forms(const ParamLayout& layout, const AuxIndex& ix,
                     std::size_t u) {
  const std::size_t J = ix.inputs, nb = ix.nb;
  const Param v = param_of(layout.output_weight(u));
  std::vector<Param> w;
  for (std::size_t j = 0; j < J; ++j) {
    w.push_back(param_of(layout.hidden_weight(u, j)));
  }
  UnitForms out;
  add_linear(out.v, v, 1.0);

  if (ix.n_vw > 0) {
    out.vw.resize(J);
    for (std::size_t j = 0; j < J; ++j) {
      LinForm& f = out.vw[j];
      f.c = v.a * w[j].a;
      add_bits(f, w[j], v.a);
      add_bits(f, v, w[j].a);
      for (std::size_t a = 0; a < nb; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
          f.add(ix.vw(u, j, a, b), v.step[a] * w[j].step[b]);
        }
      }
    }
  }

  if (ix.n_vww > 0) {
    out.vww.resize(J * J);
    for (std::size_t j = 0; j < J; ++j) {
      for (std::size_t k = 0; k < J; ++k) {
        LinForm& f = out.vww[j * J + k];
        const Param& wj = w[j];
        const Param& wk = w[k];
        // (a_v + S_v)(a_j + S_j)(a_k + S_k), expanded term by term.
        f.c = v.a * wj.a * wk.a;
        for (std::size_t b = 0; b < nb; ++b) {
          f.add(wk.first + static_cast<Var>(b), v.a * wj.a * wk.step[b]);
          f.add(wj.first + static_cast<Var>(b), v.a * wk.a * wj.step[b]);
        }
        for (std::size_t a = 0; a < nb; ++a) {
          f.add(v.first + static_cast<Var>(a), wj.a * wk.a * v.step[a]);
        }
        for (std::size_t b = 0; b < nb; ++b) {
          for (std::size_t g = 0; g < nb; ++g) {
            const double coef = v.a * wj.step[b] * wk.step[g];
            if (j == k && b == g) {
              f.add(wj.first + static_cast<Var>(b), coef);
            } else {
              f.add(ix.ww(u, j * nb + b, k * nb + g), coef);
            }
          }
        }
        for (std::size_t a = 0; a < nb; ++a) {
          for (std::size_t g = 0; g < nb; ++g) {
            f.add(ix.vw(u, k, a, g), wj.a * v.step[a] * wk.step[g]);
          }
          for (std::size_t b = 0; b < nb; ++b) {
            f.add(ix.vw(u, j, a, b), wk.a * v.step[a] * wj.step[b]);
          }
        }
        for (std::size_t a = 0; a < nb; ++a) {
          for (std::size_t b = 0; b < nb; ++b) {
            for (std::size_t g = 0; g < nb; ++g) {
              f.add(ix.vww(u, j, k, a, b, g),
                    v.step[a] * wj.step[b] * wk.step[g]);
            }
          }
        }
      }
    }
  }
  return out;
}

void accumulate(std::vector<double>& dense, double& c, const LinForm& f,
                double scale) {
  if (scale == 0.0) return;
  c += scale * f.c;
  for (const auto& [v, k] : f.terms) dense[v] += scale * k;
}

ReductionMap structured_reduction(const AuxIndex& ix, const ParamLayout& layout,
                                  double lambda) {
  ReductionMap map;
  const std::size_t U = ix.units, J = ix.inputs, nb = ix.nb;
  auto bit = [&](const ParamBlock& b, std::size_t k) {
    return b.first_var + static_cast<Var>(k);
  };
  if (ix.n_vw > 0) {
    for (std::size_t u = 0; u < U; ++u)
      for (std::size_t j = 0; j < J; ++j)
        for (std::size_t a = 0; a < nb; ++a)
          for (std::size_t b = 0; b < nb; ++b)
            map.entries.push_back({ix.vw(u, j, a, b),
                                   bit(layout.output_weight(u), a),
                                   bit(layout.hidden_weight(u, j), b), lambda});
  }
  if (ix.n_vww > 0) {
    for (std::size_t u = 0; u < U; ++u)
      for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < J; ++k)
          for (std::size_t a = 0; a < nb; ++a)
            for (std::size_t b = 0; b < nb; ++b)
              for (std::size_t g = 0; g < nb; ++g)
                map.entries.push_back({ix.vww(u, j, k, a, b, g),
                                       ix.vw(u, j, a, b),
                                       bit(layout.hidden_weight(u, k), g),
                                       lambda});
    for (std::size_t u = 0; u < U; ++u) {
      for (std::size_t p = 0; p < J * nb; ++p) {
        for (std::size_t q = p + 1; q < J * nb; ++q) {
          map.entries.push_back(
              {ix.ww(u, p, q), bit(layout.hidden_weight(u, p / nb), p % nb),
               bit(layout.hidden_weight(u, q / nb), q % nb), lambda});
        }
      }
    }
  }
  return map;
}

}  // namespace

SpinCounts count_spins(const NetworkShape& shape, CompilePath path) {
  shape.validate();
  SpinCounts counts;
  counts.parameter_bits = ParamLayout::for_shape(shape).total_spins;
  if (path == CompilePath::kStructured) {
    require_structured(shape);
    const AuxIndex ix(shape);
    counts.n_vw = ix.n_vw;
    counts.n_vww = ix.n_vww;
    counts.n_ww = ix.n_ww;
    counts.n_aux = ix.n_vw + ix.n_vww + ix.n_ww;
  } else {
    // The monomial support of the loss is the same for data in general
    // position, so a fixed synthetic set gives the generic count.
    Dataset probe;
    probe.n_features = shape.n_features;
    std::mt19937_64 rng(0x5eed);
    for (std::size_t a = 0; a < 16; ++a) {
      std::vector<double> x(shape.n_features);
      for (double& v : x) v = standard_normal(rng);
      probe.push_back(x, a % 2 ? 1 : -1);
    }
    const auto q = quadratize(loss_poly(shape, probe), LambdaStrategy::fixed_value(1.0),
                              static_cast<Var>(counts.parameter_bits));
    counts.n_aux = q.map.size();
  }
  counts.abstract_spins = counts.parameter_bits + counts.n_aux;
  return counts;
}

CompiledModel compile_structured(const NetworkShape& shape, const Dataset& data,
                                 std::optional<double> lambda) {
  shape.validate();
  require_structured(shape);
  data.validate();
  if (data.size() == 0) throw InvalidArgument("loss needs a non-empty dataset");
  if (data.n_features != shape.n_features) {
    throw InvalidArgument("dataset has " + std::to_string(data.n_features) +
                          " features, network expects " +
                          std::to_string(shape.n_features));
  }
  if (lambda && !(*lambda > 0.0 && std::isfinite(*lambda))) {
    throw ConfigError("lambda: must be positive and finite");
  }

  CompiledModel model;
  model.shape = shape;
  model.path = CompilePath::kStructured;
  model.scaler = FeatureScaler::fit(data);
  model.layout = ParamLayout::for_shape(shape);
  model.counts = count_spins(shape, CompilePath::kStructured);

  const AuxIndex ix(shape);
  const std::size_t V = ix.total();
  const std::size_t U = ix.units, J = ix.inputs;
  std::vector<UnitForms> forms;
  for (std::size_t u = 0; u < U; ++u) {
    forms.push_back(unit_forms(model.layout, ix, u));
  }
  LinForm bias;
  if (const ParamBlock* b = model.layout.output_bias()) {
    add_linear(bias, param_of(*b), 1.0);
  }
  const auto& g = shape.activation.coeffs;
  const double c0 = g[0];
  const double c1 = g.size() > 1 ? g[1] : 0.0;
  const double c2 = g.size() > 2 ? g[2] : 0.0;

  // Dense accumulation of (1/N) sum_a (y_a - L_a)^2 where L_a is Y made
  // linear by the auxiliaries.
  std::vector<double> lin(V, 0.0), quad(V * V, 0.0);
  double constant = 0.0;
  const double inv_n = 1.0 / static_cast<double>(data.size());
  std::vector<double> r(V);
  std::vector<Var> nz;
  for (std::size_t a = 0; a < data.size(); ++a) {
    std::vector<double> in;
    if (shape.first_layer_bias) in.push_back(1.0);
    for (std::size_t j = 0; j < shape.n_features; ++j) {
      in.push_back(model.scaler.apply(j, data.row(a)[j]));
    }
    std::fill(r.begin(), r.end(), 0.0);
    double r0 = 0.0;
    for (std::size_t u = 0; u < U; ++u) {
      accumulate(r, r0, forms[u].v, c0);
      if (c1 != 0.0) {
        for (std::size_t j = 0; j < J; ++j) {
          accumulate(r, r0, forms[u].vw[j], c1 * in[j]);
        }
      }
      if (c2 != 0.0) {
        for (std::size_t j = 0; j < J; ++j) {
          for (std::size_t k = 0; k < J; ++k) {
            accumulate(r, r0, forms[u].vww[j * J + k], c2 * in[j] * in[k]);
          }
        }
      }
    }
    accumulate(r, r0, bias, 1.0);
    // Residual y - L.
    r0 = data.labels[a] - r0;
    nz.clear();
    for (Var i = 0; i < V; ++i) {
      r[i] = -r[i];
      if (r[i] != 0.0) nz.push_back(i);
    }
    constant += inv_n * r0 * r0;
    for (std::size_t p = 0; p < nz.size(); ++p) {
      const Var i = nz[p];
      lin[i] += inv_n * (2.0 * r0 * r[i] + r[i] * r[i]);
      for (std::size_t q = p + 1; q < nz.size(); ++q) {
        const Var j = nz[q];
        quad[i * V + j] += inv_n * 2.0 * r[i] * r[j];
      }
    }
  }

  QuboModel qubo(V);
  qubo.offset = constant;
  double max_coef = 0.0;
  std::size_t n_terms = 0;
  for (Var i = 0; i < V; ++i) {
    if (lin[i] != 0.0) {
      qubo.add_linear(i, lin[i]);
      max_coef = std::max(max_coef, std::abs(lin[i]));
      ++n_terms;
    }
    for (Var j = i + 1; j < V; ++j) {
      const double c = quad[i * V + j];
      if (c != 0.0) {
        qubo.add_quadratic(i, j, c);
        max_coef = std::max(max_coef, std::abs(c));
        ++n_terms;
      }
    }
  }
  // A loss with no non-constant terms still needs positive gadgets.
  const double auto_lambda = 2.0 * max_coef * static_cast<double>(n_terms);
  model.lambda = lambda.value_or(auto_lambda > 0.0 ? auto_lambda : 1.0);
  model.reduction = structured_reduction(ix, model.layout, model.lambda);
  for (const auto& e : model.reduction.entries) {
    const double l = e.lambda;
    qubo.add_quadratic(e.parent_a, e.parent_b, l);
    qubo.add_quadratic(e.aux, e.parent_a, -2.0 * l);
    qubo.add_quadratic(e.aux, e.parent_b, -2.0 * l);
    qubo.add_linear(e.aux, 3.0 * l);
  }
  model.qubo = std::move(qubo);
  model.offset = model.qubo.offset;
  return model;
}

CompiledModel compile_generic(const NetworkShape& shape, const Dataset& data,
                              LambdaStrategy strategy) {
  shape.validate();
  data.validate();
  if (data.size() == 0) throw InvalidArgument("loss needs a non-empty dataset");
  if (data.n_features != shape.n_features) {
    throw InvalidArgument("dataset feature count does not match the network");
  }
  CompiledModel model;
  model.shape = shape;
  model.path = CompilePath::kGeneric;
  model.scaler = FeatureScaler::fit(data);
  model.layout = ParamLayout::for_shape(shape);
  const auto loss = loss_poly(shape, model.scaler.transform(data));
  auto q = quadratize(loss, strategy, static_cast<Var>(model.layout.total_spins));
  model.qubo = qubo_from_poly(q.quadratic, q.total_var_count());
  model.offset = model.qubo.offset;
  model.reduction = std::move(q.map);
  double lam = strategy.fixed.value_or(0.0);
  for (const auto& e : model.reduction.entries) lam = std::max(lam, e.lambda);
  model.lambda = lam;
  model.counts.parameter_bits = model.layout.total_spins;
  model.counts.n_aux = model.reduction.size();
  model.counts.abstract_spins = model.counts.parameter_bits + model.counts.n_aux;
  return model;
}

CompiledModel compile(const NetworkShape& shape, const Dataset& data,
                      std::optional<double> lambda) {
  if (shape.activation.degree() <= 2) {
    return compile_structured(shape, data, lambda);
  }
  return compile_generic(shape, data,
                         lambda ? LambdaStrategy::fixed_value(*lambda)
                                : LambdaStrategy::automatic());
}

TrainedNetwork decode_solution(const CompiledModel& model,
                               std::span<const std::uint8_t> assignment) {
  if (assignment.size() != model.qubo.n_vars) {
    throw InvalidArgument("assignment has " + std::to_string(assignment.size()) +
                          " values, model has " +
                          std::to_string(model.qubo.n_vars) + " variables");
  }
  const auto& shape = model.shape;
  const auto& layout = model.layout;
  auto value = [&](const ParamBlock& b) {
    return decode_param(assignment.subspan(b.first_var, b.n_bits), b.encoding,
                        b.n_bits);
  };
  std::vector<double> hidden, output;
  for (std::size_t u = 0; u < shape.unit_count(); ++u) {
    for (std::size_t j = 0; j < shape.input_count(); ++j) {
      hidden.push_back(value(layout.hidden_weight(u, j)));
    }
  }
  for (std::size_t u = 0; u < shape.unit_count(); ++u) {
    output.push_back(value(layout.output_weight(u)));
  }
  const double bias = layout.output_bias() ? value(*layout.output_bias()) : 0.0;
  return TrainedNetwork(shape, model.scaler, std::move(hidden), std::move(output),
                        bias);
}

}  // namespace qubonet
