#include "qubonet/model_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qubonet/error.hpp"

namespace qubonet {

using nlohmann::json;

namespace {

json shape_json(const NetworkShape& s) {
  return {{"n_features", s.n_features},
          {"n_hidden", s.n_hidden},
          {"n_bits", s.n_bits},
          {"first_layer_bias", s.first_layer_bias},
          {"activation", {{"name", s.activation.name},
                          {"coeffs", s.activation.coeffs}}},
          {"last_bias_levels",
           {s.last_bias_levels.first, s.last_bias_levels.second}}};
}

NetworkShape shape_from(const json& j) {
  NetworkShape s;
  s.n_features = j.at("n_features").get<std::size_t>();
  s.n_hidden = j.at("n_hidden").get<std::size_t>();
  s.n_bits = j.at("n_bits").get<std::size_t>();
  s.first_layer_bias = j.at("first_layer_bias").get<bool>();
  s.activation.name = j.at("activation").at("name").get<std::string>();
  s.activation.coeffs =
      j.at("activation").at("coeffs").get<std::vector<double>>();
  const auto lv = j.at("last_bias_levels").get<std::vector<double>>();
  if (lv.size() != 2) throw ParseError("last_bias_levels needs two values", 0);
  s.last_bias_levels = {lv[0], lv[1]};
  return s;
}

std::string_view role_name(ParamRole r) {
  switch (r) {
    case ParamRole::kHiddenWeight:
      return "hidden_weight";
    case ParamRole::kOutputWeight:
      return "output_weight";
    case ParamRole::kOutputBias:
      return "output_bias";
  }
  return "";
}

json layout_json(const ParamLayout& layout) {
  json params = json::array();
  for (const auto& b : layout.params) {
    params.push_back(
        {{"name", b.name},
         {"role", role_name(b.role)},
         {"first_var", b.first_var},
         {"n_bits", b.n_bits},
         {"encoding",
          {{"kind", b.encoding.is_standard() ? "standard" : "levels"},
           {"lo", b.encoding.lo},
           {"hi", b.encoding.hi}}}});
  }
  return {{"total_spins", layout.total_spins}, {"params", params}};
}

json qubo_json(const QuboModel& q) {
  json linear = json::array(), quadratic = json::array();
  for (std::size_t i = 0; i < q.n_vars; ++i) {
    if (q.linear[i] != 0.0) linear.push_back({i, q.linear[i]});
  }
  for (const auto& [ij, c] : q.quadratic) {
    quadratic.push_back({ij.first, ij.second, c});
  }
  return {{"n_vars", q.n_vars},
          {"offset", q.offset},
          {"linear", linear},
          {"quadratic", quadratic}};
}

QuboModel qubo_from(const json& j) {
  QuboModel q(j.at("n_vars").get<std::size_t>());
  q.offset = j.at("offset").get<double>();
  for (const auto& t : j.at("linear")) {
    const auto i = t.at(0).get<Var>();
    if (i >= q.n_vars) throw ParseError("qubo linear index out of range", 0);
    q.add_linear(i, t.at(1).get<double>());
  }
  for (const auto& t : j.at("quadratic")) {
    const auto i = t.at(0).get<Var>();
    const auto k = t.at(1).get<Var>();
    if (i >= k || k >= q.n_vars) {
      throw ParseError("qubo coupling index out of range or unordered", 0);
    }
    q.add_quadratic(i, k, t.at(2).get<double>());
  }
  return q;
}

json counts_json(const SpinCounts& c) {
  return {{"abstract_spins", c.abstract_spins}, {"parameter_bits", c.parameter_bits},
          {"n_vw", c.n_vw},   {"n_vww", c.n_vww},
          {"n_ww", c.n_ww},   {"n_aux", c.n_aux}};
}

json body_json(const CompiledModel& m) {
  json reduction = json::array();
  for (const auto& e : m.reduction.entries) {
    reduction.push_back({e.aux, e.parent_a, e.parent_b, e.lambda});
  }
  return {{"format", "qubonet-model/1"},
          {"path", compile_path_name(m.path)},
          {"shape", shape_json(m.shape)},
          {"scaler", {{"lo", m.scaler.lo}, {"hi", m.scaler.hi}}},
          {"layout", layout_json(m.layout)},
          {"reduction", reduction},
          {"qubo", qubo_json(m.qubo)},
          {"offset", m.offset},
          {"counts", counts_json(m.counts)},
          {"lambda", m.lambda}};
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::string content_hash(const CompiledModel& model) {
  return sha256_hex(body_json(model).dump());
}

std::string model_to_json(const CompiledModel& model) {
  json doc = body_json(model);
  doc["hash"] = sha256_hex(doc.dump());
  return doc.dump(1) + "\n";
}

CompiledModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model document: ") + e.what(), 0);
  }
  try {
    CompiledModel m;
    m.path = parse_compile_path(doc.at("path").get<std::string>());
    m.shape = shape_from(doc.at("shape"));
    m.shape.validate();
    m.scaler.lo = doc.at("scaler").at("lo").get<std::vector<double>>();
    m.scaler.hi = doc.at("scaler").at("hi").get<std::vector<double>>();
    if (m.scaler.lo.size() != m.shape.n_features ||
        m.scaler.hi.size() != m.shape.n_features) {
      throw ParseError("scaler does not match the feature count", 0);
    }
    // The layout is a function of the shape; the stored copy is checked.
    m.layout = ParamLayout::for_shape(m.shape);
    const auto& stored = doc.at("layout");
    if (stored.at("total_spins").get<std::size_t>() != m.layout.total_spins ||
        stored.at("params").size() != m.layout.params.size()) {
      throw ParseError("layout does not match the shape", 0);
    }
    for (std::size_t k = 0; k < m.layout.params.size(); ++k) {
      const auto& p = stored.at("params").at(k);
      if (p.at("name").get<std::string>() != m.layout.params[k].name ||
          p.at("first_var").get<Var>() != m.layout.params[k].first_var) {
        throw ParseError("layout entry " + std::to_string(k) +
                             " does not match the shape",
                         0);
      }
    }
    for (const auto& e : doc.at("reduction")) {
      m.reduction.entries.push_back({e.at(0).get<Var>(), e.at(1).get<Var>(),
                                     e.at(2).get<Var>(), e.at(3).get<double>()});
    }
    m.qubo = qubo_from(doc.at("qubo"));
    m.offset = doc.at("offset").get<double>();
    const auto& c = doc.at("counts");
    m.counts.abstract_spins = c.at("abstract_spins").get<std::size_t>();
    m.counts.parameter_bits = c.at("parameter_bits").get<std::size_t>();
    m.counts.n_vw = c.at("n_vw").get<std::size_t>();
    m.counts.n_vww = c.at("n_vww").get<std::size_t>();
    m.counts.n_ww = c.at("n_ww").get<std::size_t>();
    m.counts.n_aux = c.at("n_aux").get<std::size_t>();
    m.lambda = doc.at("lambda").get<double>();
    if (doc.contains("hash") &&
        doc.at("hash").get<std::string>() != content_hash(m)) {
      throw ParseError("model hash does not match its content", 0);
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model document: ") + e.what(), 0);
  } catch (const ConfigError& e) {
    throw ParseError(std::string("model document: ") + e.what(), 0);
  }
}

void save_model(const CompiledModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << model_to_json(model);
  if (!out) throw IoError("write failed: " + path);
}

CompiledModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace qubonet
