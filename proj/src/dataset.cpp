#include "qubonet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qubonet/error.hpp"
#include "qubonet/poly.hpp"
#include "qubonet/solvers.hpp"
#include "text_util.hpp"

namespace qubonet {

std::vector<double> Dataset::column(std::size_t j) const {
  if (j >= n_features) throw InvalidArgument("feature column out of range");
  std::vector<double> out(size());
  for (std::size_t a = 0; a < size(); ++a) out[a] = features[a * n_features + j];
  return out;
}

void Dataset::push_back(std::span<const double> x, int label) {
  if (x.size() != n_features) {
    throw InvalidArgument("row has " + std::to_string(x.size()) +
                          " features, dataset has " + std::to_string(n_features));
  }
  if (label != 1 && label != -1) throw InvalidArgument("labels must be -1 or +1");
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

void Dataset::validate() const {
  if (features.size() != labels.size() * n_features) {
    throw InvalidArgument("feature matrix does not match the label count");
  }
  for (int y : labels) {
    if (y != 1 && y != -1) throw InvalidArgument("labels must be -1 or +1");
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite feature value");
  }
}

bool Dataset::has_both_classes() const {
  bool pos = false, neg = false;
  for (int y : labels) (y > 0 ? pos : neg) = true;
  return pos && neg;
}

FeatureScaler FeatureScaler::fit(const Dataset& data) {
  if (data.size() == 0) throw InvalidArgument("cannot fit a scaler to no data");
  FeatureScaler s;
  s.lo.assign(data.n_features, INFINITY);
  s.hi.assign(data.n_features, -INFINITY);
  for (std::size_t a = 0; a < data.size(); ++a) {
    auto x = data.row(a);
    for (std::size_t j = 0; j < data.n_features; ++j) {
      s.lo[j] = std::min(s.lo[j], x[j]);
      s.hi[j] = std::max(s.hi[j], x[j]);
    }
  }
  return s;
}

FeatureScaler FeatureScaler::identity(std::size_t n_features) {
  return {std::vector<double>(n_features, -1.0),
          std::vector<double>(n_features, 1.0)};
}

double FeatureScaler::apply(std::size_t j, double x) const {
  if (hi[j] == lo[j]) return 0.0;
  return (2.0 * x - (lo[j] + hi[j])) / (hi[j] - lo[j]);
}

std::vector<double> FeatureScaler::apply(std::span<const double> x) const {
  if (x.size() != size()) {
    throw InvalidArgument("scaler expects " + std::to_string(size()) +
                          " features, got " + std::to_string(x.size()));
  }
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = apply(j, x[j]);
  return out;
}

Dataset FeatureScaler::transform(const Dataset& data) const {
  Dataset out = data;
  for (std::size_t a = 0; a < data.size(); ++a) {
    for (std::size_t j = 0; j < data.n_features; ++j) {
      double& v = out.features[a * data.n_features + j];
      v = apply(j, v);
    }
  }
  return out;
}

double standard_normal(std::mt19937_64& rng) {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - unit_uniform(rng());
  const double u2 = unit_uniform(rng());
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Dataset gen_circles(const CirclesParams& p) {
  if (p.n < 2) throw InvalidArgument("circles needs n >= 2");
  if (!(p.noise >= 0.0)) throw InvalidArgument("noise must be non-negative");
  std::mt19937_64 rng(p.seed);
  Dataset d;
  d.name = "circles";
  d.n_features = 2;
  const std::size_t outer = p.n / 2;
  for (std::size_t a = 0; a < outer; ++a) {
    const double theta = 2.0 * std::numbers::pi * unit_uniform(rng());
    const double r = 1.0 + p.noise * standard_normal(rng);
    const double x[2] = {r * std::cos(theta), r * std::sin(theta)};
    d.push_back(x, 1);
  }
  for (std::size_t a = outer; a < p.n; ++a) {
    const double x1 = p.noise * standard_normal(rng);
    const double x2 = p.noise * standard_normal(rng);
    const double x[2] = {x1, x2};
    d.push_back(x, -1);
  }
  return d;
}

Dataset gen_quadrants(const QuadrantsParams& p) {
  if (p.n < 1) throw InvalidArgument("quadrants needs n >= 1");
  std::mt19937_64 rng(p.seed);
  Dataset d;
  d.name = "quadrants";
  d.n_features = 2;
  for (std::size_t a = 0; a < p.n; ++a) {
    const double x1 = 2.0 * unit_uniform(rng()) - 1.0;
    const double x2 = 2.0 * unit_uniform(rng()) - 1.0;
    const double x[2] = {x1, x2};
    d.push_back(x, x1 * x2 > 0.0 ? -1 : 1);
  }
  return d;
}

Dataset gen_bands(const BandsParams& p) {
  if (p.offsets.empty()) throw InvalidArgument("bands needs at least one offset");
  for (std::size_t k = 1; k < p.offsets.size(); ++k) {
    if (!(p.offsets[k] > p.offsets[k - 1])) {
      throw InvalidArgument("band offsets must be strictly increasing");
    }
  }
  if (!(p.width > 0.0)) throw InvalidArgument("band width must be positive");
  if (!(p.extent > 0.0)) throw InvalidArgument("band extent must be positive");
  std::mt19937_64 rng(p.seed);
  Dataset d;
  d.name = "bands";
  d.n_features = 2;
  const double s = std::numbers::sqrt2 / 2.0;
  for (std::size_t a = 0; a < p.n; ++a) {
    const std::size_t k = a % p.offsets.size();
    const double u = p.offsets[k] + p.width * standard_normal(rng);
    const double t = p.extent * (2.0 * unit_uniform(rng()) - 1.0);
    // u across the bands, t along (1,1).
    const double x[2] = {s * (t - u), s * (t + u)};
    d.push_back(x, k % 2 == 0 ? 1 : -1);
  }
  return d;
}

LabelEncoding parse_label_encoding(const std::string& name) {
  if (name == "pm1" || name == "1/-1") return LabelEncoding::kPlusMinusOne;
  if (name == "01" || name == "1/0") return LabelEncoding::kOneZero;
  if (name == "signal" || name == "signal/background") {
    return LabelEncoding::kSignalBackground;
  }
  throw ConfigError("labels: unknown encoding '" + name +
                    "' (expected 1/-1, 1/0 or signal/background)");
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int decode_label(std::string_view cell, LabelEncoding enc, std::size_t line) {
  switch (enc) {
    case LabelEncoding::kPlusMinusOne:
      if (cell == "1" || cell == "+1") return 1;
      if (cell == "-1") return -1;
      break;
    case LabelEncoding::kOneZero:
      if (cell == "1") return 1;
      if (cell == "0") return -1;
      break;
    case LabelEncoding::kSignalBackground:
      if (cell == "signal") return 1;
      if (cell == "background") return -1;
      break;
  }
  throw ParseError("unrecognized label '" + std::string(cell) + "'", line);
}

std::string encode_label(int y, LabelEncoding enc) {
  switch (enc) {
    case LabelEncoding::kPlusMinusOne:
      return y > 0 ? "1" : "-1";
    case LabelEncoding::kOneZero:
      return y > 0 ? "1" : "0";
    case LabelEncoding::kSignalBackground:
      return y > 0 ? "signal" : "background";
  }
  return {};
}

}  // namespace

Dataset load_csv(const std::string& path,
                 const std::vector<std::string>& feature_cols,
                 const std::string& label_col, LabelEncoding encoding) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto lines = split_lines(text);

  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) {
    ++header_line;
  }
  if (header_line == lines.size()) throw ParseError(path + ": empty file", 0);
  const auto header = split_commas(lines[header_line]);
  auto find_col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError(path + ": missing column '" + name + "'",
                       header_line + 1);
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> fcols;
  std::vector<std::string> names = feature_cols;
  if (names.empty()) {
    for (const auto& h : header) {
      if (h != label_col) names.emplace_back(h);
    }
  }
  for (const auto& name : names) fcols.push_back(find_col(name));
  const std::size_t lcol = find_col(label_col);

  Dataset d;
  d.name = path;
  d.n_features = fcols.size();
  std::vector<double> x(fcols.size());
  for (std::size_t i = header_line + 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cells = split_commas(lines[i]);
    if (cells.size() != header.size()) {
      throw ParseError(path + ": expected " + std::to_string(header.size()) +
                           " cells, found " + std::to_string(cells.size()),
                       i + 1);
    }
    for (std::size_t k = 0; k < fcols.size(); ++k) {
      if (!parse_double(cells[fcols[k]], x[k]) || !std::isfinite(x[k])) {
        throw ParseError(path + ": column '" + names[k] +
                             "' is not a number: '" +
                             std::string(cells[fcols[k]]) + "'",
                         i + 1);
      }
    }
    d.push_back(x, decode_label(cells[lcol], encoding, i + 1));
  }
  if (d.size() == 0) throw ParseError(path + ": no data rows", 0);
  return d;
}

void save_csv(const Dataset& data, const std::string& path,
              const std::vector<std::string>& feature_names,
              const std::string& label_name, LabelEncoding encoding) {
  data.validate();
  std::vector<std::string> names = feature_names;
  if (names.empty()) {
    for (std::size_t j = 0; j < data.n_features; ++j) {
      names.push_back("x" + std::to_string(j + 1));
    }
  }
  if (names.size() != data.n_features) {
    throw InvalidArgument("feature name count does not match the dataset");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& n : names) out << n << ',';
  out << label_name << '\n';
  for (std::size_t a = 0; a < data.size(); ++a) {
    for (double v : data.row(a)) out << format_double(v) << ',';
    out << encode_label(data.labels[a], encoding) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace qubonet
