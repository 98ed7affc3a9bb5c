#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qubonet {

// Labeled feature vectors, stored row-major. Labels are -1 or +1.
struct Dataset {
  std::string name;
  std::size_t n_features = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t a) const {
    return {features.data() + a * n_features, n_features};
  }
  std::vector<double> column(std::size_t j) const;

  void push_back(std::span<const double> x, int label);
  // Throws InvalidArgument on shape mismatch or labels outside {-1,+1}.
  void validate() const;
  bool has_both_classes() const;
};

// Per-feature affine map of the training range onto [-1, 1]. Constant
// features map to 0.
struct FeatureScaler {
  std::vector<double> lo;
  std::vector<double> hi;

  static FeatureScaler fit(const Dataset& data);
  static FeatureScaler identity(std::size_t n_features);

  std::size_t size() const { return lo.size(); }
  double apply(std::size_t j, double x) const;
  std::vector<double> apply(std::span<const double> x) const;
  Dataset transform(const Dataset& data) const;
};

// Synthetic generators. All are pure functions of their arguments.
struct CirclesParams {
  std::size_t n = 200;
  double noise = 0.1;
  std::uint64_t seed = 0;
};
struct QuadrantsParams {
  std::size_t n = 200;
  std::uint64_t seed = 0;
};
struct BandsParams {
  std::size_t n = 200;
  std::uint64_t seed = 0;
  std::vector<double> offsets{-0.8, 0.0, 0.8};
  double width = 0.35;
  // Half-length of the bands along the (1,1) direction.
  double extent = 2.0;
};

// n/2 points on a noisy unit circle (+1) and n - n/2 in a Gaussian blob at
// the origin (-1).
Dataset gen_circles(const CirclesParams& p);
// Uniform in [-1,1]^2; -1 when x1*x2 > 0, +1 otherwise (axes included).
Dataset gen_quadrants(const QuadrantsParams& p);
// Three Gaussian bands in u = (x2 - x1)/sqrt(2) centred on `offsets`, labeled
// +1, -1, +1.
Dataset gen_bands(const BandsParams& p);

enum class LabelEncoding {
  kPlusMinusOne,      // "1" / "-1"
  kOneZero,           // "1" / "0"
  kSignalBackground,  // "signal" / "background"
};

LabelEncoding parse_label_encoding(const std::string& name);

// Header row required. Errors carry the 1-based line number.
Dataset load_csv(const std::string& path,
                 const std::vector<std::string>& feature_cols,
                 const std::string& label_col,
                 LabelEncoding encoding = LabelEncoding::kPlusMinusOne);

void save_csv(const Dataset& data, const std::string& path,
              const std::vector<std::string>& feature_names = {},
              const std::string& label_name = "label",
              LabelEncoding encoding = LabelEncoding::kPlusMinusOne);

// Box-Muller normal draw from a 64-bit engine; portable across standard
// libraries unlike std::normal_distribution.
double standard_normal(std::mt19937_64& rng);

}  // namespace qubonet
