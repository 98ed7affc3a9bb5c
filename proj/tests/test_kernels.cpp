#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "oracles.hpp"
#include "qubonet/error.hpp"
#include "qubonet/kernels/kernels.hpp"

using namespace qubonet::kernels;

namespace {

std::vector<Isa> variants() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (available(isa)) out.push_back(isa);
  }
  return out;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct Net {
  std::size_t units, inputs;
  std::vector<std::vector<double>> cols;
  std::vector<const double*> col_ptrs;
  std::vector<double> w, v, g;
  double v0;
};

Net random_net(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Net net;
  net.units = 1 + rng() % 4;
  net.inputs = 1 + rng() % 4;
  net.cols.assign(net.inputs, std::vector<double>(n));
  for (auto& c : net.cols)
    for (auto& x : c) x = d(rng);
  for (auto& c : net.cols) net.col_ptrs.push_back(c.data());
  net.w.resize(net.units * net.inputs);
  for (auto& x : net.w) x = d(rng);
  net.v.resize(net.units);
  for (auto& x : net.v) x = d(rng);
  net.g.resize(1 + rng() % 4);
  for (auto& x : net.g) x = d(rng);
  net.v0 = d(rng);
  return net;
}

ForwardArgs args_of(const Net& net) {
  return {net.units, net.inputs, net.col_ptrs.data(), net.w.data(),
          net.v.data(), net.v0, net.g.data(), net.g.size() - 1};
}

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
  EXPECT_TRUE(available(Isa::kScalar));
  EXPECT_EQ(table(Isa::kScalar).isa, Isa::kScalar);
  EXPECT_TRUE(available(active().isa));
  EXPECT_EQ(isa_name(Isa::kAvx2), "avx2");
}

TEST(Kernels, UnavailableVariantThrows) {
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (!available(isa)) {
      EXPECT_THROW(table(isa), qubonet::InvalidArgument);
    }
  }
}

TEST(Kernels, ScalarAddScaledMatchesLoop) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  std::vector<double> dst(37), row(37);
  for (auto& x : dst) x = d(rng);
  for (auto& x : row) x = d(rng);
  auto want = dst;
  for (std::size_t k = 0; k < want.size(); ++k) want[k] += 1.25 * row[k];
  table(Isa::kScalar).add_scaled(dst.data(), row.data(), 1.25, dst.size());
  EXPECT_TRUE(bit_equal(dst, want));
}

TEST(Kernels, ScalarForwardMatchesFormula) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    const Net net = random_net(rng, n);
    std::vector<double> out(n);
    table(Isa::kScalar).network_forward(args_of(net), out.data(), n);
    std::vector<std::vector<double>> w(net.units, std::vector<double>(net.inputs));
    for (std::size_t u = 0; u < net.units; ++u)
      for (std::size_t j = 0; j < net.inputs; ++j) w[u][j] = net.w[u * net.inputs + j];
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<double> x(net.inputs);
      for (std::size_t j = 0; j < net.inputs; ++j) x[j] = net.cols[j][a];
      ASSERT_NEAR(out[a], oracle::net_output(w, net.v, net.v0, net.g, x), 1e-12);
    }
  }
}

TEST(Kernels, VariantsBitExactAddScaled) {
  const auto vs = variants();
  if (vs.empty()) GTEST_SKIP() << "no vector variant on this CPU";
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 63, 64, 65, 1001}) {
    std::vector<double> dst(n), row(n);
    for (auto& x : dst) x = d(rng);
    for (auto& x : row) x = d(rng);
    const double scale = d(rng) / 7.0;
    auto ref = dst;
    table(Isa::kScalar).add_scaled(ref.data(), row.data(), scale, n);
    for (Isa isa : vs) {
      auto got = dst;
      table(isa).add_scaled(got.data(), row.data(), scale, n);
      ASSERT_TRUE(bit_equal(got, ref)) << isa_name(isa) << " n=" << n;
    }
  }
}

TEST(Kernels, VariantsBitExactForward) {
  const auto vs = variants();
  if (vs.empty()) GTEST_SKIP() << "no vector variant on this CPU";
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng() % 70;
    const Net net = random_net(rng, n);
    std::vector<double> ref(n);
    table(Isa::kScalar).network_forward(args_of(net), ref.data(), n);
    for (Isa isa : vs) {
      std::vector<double> got(n);
      table(isa).network_forward(args_of(net), got.data(), n);
      ASSERT_TRUE(bit_equal(got, ref)) << isa_name(isa) << " n=" << n;
    }
  }
}
