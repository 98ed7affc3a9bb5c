// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "qubonet/classical.hpp"
#include "qubonet/error.hpp"
#include "qubonet/network.hpp"
#include "qubonet/quadratize.hpp"
#include "qubonet/run.hpp"
#include "qubonet/solvers.hpp"

using namespace qubonet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qubonet_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Assignment random_bits(std::mt19937_64& rng, std::size_t n) {
  Assignment a(n);
  for (auto& b : a) b = static_cast<std::uint8_t>(rng() & 1);
  return a;
}

// Min/max scaling onto [-1, 1], written out independently of FeatureScaler.
Dataset scale(const Dataset& d) {
  Dataset out = d;
  for (std::size_t j = 0; j < d.n_features; ++j) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t a = 0; a < d.size(); ++a) {
      lo = std::min(lo, d.row(a)[j]);
      hi = std::max(hi, d.row(a)[j]);
    }
    for (std::size_t a = 0; a < d.size(); ++a) {
      double& x = out.features[a * d.n_features + j];
      x = hi == lo ? 0.0 : -1.0 + 2.0 * (x - lo) / (hi - lo);
    }
  }
  return out;
}

// 1. Gadget truth table. Dyadic strengths keep every sum exact.
Outcome gadget_table() {
  Outcome o;
  for (double lam : {1.0, 3.0, 0.375, 256.0}) {
    const auto q = constraint_gadget(2, 0, 1, lam);
    for (std::uint64_t m = 0; m < 8; ++m) {
      const auto x = oracle::bits(m, 3);
      const double got = oracle::eval_unit(q, x);
      // Inconsistent cases: 3 Lambda with neither input set and z on,
      // Lambda otherwise.
      const int t1 = x[0], t2 = x[1], z = x[2];
      double want = 0.0;
      if (z != (t1 & t2)) want = (z == 1 && t1 + t2 == 0) ? 3.0 * lam : lam;
      if (got != want) {
        o.ok = false;
        o.detail = "lambda " + fmt(lam) + " case " + std::to_string(m) + " got " + fmt(got);
        return o;
      }
    }
  }
  o.detail = "8 cases x 4 strengths exact";
  return o;
}

// 2. sigma1 sigma2 sigma3 with Lambda 3 and 1.
Outcome worked_example() {
  Outcome o;
  MultilinearPoly p(Basis::kSpin);
  p.add_term(Monomial{0, 1, 2}, 1.0);
  p = to_unit(p);
  const auto good = quadratize(p, LambdaStrategy::fixed_value(3.0));
  const auto r = verify_reduction(p, good);
  const auto brute = oracle::brute_min(
      [&](const Assignment& x) { return oracle::eval_unit(good.quadratic, x); }, good.total_var_count());
  std::set<Assignment> proj;
  for (const auto& x : brute.argmin) proj.insert(Assignment(x.begin(), x.begin() + 3));
  bool odd_parity = true;
  for (const auto& x : proj) {
    const auto s = oracle::spins_of(x);
    odd_parity = odd_parity && s[0] * s[1] * s[2] == -1.0;
  }
  const auto weak = verify_reduction(p, quadratize(p, LambdaStrategy::fixed_value(1.0)));
  o.ok = r.passed && std::abs(brute.min + 1.0) < 1e-12 && proj.size() == 4 && odd_parity && !weak.passed;
  o.detail = "min " + fmt(brute.min) + ", " + std::to_string(proj.size()) + " projections; lambda 1: " +
             (weak.passed ? "passed" : weak.failure);
  return o;
}

// 3. Random soundness sweep.
Outcome soundness_sweep() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    auto p = oracle::random_poly(rng, Basis::kUnit, n, 4, 1 + rng() % 12, 5);
    const auto m = quadratize(p, {}, static_cast<Var>(n));
    const auto r = verify_reduction(p, m, 26);
    if (!r.passed) {
      o.ok = false;
      o.detail = "trial " + std::to_string(trial) + ": " + r.failure;
      return o;
    }
    ++checked;
  }
  o.detail = std::to_string(checked) + " polynomials verified";
  return o;
}

// 4. QUBO energy equals MSE of the decoded network on lifted assignments.
Outcome energy_identity() {
  Outcome o;
  NetworkShape s;
  const auto data = gen_circles({200, 0.1, 0});
  const auto scaled = scale(data);
  const auto m = compile_structured(s, data);
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto bits = random_bits(rng, m.counts.parameter_bits);
    const auto full = lift_assignment(m.reduction, bits);
    const auto net = decode_solution(m, full);
    std::vector<std::vector<double>> w(s.n_hidden, std::vector<double>(s.n_features));
    for (std::size_t u = 0; u < s.n_hidden; ++u)
      for (std::size_t j = 0; j < s.n_features; ++j) w[u][j] = net.hidden_weights()[u * s.n_features + j];
    double mse = 0.0;
    for (std::size_t a = 0; a < scaled.size(); ++a) {
      const auto r = scaled.row(a);
      const double e = scaled.labels[a] - oracle::net_output(w, net.output_weights(), net.output_bias(),
                                                             s.activation.coeffs, {r.begin(), r.end()});
      mse += e * e;
    }
    mse /= static_cast<double>(scaled.size());
    worst = std::max(worst, std::abs(m.qubo.energy(full) - mse));
  }
  o.ok = worst < 1e-9;
  o.detail = "max deviation " + fmt(worst) + " over 1000 assignments, lambda " + fmt(m.lambda);
  return o;
}

// 5. Auxiliary counts with first-layer biases.
Outcome aux_counts() {
  Outcome o;
  NetworkShape s;
  s.first_layer_bias = true;
  const auto m = compile_structured(s, gen_circles({40, 0.1, 0}));
  const std::size_t units = s.n_hidden + 1, inputs = s.n_features + 1;
  const std::size_t want_vw = units * inputs * s.n_bits * s.n_bits;
  const std::size_t want_vww = units * inputs * inputs * s.n_bits * s.n_bits * s.n_bits;
  o.ok = m.counts.n_vw == 9 && m.counts.n_vww == 27 && want_vw == 9 && want_vww == 27 &&
         m.counts == count_spins(s, CompilePath::kStructured) &&
         m.qubo.n_vars == m.counts.abstract_spins;
  o.detail = "n_vw " + std::to_string(m.counts.n_vw) + ", n_vww " + std::to_string(m.counts.n_vww) +
             ", spins " + std::to_string(m.counts.abstract_spins);
  return o;
}

// 6. Classification quality with the exact solver, plus the CSV pipeline.
Outcome classification() {
  Outcome o;
  const std::pair<const char*, double> targets[] = {{"circles", 0.99}, {"quadrants", 0.99}, {"bands", 0.85}};
  for (const auto& [name, floor] : targets) {
    RunConfig c;
    c.datasets = {name};
    c.out = scratch(std::string("c6_") + name);
    const auto r = cmd_train(c);
    const auto scores = r.network.scores(make_dataset(c, name));
    const double auc = oracle::auc_pairs(scores, make_dataset(c, name).labels);
    o.detail += std::string(name) + " " + fmt(auc) + "; ";
    o.ok = o.ok && auc >= floor && std::abs(auc - r.auc) < 1e-12;
  }
  const auto dir = scratch("c6_csv");
  RunConfig gen;
  gen.datasets = {"quadrants"};
  const auto original = cmd_dataset_gen(gen, dir + "/q.csv");
  const auto loaded = load_csv(dir + "/q.csv", {"x1", "x2"}, "label");
  const bool same = loaded.features == original.features && loaded.labels == original.labels;
  RunConfig c;
  c.datasets = {"csv"};
  c.csv = dir + "/q.csv";
  c.csv_features = {"x1", "x2"};
  c.out = dir + "/run";
  const double csv_auc = cmd_train(c).auc;
  o.ok = o.ok && same && csv_auc >= 0.99;
  o.detail += "csv round trip " + std::string(same ? "exact" : "differs") + ", csv AUC " + fmt(csv_auc);
  return o;
}

// 7. Best of 300 SA reads against the exact minimum.
Outcome sa_vs_exact() {
  Outcome o;
  RunConfig cfg;
  const auto m = compile_structured(NetworkShape{}, make_dataset(cfg, "circles"));
  const auto exact = exact_solve(m.qubo);
  int hits = 0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    SamplerConfig sc;
    sc.num_reads = 300;
    sc.seed = 1000 * rep;
    const auto best = best_of(sa_sample(m.qubo, sc));
    if (best.energy <= exact.min_energy + 1e-9 * std::max(1.0, std::abs(exact.min_energy))) ++hits;
  }
  o.ok = hits >= 9;
  o.detail = std::to_string(hits) + "/10 repetitions reached " + fmt(exact.min_energy);
  return o;
}

// 8. Gradients, compare report and the qualitative ordering.
Outcome classical_baseline() {
  Outcome o;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const auto data = scale(gen_circles({80, 0.1, 3}));
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    NetworkShape s;
    s.first_layer_bias = trial % 2;
    std::vector<double> p(classical_param_count(s)), g(p.size());
    for (auto& v : p) v = u(rng);
    classical_objective(s, data, p, 5.0, g);
    double scale_g = 0.0, err = 0.0;
    for (double v : g) scale_g = std::max(scale_g, std::abs(v));
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double keep = p[k], h = 1e-5;
      p[k] = keep + h;
      const double up = classical_objective(s, data, p, 5.0);
      p[k] = keep - h;
      const double down = classical_objective(s, data, p, 5.0);
      p[k] = keep;
      err = std::max(err, std::abs((up - down) / (2 * h) - g[k]) / scale_g);
    }
    worst = std::max(worst, err);
  }
  o.ok = worst < 1e-5;
  o.detail = "gradient rel err " + fmt(worst) + "; ";

  RunConfig c;
  c.datasets = {"circles", "quadrants", "bands"};
  c.runs = 10;
  c.out = scratch("c8");
  for (const auto& row : cmd_compare(c)) {
    const auto& r = row.report;
    const bool shape_ok = r.classical_aucs.size() + row.excluded_runs == 10 &&
                          r.classical_p20 <= r.classical_median && r.classical_median <= r.classical_p80;
    o.ok = o.ok && shape_ok && r.quantum_auc >= r.classical_median;
    o.detail += row.dataset + " " + fmt(r.quantum_auc) + " vs median " + fmt(r.classical_median) + " [" +
                fmt(r.classical_p20) + ", " + fmt(r.classical_p80) + "]; ";
  }
  return o;
}

// 9. Byte-identical metrics on re-runs.
Outcome determinism() {
  Outcome o;
  auto twice = [&](const std::string& tag, const std::function<void(const std::string&)>& run) {
    const auto a = scratch(tag + "_a"), b = scratch(tag + "_b");
    run(a);
    run(b);
    const bool same = read_file(a + "/metrics.json") == read_file(b + "/metrics.json");
    o.ok = o.ok && same;
    o.detail += tag + (same ? " identical; " : " DIFFERS; ");
  };
  twice("train_exact", [](const std::string& out) {
    RunConfig c;
    c.datasets = {"bands"};
    c.out = out;
    cmd_train(c);
  });
  twice("train_sa", [](const std::string& out) {
    RunConfig c;
    c.solver = "sa";
    c.seed = 7;
    c.out = out;
    cmd_train(c);
  });
  twice("compare", [](const std::string& out) {
    RunConfig c;
    c.datasets = {"quadrants"};
    c.runs = 10;
    c.out = out;
    cmd_compare(c);
  });
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"gadget truth table", gadget_table},
      {"three-spin worked example", worked_example},
      {"quadratization soundness sweep", soundness_sweep},
      {"compiler energy identity", energy_identity},
      {"auxiliary counts with biases", aux_counts},
      {"classification AUC and CSV pipeline", classification},
      {"SA best-of-300 vs exact", sa_vs_exact},
      {"classical baseline", classical_baseline},
      {"determinism", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s (%.2fs): %s\n", r.ok ? "PASS" : "FAIL", index, name, secs, r.detail.c_str());
    std::fflush(stdout);
    if (!r.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
