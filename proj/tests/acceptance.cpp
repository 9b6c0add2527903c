// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "magdim/analysis.hpp"
#include "magdim/bound.hpp"
#include "magdim/dimension.hpp"
#include "magdim/magnitude.hpp"
#include "magdim/pointcloud_io.hpp"
#include "magdim/synthetic.hpp"
#include "magdim/trainer.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace magdim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> check;
};

std::string fmt(const char* pattern, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mag_dim(const PointCloud& cloud) { return estimate_dim_mag(cloud).value; }

// ---- 1 ----
Outcome closed_form() {
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double d = 0.01 + (20.0 - 0.01) * k / 49.0;
    RowMatrix<double> m(2, 2);
    m << 0.0, d, d, 0.0;
    const double value = magnitude_at(DistanceMatrix(std::move(m)), 1.0).value;
    worst = std::max(worst, std::abs(value - 2.0 / (1.0 + std::exp(-d))));
  }
  return {worst <= 1e-10, fmt("max |error| %.3g (tol 1e-10)", worst)};
}

// ---- 2 ----
Outcome cardinality_limit() {
  std::string detail;
  bool pass = true;
  for (Eigen::Index n : {3, 50, 500}) {
    const auto dm = pairwise_distances(testing_util::random_cloud(n, 3, static_cast<std::uint64_t>(n)));
    const double t = 50.0 / min_positive_distance(dm);
    const double gap = std::abs(magnitude_at(dm, t).value - static_cast<double>(n));
    pass &= gap <= 1e-3 * static_cast<double>(n);
    detail += "n=" + std::to_string(n) + fmt(" gap %.3g; ", gap);
  }
  return {pass, detail + "tol 1e-3 n"};
}

// ---- 3 ----
Outcome inverse_oracle() {
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + trial % 8);
    const auto cloud = testing_util::random_cloud(n, 1 + static_cast<Eigen::Index>(trial % 3), 1000 + trial, 2.0);
    const double t = 0.25 + 0.05 * static_cast<double>(trial % 40);
    auto dist = oracle::euclidean(testing_util::rows_of(cloud));
    for (auto& row : dist)
      for (auto& v : row) v *= t;
    const double expected = static_cast<double>(oracle::magnitude_by_inverse(dist));
    const double got = magnitude_at(pairwise_distances(cloud), t).value;
    worst = std::max(worst, std::abs(got - expected));
  }
  return {worst <= 1e-8, fmt("max |solve - inverse| %.3g over 100 clouds (tol 1e-8)", worst)};
}

// ---- 4 ----
Outcome ground_truth_dims() {
  struct Case {
    std::string name;
    PointCloud cloud;
    double truth;
    double tol;
  };
  const std::vector<Case> cases{{"segment", gen_segment(2000, 1), 1.0, 0.15},
                                {"square", gen_square(2000, 1), 2.0, 0.2},
                                {"cantor", gen_cantor(11, 1), std::log(2.0) / std::log(3.0), 0.12}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const double mag = mag_dim(c.cloud);
    const double box = estimate_dim_box(c.cloud).value;
    const bool ok = std::abs(mag - c.truth) <= c.tol && std::abs(box - c.truth) <= 0.1;
    pass &= ok;
    detail += c.name + fmt(" mag %.3f", mag) + fmt(" box %.3f", box) + (ok ? " ok; " : " OUT; ");
  }
  return {pass, detail};
}

// ---- 5 ----
Outcome mag_vs_ph0_square() {
  const auto cloud = gen_square(1500, 1);
  const auto dm = pairwise_distances(cloud);
  const double mag = estimate_dim_mag(dm).value;
  Ph0Options options;
  options.seed = 1;
  const double ph0 = estimate_dim_ph0(dm, options).value;
  const double gap = std::abs(mag - ph0);
  return {gap <= 0.25, fmt("dim_mag %.3f", mag) + fmt(" dim_ph0 %.3f", ph0) + fmt(" gap %.3f (tol 0.25)", gap)};
}

// ---- 6 ----
Outcome levy_ablation() {
  std::vector<double> alphas, mags, ph0s;
  for (double alpha : {1.2, 1.4, 1.6, 1.8, 2.0})
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      LevyConfig config;
      config.alpha = alpha;
      config.d = 10;
      config.n_steps = 1000;
      config.seed = seed;
      const auto dm = pairwise_distances(gen_levy(config));
      Ph0Options options;
      options.seed = seed;
      alphas.push_back(alpha);
      mags.push_back(estimate_dim_mag(dm).value);
      ph0s.push_back(estimate_dim_ph0(dm, options).value);
    }
  const double r_alpha = pearson(mags, alphas);
  const double r_ph0 = pearson(mags, ph0s);
  double bias = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) bias += mags[i] - alphas[i];
  bias /= static_cast<double>(mags.size());
  const bool pass = r_alpha >= 0.9 && r_ph0 >= 0.9 && bias >= -0.6 && bias <= 0.1;
  return {pass, fmt("r(mag, alpha) %.3f", r_alpha) + fmt(" r(mag, ph0) %.3f", r_ph0) +
                    fmt(" mean signed error %.3f (need r >= 0.9, error in [-0.6, 0.1])", bias)};
}

// ---- 7 ----
Outcome gradient_check() {
  const std::vector<std::vector<int>> nets{{4, 3, 2}, {3, 5, 4, 3}, {2, 6, 3}, {5, 4, 4, 2}, {3, 3, 3}};
  double worst = 0.0;
  for (std::size_t k = 0; k < nets.size(); ++k) {
    const ParamLayout layout(nets[k]);
    const int classes = nets[k].back();
    const auto data = gen_blobs(8, classes, nets[k].front(), 2.0, 50 + k).train;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < data.size(); ++i) rows.push_back(i);
    const Eigen::VectorXd params = init_params(layout, 70 + k);

    Eigen::VectorXd grad;
    Mlp<double>(layout).loss(params, data.features, data.labels, rows, &grad);

    // reference differences in extended precision
    const Mlp<long double> reference(layout);
    const Eigen::Matrix<long double, Eigen::Dynamic, 1> p = params.cast<long double>();
    const long double h = 1e-5L;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      auto up = p, down = p;
      up(j) += h;
      down(j) -= h;
      const long double numeric =
          (reference.loss(up, data.features, data.labels, rows, nullptr) -
           reference.loss(down, data.features, data.labels, rows, nullptr)) / (2 * h);
      const double n = static_cast<double>(numeric);
      const double denom = std::max({std::abs(n), std::abs(grad(j)), 1e-6});
      worst = std::max(worst, std::abs(n - grad(j)) / denom);
    }
  }
  return {worst <= 1e-5, fmt("max relative error %.3g over 5 nets (tol 1e-5)", worst)};
}

// ---- 8 ----
Outcome trajectory_pipeline() {
  const double middle = kDefaultScales[kDefaultScales.size() / 2];
  std::vector<double> rhos;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainerConfig config;
    config.layer_sizes = {20, 32, 10};
    config.learning_rate = 0.1;
    config.batch_size = 100;
    config.iterations = 10000;
    config.eval_every = 1000;
    config.seed = seed;
    const auto log = train_and_record(config, gen_blobs(400, 10, 20, 3.0, seed));
    AnalyzeOptions options;
    options.scales = {middle};
    options.with_dim_mag = false;
    const auto report = analyze(log, options);
    double rho = std::nan("");
    for (const auto& c : report.summary)
      if (c.metric.rfind("mag_at_", 0) == 0) rho = c.spearman;
    rhos.push_back(rho);
    detail += fmt("%.3f ", rho);
  }
  const double med = median_of(rhos);
  return {med <= -0.3, "spearman per seed " + detail + fmt("median %.3f at t=", med) + fmt("%g (need <= -0.3)", middle)};
}

// ---- 9 ----
Outcome bound_evaluator() {
  using Big = boost::multiprecision::cpp_bin_float_50;
  std::mt19937_64 engine(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    BoundInputs in;
    in.dim = 10.0 * unit(engine);
    in.n = std::floor(std::pow(10.0, 1.0 + 6.0 * unit(engine)));
    in.C = 0.1 + 5.0 * unit(engine);
    in.K = 0.5 + 5.0 * unit(engine);
    in.M = 1.0 + 10.0 * unit(engine);
    in.gamma = 0.001 + 0.998 * unit(engine);
    const Big n(in.n), K(in.K), l = log(n * K * K);
    const Big exact = 2 * Big(in.C) * sqrt((Big(in.dim) + 1) * l * l / n + log(7 * Big(in.M) / Big(in.gamma)) / n);
    const double got = generalisation_bound(in);
    worst = std::max(worst, static_cast<double>(abs((Big(got) - exact) / exact)));
  }

  BoundInputs base{2.0, 1e4, 1.0, 1.0, 1.0, 0.05};
  const double b0 = generalisation_bound(base);
  auto with = [&](auto edit) {
    auto in = base;
    edit(in);
    return generalisation_bound(in);
  };
  bool monotone = with([](BoundInputs& i) { i.dim = 3.0; }) > b0 && with([](BoundInputs& i) { i.C = 2.0; }) > b0 &&
                  with([](BoundInputs& i) { i.M = 2.0; }) > b0 && with([](BoundInputs& i) { i.gamma = 0.1; }) < b0;
  double previous = b0;
  for (double n : {1e5, 1e7, 1e9, 1e12, 1e15}) {
    const double b = with([n](BoundInputs& i) { i.n = n; });
    monotone &= b < previous;
    previous = b;
  }
  monotone &= previous < 1e-5;
  return {worst <= 1e-12 && monotone,
          fmt("max relative error %.3g vs 50-digit evaluation (tol 1e-12); ", worst) +
              (monotone ? "monotonicity holds" : "monotonicity violated")};
}

// ---- 10 ----
int run_cli(const std::string& args) {
  const std::string command = std::string(MAGDIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Compares two text outputs field by field; numbers within tol, the rest exactly.
bool numerically_equal(const std::string& a, const std::string& b, double tol) {
  std::istringstream sa(a), sb(b);
  std::string la, lb;
  while (std::getline(sa, la)) {
    if (!std::getline(sb, lb)) return false;
    std::istringstream fa(la), fb(lb);
    std::string va, vb;
    while (std::getline(fa, va, ',')) {
      if (!std::getline(fb, vb, ',')) return false;
      if (va == vb) continue;
      try {
        const double x = parse_double(va), y = parse_double(vb);
        if (std::abs(x - y) > tol * std::max(1.0, std::abs(x))) return false;
      } catch (const Error&) {
        return false;
      }
    }
    if (std::getline(fb, vb, ',')) return false;
  }
  return !std::getline(sb, lb);
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "magdim_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto p = [&](const std::string& name) { return (dir / name).string(); };

  if (run_cli("gen square --n 400 --seed 3 --out " + p("fixture.csv")) != 0 ||
      run_cli("train --layers 2,8,3 --blobs 100,3,2,5 --batch 20 --iters 2000 --eval-every 500 --seed 4 --out " +
              p("fixture.trj")) != 0)
    return {false, "could not build fixtures"};

  struct Command {
    std::string args;  // "{out}" is replaced by the output path
    std::string ext;
    bool text;
  };
  const std::vector<Command> commands{
      {"gen segment --n 500 --seed 7 --out {out}", ".csv", true},
      {"gen square --n 500 --seed 7 --out {out}", ".bin", false},
      {"gen cantor --depth 8 --jitter 0.3 --seed 7 --out {out}", ".csv", true},
      {"gen levy --alpha 1.5 --d 5 --steps 500 --seed 7 --out {out}", ".bin", false},
      {"dim ph --in " + p("fixture.csv") + " --seed 7 --out {out}", ".csv", true},
      {"dim compare --in " + p("fixture.csv") + " --seed 7 --out {out}", ".csv", true},
      {"train --layers 2,8,3 --blobs 100,3,2,5 --batch 20 --iters 500 --eval-every 100 --seed 7 --out {out}", ".trj",
       false},
      {"analyze --in " + p("fixture.trj") + " --window 500 --stride 500 --curve-points 16 --ph0 --seed 7 --out {out}",
       ".csv", true},
  };

  bool pass = true;
  std::string failures;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    const auto& cmd = commands[k];
    auto run_to = [&](int threads, const std::string& tag) {
      const std::string file = p("out" + std::to_string(k) + tag + cmd.ext);
      std::string args = cmd.args;
      args.replace(args.find("{out}"), 5, file);
      return std::pair{run_cli("--threads " + std::to_string(threads) + " " + args), file};
    };
    const auto [rc1, f1] = run_to(1, "a");
    const auto [rc2, f2] = run_to(1, "b");
    const auto [rc4, f4] = run_to(4, "c");
    if (rc1 != 0 || rc2 != 0 || rc4 != 0) {
      pass = false;
      failures += " [" + cmd.args + ": nonzero exit]";
      continue;
    }
    const std::string a = slurp(f1), b = slurp(f2), c = slurp(f4);
    bool ok = a == b && !a.empty();
    ok &= cmd.text ? numerically_equal(a, c, 1e-10) : a == c;
    if (!ok) {
      pass = false;
      failures += " [" + cmd.args + "]";
    }
  }
  fs::remove_all(dir);
  return {pass, std::to_string(commands.size()) + " seeded commands; byte-identical reruns, threads 1 vs 4 within 1e-10" +
                    (failures.empty() ? std::string() : "; mismatches:" + failures)};
}

}  // namespace

// Optional arguments pick criteria by number; no arguments runs all of them.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  const std::vector<Criterion> criteria{
      {1, "closed-form two-point magnitude", 1, closed_form},
      {2, "cardinality limit at large scale", 30, cardinality_limit},
      {3, "solve matches explicit-inverse oracle", 5, inverse_oracle},
      {4, "ground-truth dimensions", 180, ground_truth_dims},
      {5, "dim_mag vs dim_ph0 on the unit square", 120, mag_vs_ph0_square},
      {6, "Levy alpha ablation", 600, levy_ablation},
      {7, "backprop vs finite differences", 10, gradient_check},
      {8, "trajectory magnitude vs test accuracy", 900, trajectory_pipeline},
      {9, "generalisation bound evaluator", 1, bound_evaluator},
      {10, "CLI determinism", 0, cli_determinism},
  };

  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = outcome.pass;
    if (c.time_limit_s > 0 && seconds > c.time_limit_s) {
      pass = false;
      outcome.detail += fmt("; over time limit %g s", c.time_limit_s);
    }
    failed += !pass;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
