// magdim: magnitude, intrinsic dimension and trajectory analysis from the
// command line. Exit codes: 0 success, 1 usage error, 2 data/numeric error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
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
#include "magdim/trajectory_io.hpp"

namespace {

using namespace magdim;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

/// Writes to the file named by `path`, or stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::Io, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};


std::string format_sig(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct GenArgs {
  Eigen::Index n = 1000;
  std::uint64_t seed = 0;
  int depth = 11;
  double jitter = 0.0;
  LevyConfig levy;
  std::string out;
};

struct DimArgs {
  std::string in;
  std::string out;
  std::uint64_t seed = 0;
  double alpha = 1.0;
  std::size_t reps = 5;
  std::vector<Eigen::Index> sizes;
  std::size_t min_points = 8;
  std::size_t grid_points = 64;
  std::optional<double> t_lo, t_hi;
};

struct TrainArgs {
  std::string layers = "2,16,16,3";
  double lr = 0.1;
  int batch = 100;
  std::int64_t iters = 10000;
  std::uint64_t seed = 0;
  std::int64_t eval_every = 1000;
  std::string out;
  std::vector<double> blobs;
  std::string idx_images, idx_labels;
};

struct AnalyzeArgs {
  std::string in;
  std::string out;
  std::vector<double> scales{kDefaultScales.begin(), kDefaultScales.end()};
  std::size_t window = 1000, stride = 1000, thin = 1;
  std::string normalize = "median";
  bool ph0 = false;
  bool no_dim_mag = false;
  std::size_t curve_points = 32;
  std::optional<std::uint64_t> seed;
  double alpha = 1.0;
};

std::vector<int> parse_layers(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

void write_header(std::ostream& out, const std::string& command, std::uint64_t seed) {
  out << "# " << command << " seed=" << seed << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnitude of finite metric spaces, intrinsic dimension estimates and trajectory analysis"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads (results do not depend on this)")->check(CLI::PositiveNumber);

  // gen
  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic point cloud");
  gen_cmd->require_subcommand(1);
  auto add_common_gen = [&](CLI::App* sub) {
    sub->add_option("--seed", gen.seed, "Random seed")->required();
    sub->add_option("--out", gen.out, "Output file (.bin/.magpc binary, otherwise CSV)")->required();
  };
  auto* gen_segment_cmd = gen_cmd->add_subcommand("segment", "Uniform samples on [0,1]");
  gen_segment_cmd->add_option("--n", gen.n, "Number of points")->check(CLI::Range(2, 100000000));
  add_common_gen(gen_segment_cmd);
  auto* gen_square_cmd = gen_cmd->add_subcommand("square", "Uniform samples on [0,1]^2");
  gen_square_cmd->add_option("--n", gen.n, "Number of points")->check(CLI::Range(2, 100000000));
  add_common_gen(gen_square_cmd);
  auto* gen_cantor_cmd = gen_cmd->add_subcommand("cantor", "Middle-thirds Cantor set endpoints");
  gen_cantor_cmd->add_option("--depth", gen.depth, "Subdivision depth")->check(CLI::Range(1, 14));
  gen_cantor_cmd->add_option("--jitter", gen.jitter, "Relative jitter within each interval")->check(CLI::Range(0.0, 1.0));
  add_common_gen(gen_cantor_cmd);
  auto* gen_levy_cmd = gen_cmd->add_subcommand("levy", "Symmetric alpha-stable random walk");
  gen_levy_cmd->add_option("--alpha", gen.levy.alpha, "Stability index in (0, 2]");
  gen_levy_cmd->add_option("--d", gen.levy.d, "Ambient dimension")->check(CLI::PositiveNumber);
  gen_levy_cmd->add_option("--steps", gen.levy.n_steps, "Number of steps")->check(CLI::Range(2, 100000000));
  gen_levy_cmd->add_option("--step-scale", gen.levy.step_scale, "Increment scale")->check(CLI::PositiveNumber);
  add_common_gen(gen_levy_cmd);

  // mag
  std::string mag_in, mag_out, mag_weights;
  double mag_t = 1.0;
  auto* mag_cmd = app.add_subcommand("mag", "Magnitude of a point cloud at one scale");
  mag_cmd->add_option("--in", mag_in, "Point cloud (CSV or binary)")->required();
  mag_cmd->add_option("--t", mag_t, "Scale t > 0");
  mag_cmd->add_option("--out", mag_out, "Output CSV (default stdout)");
  mag_cmd->add_option("--weights-out", mag_weights, "Also write the magnitude weights, one per line");

  // magfun
  std::string magfun_in, magfun_out;
  std::vector<double> magfun_scales;
  std::vector<double> magfun_range;
  auto* magfun_cmd = app.add_subcommand("magfun", "Sampled magnitude function t -> Mag(tX)");
  magfun_cmd->add_option("--in", magfun_in, "Point cloud (CSV or binary)")->required();
  auto* scales_opt = magfun_cmd->add_option("--scales", magfun_scales, "Explicit increasing scales")->delimiter(',');
  magfun_cmd->add_option("--range", magfun_range, "lo,hi,count log-spaced grid (default 0.01,40,64)")
      ->delimiter(',')
      ->expected(3)
      ->excludes(scales_opt);
  magfun_cmd->add_option("--out", magfun_out, "Curve CSV (default stdout)");

  // dim
  DimArgs dim;
  auto* dim_cmd = app.add_subcommand("dim", "Intrinsic dimension estimates");
  dim_cmd->require_subcommand(1);
  auto add_dim_io = [&](CLI::App* sub) {
    sub->add_option("--in", dim.in, "Point cloud (CSV or binary)")->required();
    sub->add_option("--out", dim.out, "Dimension CSV (default stdout)");
  };
  auto add_mag_opts = [&](CLI::App* sub) {
    sub->add_option("--t-lo", dim.t_lo, "Fit interval start (default: automatic)");
    sub->add_option("--t-hi", dim.t_hi, "Fit interval end (default: automatic)");
    sub->add_option("--grid-points", dim.grid_points, "Scales in the estimation grid")->check(CLI::Range(8, 4096));
    sub->add_option("--min-points", dim.min_points, "Smallest automatic fit window")->check(CLI::Range(2, 4096));
  };
  auto add_ph_opts = [&](CLI::App* sub) {
    sub->add_option("--seed", dim.seed, "Subsampling seed")->required();
    sub->add_option("--alpha", dim.alpha, "Lifetime exponent")->check(CLI::PositiveNumber);
    sub->add_option("--reps", dim.reps, "Subsets per size")->check(CLI::PositiveNumber);
    sub->add_option("--sizes", dim.sizes, "Subsample sizes")->delimiter(',');
  };
  auto* dim_mag_cmd = dim_cmd->add_subcommand("mag", "Magnitude dimension");
  add_dim_io(dim_mag_cmd);
  add_mag_opts(dim_mag_cmd);
  auto* dim_ph_cmd = dim_cmd->add_subcommand("ph", "PH0 dimension by MST subsampling");
  add_dim_io(dim_ph_cmd);
  add_ph_opts(dim_ph_cmd);
  auto* dim_box_cmd = dim_cmd->add_subcommand("box", "Box-counting dimension");
  add_dim_io(dim_box_cmd);
  dim_box_cmd->add_option("--min-points", dim.min_points, "Smallest automatic fit window")->check(CLI::Range(2, 4096));
  auto* dim_compare_cmd = dim_cmd->add_subcommand("compare", "All three estimators on one cloud");
  add_dim_io(dim_compare_cmd);
  add_mag_opts(dim_compare_cmd);
  add_ph_opts(dim_compare_cmd);

  // train
  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train an MLP with SGD and record its weight trajectory");
  train_cmd->add_option("--layers", train.layers, "Layer sizes, input first, e.g. 2,16,16,3");
  train_cmd->add_option("--lr", train.lr, "Learning rate")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--batch", train.batch, "Batch size")->check(CLI::PositiveNumber);
  train_cmd->add_option("--iters", train.iters, "SGD iterations")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train.seed, "Seed for init, shuffling and blobs")->required();
  train_cmd->add_option("--eval-every", train.eval_every, "Test-accuracy period")->check(CLI::PositiveNumber);
  train_cmd->add_option("--out", train.out, "Trajectory file (MAGTRJ1)")->required();
  auto* blobs_opt = train_cmd->add_option("--blobs", train.blobs, "n_per_class,n_classes,input_dim,separation")
                        ->delimiter(',')
                        ->expected(4);
  auto* idx_images_opt = train_cmd->add_option("--idx-images", train.idx_images, "IDX image file");
  auto* idx_labels_opt = train_cmd->add_option("--idx-labels", train.idx_labels, "IDX label file");
  idx_images_opt->needs(idx_labels_opt)->excludes(blobs_opt);
  idx_labels_opt->needs(idx_images_opt);

  // analyze
  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Sliding-window magnitude analysis of a trajectory");
  analyze_cmd->add_option("--in", an.in, "Trajectory file (MAGTRJ1)")->required();
  analyze_cmd->add_option("--out", an.out, "Analysis CSV (default stdout)");
  analyze_cmd->add_option("--scales", an.scales, "Cross-section scales")->delimiter(',');
  analyze_cmd->add_option("--window", an.window, "Records per window")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--stride", an.stride, "Records between window starts")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--thin", an.thin, "Keep every k-th record of a window")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--normalize", an.normalize, "median or none")->check(CLI::IsMember({"median", "none"}));
  analyze_cmd->add_option("--curve-points", an.curve_points, "Scales in the dim_mag grid")->check(CLI::Range(8, 4096));
  analyze_cmd->add_flag("--no-dim-mag", an.no_dim_mag, "Skip the magnitude-dimension fit");
  analyze_cmd->add_flag("--ph0", an.ph0, "Also estimate the PH0 dimension (needs --seed)");
  analyze_cmd->add_option("--seed", an.seed, "Seed for PH0 subsampling");
  analyze_cmd->add_option("--alpha", an.alpha, "PH0 lifetime exponent")->check(CLI::PositiveNumber);

  // bound
  BoundInputs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate the magnitude-dimension generalisation bound");
  bound_cmd->add_option("--dim", bound.dim, "Magnitude dimension")->required();
  bound_cmd->add_option("--n", bound.n, "Training-set size")->required();
  bound_cmd->add_option("--C", bound.C, "Loss bound")->required();
  bound_cmd->add_option("--K", bound.K, "Lipschitz constant")->required();
  bound_cmd->add_option("--M", bound.M, "Mixing constant (>= 1)")->required();
  bound_cmd->add_option("--gamma", bound.gamma, "Failure probability")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }
  if (analyze_cmd->parsed() && an.ph0 && !an.seed) {
    std::cerr << "--ph0 requires --seed\n";
    return kUsageError;
  }
  set_num_threads(threads);

  try {
    if (gen_cmd->parsed()) {
      // the header names the generator and its parameters, never paths or thread counts
      std::ostringstream header;
      header << "magdim gen ";
      PointCloud cloud = [&] {
        if (gen_segment_cmd->parsed()) {
          header << "segment n=" << gen.n;
          return gen_segment(gen.n, gen.seed);
        }
        if (gen_square_cmd->parsed()) {
          header << "square n=" << gen.n;
          return gen_square(gen.n, gen.seed);
        }
        if (gen_cantor_cmd->parsed()) {
          header << "cantor depth=" << gen.depth << " jitter=" << format_double(gen.jitter);
          return gen_cantor(gen.depth, gen.seed, gen.jitter);
        }
        gen.levy.seed = gen.seed;
        header << "levy alpha=" << format_double(gen.levy.alpha) << " d=" << gen.levy.d << " steps=" << gen.levy.n_steps
               << " step_scale=" << format_double(gen.levy.step_scale);
        return gen_levy(gen.levy);
      }();
      header << " seed=" << gen.seed;
      save_cloud(gen.out, cloud, header.str());
    } else if (mag_cmd->parsed()) {
      const auto dm = pairwise_distances(load_cloud(mag_in));
      const auto result = magnitude_at(dm, mag_t);
      Output out(mag_out);
      out.stream() << "t,magnitude,condition_estimate\n"
                   << format_double(mag_t) << ',' << format_double(result.value) << ','
                   << format_double(result.diagnostics.condition_estimate) << '\n';
      if (result.diagnostics.jittered) std::cerr << "note: factorisation needed diagonal jitter\n";
      if (result.diagnostics.ill_conditioned) std::cerr << "warning: IllConditioned (condition estimate above 1e12)\n";
      if (!mag_weights.empty()) {
        Output w(mag_weights);
        for (Eigen::Index i = 0; i < result.weights.weights.size(); ++i)
          w.stream() << format_double(result.weights.weights(i)) << '\n';
      }
    } else if (magfun_cmd->parsed()) {
      std::vector<double> grid = magfun_scales;
      if (grid.empty())
        grid = magfun_range.empty() ? default_curve_grid()
                                    : log_grid(magfun_range[0], magfun_range[1], static_cast<std::size_t>(magfun_range[2]));
      const auto curve = magnitude_function(load_cloud(magfun_in), grid);
      Output out(magfun_out);
      write_curve_csv(out.stream(), curve);
      for (const auto& f : curve.failed) std::cerr << "scale " << format_double(f.t) << " skipped: " << f.reason << '\n';
      if (!curve.jittered.empty()) std::cerr << curve.jittered.size() << " scale(s) needed diagonal jitter\n";
      if (!curve.ill_conditioned.empty())
        std::cerr << "warning: IllConditioned at " << curve.ill_conditioned.size() << " scale(s)\n";
    } else if (dim_cmd->parsed()) {
      const PointCloud cloud = load_cloud(dim.in);
      CompareConfig config;
      config.magnitude.min_points = dim.min_points;
      if (dim.t_lo || dim.t_hi) {
        if (!dim.t_lo || !dim.t_hi) {
          std::cerr << "--t-lo and --t-hi must be given together\n";
          return kUsageError;
        }
        config.magnitude.interval = std::pair{*dim.t_lo, *dim.t_hi};
      }
      config.ph0.alpha = dim.alpha;
      config.ph0.reps = dim.reps;
      config.ph0.sizes = dim.sizes;
      config.ph0.seed = dim.seed;
      config.box.min_points = dim.min_points;

      std::vector<MethodOutcome> outcomes;
      bool randomized = false;
      if (dim_compare_cmd->parsed()) {
        const auto dm = pairwise_distances(cloud);
        config.magnitude.grid = estimation_grid(dm, dim.grid_points);
        outcomes = compare_dims(cloud, config).outcomes;
        randomized = true;
      } else if (dim_mag_cmd->parsed()) {
        const auto dm = pairwise_distances(cloud);
        config.magnitude.grid = estimation_grid(dm, dim.grid_points);
        outcomes.push_back({DimensionMethod::Magnitude, estimate_dim_mag(dm, config.magnitude), {}});
      } else if (dim_ph_cmd->parsed()) {
        outcomes.push_back({DimensionMethod::Ph0, estimate_dim_ph0(cloud, config.ph0), {}});
        randomized = true;
      } else {
        outcomes.push_back({DimensionMethod::Box, estimate_dim_box(cloud, config.box), {}});
      }
      Output out(dim.out);
      if (randomized) write_header(out.stream(), "magdim dim", dim.seed);
      write_dimension_csv(out.stream(), outcomes);
    } else if (train_cmd->parsed()) {
      TrainerConfig config;
      try {
        config.layer_sizes = parse_layers(train.layers);
      } catch (const std::logic_error&) {
        std::cerr << "--layers: expected comma-separated integers, got '" << train.layers << "'\n";
        return kUsageError;
      }
      config.learning_rate = train.lr;
      config.batch_size = train.batch;
      config.iterations = train.iters;
      config.seed = train.seed;
      config.eval_every = train.eval_every;
      LabelledData data;
      if (!train.idx_images.empty()) {
        data = split_dataset(load_idx(train.idx_images, train.idx_labels));
      } else {
        std::vector<double> b = train.blobs.empty() ? std::vector<double>{500, 3, 2, 10} : train.blobs;
        data = gen_blobs(static_cast<int>(b[0]), static_cast<int>(b[1]), static_cast<int>(b[2]), b[3], train.seed);
      }
      const auto log = train_and_record(config, data);
      save_trajectory(train.out, log);
      std::cout << "# magdim train seed=" << train.seed << '\n' << "iteration,train_loss,test_accuracy\n";
      for (const auto& rec : log.records)
        if (rec.has_accuracy())
          std::cout << rec.iteration << ',' << format_double(rec.train_loss) << ',' << format_double(rec.test_accuracy)
                    << '\n';
    } else if (analyze_cmd->parsed()) {
      AnalyzeOptions options;
      options.scales = an.scales;
      options.window = an.window;
      options.stride = an.stride;
      options.thin = an.thin;
      options.normalize = an.normalize == "none" ? Normalization::None : Normalization::Median;
      options.curve_points = an.curve_points;
      options.with_dim_mag = !an.no_dim_mag;
      options.with_ph0 = an.ph0;
      options.ph0.seed = an.seed.value_or(0);
      options.ph0.alpha = an.alpha;
      const auto report = analyze(load_trajectory(an.in), options);
      Output out(an.out);
      if (an.ph0) write_header(out.stream(), "magdim analyze", *an.seed);
      write_analysis_csv(out.stream(), report);
    } else if (bound_cmd->parsed()) {
      const double value = generalisation_bound(bound);
      std::cout << format_sig(value, 12) << '\n';
      std::cerr << "note: natural logarithms; the guarantee holds for n sufficiently large\n";
      if (bound_log_term_flagged(bound)) std::cerr << "warning: n*K^2 <= 1, the log^2 term is outside its intended regime\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
