#include "magdim/trainer.hpp"

#include <array>
#include <fstream>
#include <numeric>

#include "magdim/random.hpp"

namespace magdim {

namespace {

/// K points of a regular simplex with edge `edge`, as rows of a K x (K-1) matrix.
Eigen::MatrixXd simplex_vertices(int k, double edge) {
  if (k == 1) return Eigen::MatrixXd::Zero(1, 0);
  Eigen::MatrixXd centred = Eigen::MatrixXd::Identity(k, k);
  centred.rowwise() -= Eigen::RowVectorXd::Constant(k, 1.0 / k);
  centred *= edge / std::sqrt(2.0);
  // rows span the (k-1)-dim subspace orthogonal to the ones vector
  Eigen::MatrixXd basis(k, k - 1);
  for (int j = 0; j < k - 1; ++j) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(k);
    v.head(j + 1).setConstant(1.0);
    v(j + 1) = -(j + 1.0);
    basis.col(j) = v.normalized();
  }
  return centred * basis;
}

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path, std::streamoff offset) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4))
    throw Error(ErrorKind::MalformedIdx, path.string() + ": truncated at byte " + std::to_string(offset));
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

std::vector<unsigned char> read_idx(const std::filesystem::path& path, std::uint32_t expected_magic,
                                    std::vector<std::uint32_t>& dims) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const std::uint32_t magic = read_be32(in, path, 0);
  if (magic != expected_magic)
    throw Error(ErrorKind::MalformedIdx, path.string() + ": bad magic at byte 0");
  const std::uint32_t rank = magic & 0xFFu;
  dims.clear();
  std::size_t count = 1;
  for (std::uint32_t r = 0; r < rank; ++r) {
    dims.push_back(read_be32(in, path, static_cast<std::streamoff>(4 + 4 * r)));
    count *= dims.back();
  }
  std::vector<unsigned char> payload(count);
  const std::streamoff start = 4 + 4 * static_cast<std::streamoff>(rank);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count)
    throw Error(ErrorKind::MalformedIdx, path.string() + ": payload truncated at byte " +
                                             std::to_string(start + in.gcount()));
  return payload;
}

}  // namespace

LabelledData gen_blobs(int n_per_class, int n_classes, int input_dim, double separation, std::uint64_t seed) {
  if (n_per_class < 1 || n_classes < 1 || input_dim < 1)
    throw Error(ErrorKind::InvalidInputs, "blob counts must be >= 1");
  if (input_dim < n_classes - 1)
    throw Error(ErrorKind::InvalidInputs, "equidistant class means need input_dim >= n_classes - 1");
  if (!(separation >= 0.0) || !std::isfinite(separation))
    throw Error(ErrorKind::InvalidInputs, "separation must be finite and >= 0");

  const Eigen::MatrixXd vertices = simplex_vertices(n_classes, separation);
  const Eigen::Index total = static_cast<Eigen::Index>(n_per_class) * n_classes;
  LabelledData out;
  for (Dataset* d : {&out.train, &out.test}) d->n_classes = n_classes;
  std::vector<Eigen::Index> train_rows, test_rows;
  for (Eigen::Index i = 0; i < total; ++i) ((i / n_classes) % 5 == 4 ? test_rows : train_rows).push_back(i);

  auto fill = [&](Dataset& d, const std::vector<Eigen::Index>& rows) {
    d.features.resize(static_cast<Eigen::Index>(rows.size()), input_dim);
    d.labels.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Eigen::Index i = rows[r];
      const int label = static_cast<int>(i % n_classes);
      CounterStream rng(derive_key(seed, 0xB10Bu, static_cast<std::uint64_t>(i)));
      for (int j = 0; j < input_dim; ++j) {
        const double mean = j < vertices.cols() ? vertices(label, j) : 0.0;
        d.features(static_cast<Eigen::Index>(r), j) = mean + rng.normal();
      }
      d.labels[r] = label;
    }
  };
  fill(out.train, train_rows);
  fill(out.test, test_rows);
  return out;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  std::vector<std::uint32_t> image_dims, label_dims;
  const auto pixels = read_idx(images, 0x00000803u, image_dims);
  const auto label_bytes = read_idx(labels, 0x00000801u, label_dims);
  if (image_dims.size() != 3 || label_dims.size() != 1 || image_dims[0] != label_dims[0])
    throw Error(ErrorKind::MalformedIdx, "image and label counts disagree (byte 4)");
  const Eigen::Index n = image_dims[0];
  const Eigen::Index features = static_cast<Eigen::Index>(image_dims[1]) * image_dims[2];
  Dataset d;
  d.features.resize(n, features);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < features; ++j)
      d.features(i, j) = pixels[static_cast<std::size_t>(i * features + j)] / 255.0;
  d.labels.assign(label_bytes.begin(), label_bytes.end());
  int max_label = 0;
  for (int l : d.labels) max_label = std::max(max_label, l);
  d.n_classes = n > 0 ? max_label + 1 : 0;
  return d;
}

LabelledData split_dataset(const Dataset& data, double train_fraction) {
  const auto n_train = static_cast<Eigen::Index>(std::floor(train_fraction * static_cast<double>(data.size())));
  LabelledData out;
  out.train.n_classes = out.test.n_classes = data.n_classes;
  out.train.features = data.features.topRows(n_train);
  out.test.features = data.features.bottomRows(data.size() - n_train);
  out.train.labels.assign(data.labels.begin(), data.labels.begin() + n_train);
  out.test.labels.assign(data.labels.begin() + n_train, data.labels.end());
  return out;
}

ParamLayout::ParamLayout(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw Error(ErrorKind::InvalidInputs, "need at least an input and an output layer");
  for (int s : sizes_)
    if (s < 1) throw Error(ErrorKind::InvalidInputs, "layer sizes must be >= 1");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weight_offsets_.push_back(total_);
    total_ += static_cast<Eigen::Index>(sizes_[l]) * sizes_[l + 1];
  }
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    bias_offsets_.push_back(total_);
    total_ += sizes_[l + 1];
  }
}

Eigen::VectorXd init_params(const ParamLayout& layout, std::uint64_t seed) {
  Eigen::VectorXd params = Eigen::VectorXd::Zero(layout.size());
  for (std::size_t l = 0; l < layout.layers(); ++l) {
    CounterStream rng(derive_key(seed, 0x1A17u, l));
    const double sd = std::sqrt(2.0 / layout.in(l));
    const Eigen::Index count = static_cast<Eigen::Index>(layout.in(l)) * layout.out(l);
    for (Eigen::Index k = 0; k < count; ++k) params(layout.weight_offset(l) + k) = sd * rng.normal();
  }
  return params;
}

TrajectoryLog train_and_record(const TrainerConfig& config, const LabelledData& data) {
  const ParamLayout layout(config.layer_sizes);
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate))
    throw Error(ErrorKind::InvalidInputs, "learning rate must be finite and >= 0");
  if (config.batch_size < 1 || config.iterations < 1 || config.eval_every < 1)
    throw Error(ErrorKind::InvalidInputs, "batch size, iterations and eval_every must be >= 1");
  if (data.train.dim() != layout.in(0))
    throw Error(ErrorKind::InvalidInputs, "feature dimension " + std::to_string(data.train.dim()) +
                                              " does not match input layer " + std::to_string(layout.in(0)));
  if (data.train.n_classes != config.layer_sizes.back())
    throw Error(ErrorKind::InvalidInputs, "output layer must equal the class count");
  const Eigen::Index n_train = data.train.size();
  if (n_train < config.batch_size) throw Error(ErrorKind::InvalidInputs, "training set smaller than one batch");

  const Mlp<double> net(layout);
  Eigen::VectorXd params = init_params(layout, config.seed);
  Eigen::VectorXd grad;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_train));
  std::vector<Eigen::Index> batch(static_cast<std::size_t>(config.batch_size));
  std::size_t cursor = order.size();
  std::uint64_t epoch = 0;

  TrajectoryLog log;
  log.d = layout.size();
  log.records.reserve(static_cast<std::size_t>(config.iterations));
  for (std::int64_t it = 1; it <= config.iterations; ++it) {
    if (cursor + batch.size() > order.size()) {
      std::iota(order.begin(), order.end(), Eigen::Index{0});
      CounterStream rng(derive_key(config.seed, 0x5EEDu, epoch++));
      for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
      cursor = 0;
    }
    std::copy_n(order.begin() + static_cast<std::ptrdiff_t>(cursor), batch.size(), batch.begin());
    cursor += batch.size();

    const double loss = net.loss(params, data.train.features, data.train.labels, batch, &grad);
    if (!std::isfinite(loss) || !grad.allFinite())
      throw Error(ErrorKind::DivergedLoss, "loss became non-finite at iteration " + std::to_string(it));
    params -= config.learning_rate * grad;

    TrajectoryRecord rec;
    rec.iteration = static_cast<std::uint64_t>(it);
    rec.weights = params;
    rec.train_loss = loss;
    if (it % config.eval_every == 0) rec.test_accuracy = net.accuracy(params, data.test);
    log.records.push_back(std::move(rec));
  }
  return log;
}

std::vector<WindowView> sliding_windows(const TrajectoryLog& log, std::size_t window, std::size_t stride,
                                        std::size_t thin) {
  if (window < 1 || stride < 1 || thin < 1) throw Error(ErrorKind::InvalidInputs, "window, stride and thin must be >= 1");
  if (log.records.size() < window)
    throw Error(ErrorKind::InsufficientRecords, "log has " + std::to_string(log.records.size()) +
                                                    " records, window needs " + std::to_string(window));
  std::vector<WindowView> out;
  for (std::size_t start = 0, id = 0; start + window <= log.records.size(); start += stride, ++id) {
    const std::size_t kept = (window + thin - 1) / thin;
    PointCloud::Matrix points(static_cast<Eigen::Index>(kept), log.d);
    for (std::size_t k = 0; k < kept; ++k) points.row(static_cast<Eigen::Index>(k)) = log.records[start + k * thin].weights.transpose();
    out.push_back({id, PointCloud(std::move(points)), log.records[start + window - 1].test_accuracy});
  }
  return out;
}

}  // namespace magdim
