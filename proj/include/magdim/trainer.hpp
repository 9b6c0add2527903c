#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include "magdim/metric.hpp"

namespace magdim {

// ---- data ----

struct Dataset {
  RowMatrix<double> features;  // one sample per row
  std::vector<int> labels;     // in [0, n_classes)
  int n_classes = 0;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

struct LabelledData {
  Dataset train;
  Dataset test;
};

/// Gaussian blobs with identity covariance. Class means sit on a regular
/// simplex with edge `separation` (needs input_dim >= n_classes - 1). Sample
/// i belongs to class i % n_classes; every fifth sample of a class goes to
/// the test split.
LabelledData gen_blobs(int n_per_class, int n_classes, int input_dim, double separation, std::uint64_t seed);

/// Reads an IDX image file (magic 0x00000803) and label file (0x00000801).
/// Pixels are scaled by 1/255. Errors are MalformedIdx naming the byte offset.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// First `train_fraction` of the samples train, the rest test.
LabelledData split_dataset(const Dataset& data, double train_fraction = 0.8);

// ---- model ----

template <typename Scalar>
struct LayerParams {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> weight;  // out x in
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bias;                 // out
};

/// Parameter layout of a fully-connected net: every weight matrix in layer
/// order (each column-major, out x in), then every bias vector in layer order.
class ParamLayout {
 public:
  explicit ParamLayout(std::vector<int> layer_sizes);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  std::size_t layers() const { return sizes_.size() - 1; }
  Eigen::Index size() const { return total_; }
  Eigen::Index weight_offset(std::size_t layer) const { return weight_offsets_[layer]; }
  Eigen::Index bias_offset(std::size_t layer) const { return bias_offsets_[layer]; }
  int in(std::size_t layer) const { return sizes_[layer]; }
  int out(std::size_t layer) const { return sizes_[layer + 1]; }

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::Index> weight_offsets_;
  std::vector<Eigen::Index> bias_offsets_;
  Eigen::Index total_ = 0;
};

template <typename Scalar>
std::vector<LayerParams<Scalar>> unflatten(const ParamLayout& layout,
                                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& flat) {
  std::vector<LayerParams<Scalar>> out(layout.layers());
  for (std::size_t l = 0; l < layout.layers(); ++l) {
    out[l].weight = Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(
        flat.data() + layout.weight_offset(l), layout.out(l), layout.in(l));
    out[l].bias = flat.segment(layout.bias_offset(l), layout.out(l));
  }
  return out;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> flatten(const ParamLayout& layout, const std::vector<LayerParams<Scalar>>& layers) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> flat(layout.size());
  for (std::size_t l = 0; l < layout.layers(); ++l) {
    Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(flat.data() + layout.weight_offset(l),
                                                                     layout.out(l), layout.in(l)) = layers[l].weight;
    flat.segment(layout.bias_offset(l), layout.out(l)) = layers[l].bias;
  }
  return flat;
}

/// ReLU hidden layers, softmax output, mean cross-entropy. Works on a flat
/// parameter vector laid out by ParamLayout.
template <typename Scalar>
class Mlp {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit Mlp(ParamLayout layout) : layout_(std::move(layout)) {}

  const ParamLayout& layout() const { return layout_; }

  /// Mean cross-entropy over the listed rows of `x`; fills `grad` (same
  /// layout as params) when non-null.
  Scalar loss(const Vector& params, const RowMatrix<double>& x, const std::vector<int>& y,
              const std::vector<Eigen::Index>& rows, Vector* grad) const {
    const std::size_t nl = layout_.layers();
    const auto batch = static_cast<Eigen::Index>(rows.size());
    std::vector<Matrix> act(nl + 1);  // act[0] input, act[l] post-activation of layer l
    act[0].resize(layout_.in(0), batch);
    for (Eigen::Index b = 0; b < batch; ++b) act[0].col(b) = x.row(rows[static_cast<std::size_t>(b)]).transpose().template cast<Scalar>();

    for (std::size_t l = 0; l < nl; ++l) {
      Matrix z = weight(params, l) * act[l];
      z.colwise() += bias(params, l);
      if (l + 1 < nl) z = z.cwiseMax(Scalar(0));
      act[l + 1] = std::move(z);
    }

    // softmax with the column max subtracted
    Matrix& logits = act[nl];
    Scalar total = 0;
    Matrix probs(logits.rows(), batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const Scalar peak = logits.col(b).maxCoeff();
      auto shifted = (logits.col(b).array() - peak).exp();
      const Scalar norm = shifted.sum();
      probs.col(b) = (shifted / norm).matrix();
      const int label = y[static_cast<std::size_t>(rows[static_cast<std::size_t>(b)])];
      total -= logits(label, b) - peak - std::log(norm);
    }
    const Scalar mean_loss = total / Scalar(batch);
    if (!grad) return mean_loss;

    grad->resize(layout_.size());
    Matrix delta = probs;
    for (Eigen::Index b = 0; b < batch; ++b) delta(y[static_cast<std::size_t>(rows[static_cast<std::size_t>(b)])], b) -= Scalar(1);
    delta /= Scalar(batch);
    for (std::size_t l = nl; l-- > 0;) {
      Eigen::Map<Matrix>(grad->data() + layout_.weight_offset(l), layout_.out(l), layout_.in(l)) =
          delta * act[l].transpose();
      grad->segment(layout_.bias_offset(l), layout_.out(l)) = delta.rowwise().sum();
      if (l > 0) delta = ((weight(params, l).transpose() * delta).array() * (act[l].array() > Scalar(0)).template cast<Scalar>()).matrix();
    }
    return mean_loss;
  }

  /// Arg-max class for every row of x.
  std::vector<int> predict(const Vector& params, const RowMatrix<double>& x) const {
    Matrix h = x.transpose().template cast<Scalar>();
    for (std::size_t l = 0; l < layout_.layers(); ++l) {
      Matrix z = weight(params, l) * h;
      z.colwise() += bias(params, l);
      if (l + 1 < layout_.layers()) z = z.cwiseMax(Scalar(0));
      h = std::move(z);
    }
    std::vector<int> out(static_cast<std::size_t>(h.cols()));
    for (Eigen::Index b = 0; b < h.cols(); ++b) {
      Eigen::Index arg = 0;
      h.col(b).maxCoeff(&arg);
      out[static_cast<std::size_t>(b)] = static_cast<int>(arg);
    }
    return out;
  }

  double accuracy(const Vector& params, const Dataset& data) const {
    if (data.size() == 0) return std::numeric_limits<double>::quiet_NaN();
    const auto pred = predict(params, data.features);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == data.labels[i];
    return static_cast<double>(hits) / static_cast<double>(pred.size());
  }

 private:
  Eigen::Map<const Matrix> weight(const Vector& p, std::size_t l) const {
    return Eigen::Map<const Matrix>(p.data() + layout_.weight_offset(l), layout_.out(l), layout_.in(l));
  }
  auto bias(const Vector& p, std::size_t l) const { return p.segment(layout_.bias_offset(l), layout_.out(l)); }

  ParamLayout layout_;
};

/// He-style init: weights N(0, 2 / fan_in), biases zero. Seeded.
Eigen::VectorXd init_params(const ParamLayout& layout, std::uint64_t seed);

// ---- training ----

struct TrainerConfig {
  std::vector<int> layer_sizes{2, 16, 16, 3};
  double learning_rate = 0.1;
  int batch_size = 100;
  std::int64_t iterations = 10000;
  std::uint64_t seed = 0;
  std::int64_t eval_every = 1000;
};

struct TrajectoryRecord {
  std::uint64_t iteration = 0;
  Eigen::VectorXd weights;
  double train_loss = 0.0;
  double test_accuracy = std::numeric_limits<double>::quiet_NaN();  // NaN when not evaluated

  bool has_accuracy() const { return !std::isnan(test_accuracy); }
};

/// Weights after every SGD step, iterations numbered from 1.
struct TrajectoryLog {
  Eigen::Index d = 0;
  std::vector<TrajectoryRecord> records;
};

/// Plain mini-batch SGD (no momentum, no weight decay). Batches walk through
/// a fresh seeded permutation of the training set each epoch; a tail shorter
/// than the batch size is skipped. The loss recorded at iteration i is the
/// batch loss before that step; test accuracy is measured after the step
/// when i is a multiple of eval_every. DivergedLoss on a non-finite loss.
TrajectoryLog train_and_record(const TrainerConfig& config, const LabelledData& data);

struct WindowView {
  std::size_t window_id = 0;
  PointCloud cloud;
  double end_test_accuracy = std::numeric_limits<double>::quiet_NaN();
};

/// Window k covers records [k*stride, k*stride + window) (iterations
/// k*stride + 1 ... k*stride + window for a log starting at 1). `thin` keeps
/// every thin-th record of the window. InsufficientRecords when the log is
/// shorter than one window.
std::vector<WindowView> sliding_windows(const TrajectoryLog& log, std::size_t window = 1000,
                                        std::size_t stride = 1000, std::size_t thin = 1);

}  // namespace magdim
