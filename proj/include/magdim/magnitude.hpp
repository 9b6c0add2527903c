#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "magdim/metric.hpp"

namespace magdim {

/// Condition estimates above this are reported as ill-conditioned. The
/// value is still returned; callers decide whether to trust it.
inline constexpr double kIllConditionedThreshold = 1e12;

/// Relative diagonal shift (times n) used for the single retry after a
/// failed Cholesky factorisation.
inline constexpr double kJitterPerPoint = 1e-12;

/// zeta_ij = exp(-d_ij). Unit diagonal, entries in (0, 1], symmetric.
template <typename Scalar>
class BasicSimilarityMatrix {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit BasicSimilarityMatrix(const BasicDistanceMatrix<Scalar>& dm)
      : entries_((-dm.entries().array()).exp().matrix()) {
    entries_.diagonal().setOnes();
  }

  Eigen::Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

template <typename Scalar>
BasicSimilarityMatrix<Scalar> similarity(const BasicDistanceMatrix<Scalar>& dm) {
  return BasicSimilarityMatrix<Scalar>(dm);
}

struct SolveDiagnostics {
  double condition_estimate = 1.0;  // 1 / (LAPACK-style reciprocal L1 condition estimate)
  double min_pivot = 1.0;           // smallest diagonal entry of the Cholesky factor
  bool jittered = false;            // the retry with a diagonal shift was needed
  bool ill_conditioned = false;     // condition_estimate > kIllConditionedThreshold
};

/// Solution w of zeta w = 1. The magnitude is exactly weights.sum().
template <typename Scalar>
struct BasicMagnitudeWeights {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
  Scalar residual_inf_norm{};
};

template <typename Scalar>
struct BasicMagnitudeResult {
  BasicMagnitudeWeights<Scalar> weights;
  Scalar value{};
  SolveDiagnostics diagnostics;
};

namespace detail {

template <typename Scalar>
bool factorise(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
               Eigen::LLT<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& llt, Scalar& min_pivot) {
  llt.compute(a);
  if (llt.info() != Eigen::Success) return false;
  min_pivot = llt.matrixLLT().diagonal().minCoeff();
  return min_pivot > Scalar(0) && std::isfinite(static_cast<double>(min_pivot));
}

}  // namespace detail

/// Magnitude of the space with similarity matrix `sim`, computed from a
/// Cholesky solve of zeta w = 1 (never an explicit inverse).
///
/// Coincident points make zeta exactly singular and raise
/// NumericallySingular naming the pair. Otherwise a failed factorisation is
/// retried once with kJitterPerPoint * n added to the diagonal; the retry is
/// flagged in the diagnostics.
template <typename Scalar>
BasicMagnitudeResult<Scalar> magnitude(const BasicSimilarityMatrix<Scalar>& sim) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Matrix& zeta = sim.entries();
  const Eigen::Index n = zeta.rows();

  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i)
      if (zeta(i, j) == Scalar(1))
        throw Error(ErrorKind::NumericallySingular,
                    "points " + std::to_string(j) + " and " + std::to_string(i) +
                        " coincide (identical similarity rows); deduplicate the point cloud first");

  BasicMagnitudeResult<Scalar> result;
  Eigen::LLT<Matrix> llt;
  Scalar min_pivot{};
  if (!detail::factorise(zeta, llt, min_pivot)) {
    Matrix shifted = zeta;
    shifted.diagonal().array() += Scalar(kJitterPerPoint * static_cast<double>(n));
    result.diagnostics.jittered = true;
    if (!detail::factorise(shifted, llt, min_pivot))
      throw Error(ErrorKind::NumericallySingular, "Cholesky factorisation failed even after diagonal jitter");
  }

  const Vector ones = Vector::Ones(n);
  Vector w = llt.solve(ones);
  const Scalar value = w.sum();
  if (!std::isfinite(static_cast<double>(value)) || !(value > Scalar(0)))
    throw Error(ErrorKind::NumericallySingular, "solve produced a non-positive or non-finite magnitude");

  result.weights.residual_inf_norm = (zeta * w - ones).template lpNorm<Eigen::Infinity>();
  result.weights.weights = std::move(w);
  result.value = value;
  const double rcond = static_cast<double>(llt.rcond());
  result.diagnostics.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  result.diagnostics.min_pivot = static_cast<double>(min_pivot);
  result.diagnostics.ill_conditioned = result.diagnostics.condition_estimate > kIllConditionedThreshold;
  return result;
}

/// Mag(tX) for a single scale.
template <typename Scalar>
BasicMagnitudeResult<Scalar> magnitude_at(const BasicDistanceMatrix<Scalar>& dm, Scalar t) {
  return magnitude(similarity(scale_distances(dm, t)));
}

using SimilarityMatrix = BasicSimilarityMatrix<double>;
using MagnitudeWeights = BasicMagnitudeWeights<double>;
using MagnitudeResult = BasicMagnitudeResult<double>;

struct CurveSample {
  double t = 0.0;
  double magnitude = 0.0;
  double condition_estimate = 0.0;
};

struct FailedScale {
  double t = 0.0;
  std::string reason;
};

/// Sampled magnitude function t -> Mag(tX) with per-scale solve notes.
struct MagnitudeCurve {
  std::vector<CurveSample> samples;  // strictly increasing t, magnitude > 0
  Eigen::Index n_points = 0;
  std::vector<FailedScale> failed;
  std::vector<double> jittered;
  std::vector<double> ill_conditioned;

  std::vector<double> scales() const;
  std::vector<double> values() const;
};

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// 64 log-spaced scales on [0.01, 40].
std::vector<double> default_curve_grid();

/// 64 log-spaced scales on [0.1 t*, 100 t*] with t* = 1 / median distance,
/// so the growth regime is sampled whatever the units of the data.
std::vector<double> estimation_grid(const DistanceMatrix& dm, std::size_t count = 64);

/// Throws InvalidScale unless the grid is non-empty, positive, finite and
/// strictly increasing.
void check_grid(const std::vector<double>& grid);

/// One solve per grid scale, spread over the worker pool. Scales whose solve
/// fails are left out of `samples` and listed in `failed`; EmptyCurve if
/// nothing succeeds.
MagnitudeCurve magnitude_function(const DistanceMatrix& dm, const std::vector<double>& grid);
MagnitudeCurve magnitude_function(const PointCloud& cloud, const std::vector<double>& grid);

/// Header `t,magnitude,condition_estimate`, 17 significant digits.
void write_curve_csv(std::ostream& out, const MagnitudeCurve& curve);
MagnitudeCurve read_curve_csv(std::istream& in);

}  // namespace magdim
