#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace priorart {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ModelKind { Linear, KernelRbf };

std::string_view model_kind_name(ModelKind kind);  // "linear", "kernel-rbf"
ModelKind parse_model_kind(std::string_view name);

// Per-dimension min-max scaling to [0, 1]. Constant dimensions map to 0;
// values outside the fitted range are not clamped.
struct MinMaxScaler {
  Vector min;
  Vector max;

  static MinMaxScaler fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
  Vector apply(const Vector& row) const;
  friend bool operator==(const MinMaxScaler& a, const MinMaxScaler& b) {
    return a.min == b.min && a.max == b.max;
  }
};

struct RegressionModel {
  ModelKind kind = ModelKind::Linear;
  std::optional<MinMaxScaler> scaler;  // applied to raw inputs before predicting

  // Linear: intercept + weights·x
  double intercept = 0.0;
  Vector weights;

  // Kernel: offset + Σ alpha_i·exp(−gamma·‖support_i − x‖²)
  Matrix support;
  Vector alpha;
  double gamma = 0.0;
  double offset = 0.0;

  std::size_t dimension() const;
  double predict(const Vector& x) const;
  Vector predict(const Matrix& x) const;

  std::string to_json() const;
  static RegressionModel from_json(const std::string& text);
  void save(const std::string& path) const;
  static RegressionModel load(const std::string& path);

  friend bool operator==(const RegressionModel& a, const RegressionModel& b);
};

// Least squares with an unpenalized intercept and optional ridge penalty on
// the weights. Constant columns get weight 0; rank-deficient systems without
// a ridge term take the minimum-norm solution. Throws FitError on dimension
// mismatch, empty input or non-finite values.
RegressionModel fit_linear(const Matrix& x, const Vector& y, double ridge = 0.0);

// Kernel ridge regression with an RBF kernel on centered targets:
// alpha = (K + reg·I)⁻¹ (y − mean(y)). Throws FitError when gamma <= 0,
// reg < 0, or the system is singular.
RegressionModel fit_kernel_rbf(const Matrix& x, const Vector& y, double gamma, double reg);

struct HyperParams {
  ModelKind kind = ModelKind::Linear;
  double ridge = 0.0;  // linear
  double gamma = 1.0;  // kernel
  double reg = 1.0;    // kernel
  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

// Linear: ridge ∈ {0, 1e-3, 1e-2, 1e-1, 1}.
// Kernel: gamma ∈ {0.01, 0.1, 1, 10} × reg ∈ {1e-3, 1e-2, 1e-1, 1}.
std::vector<HyperParams> default_grid(ModelKind kind);

RegressionModel fit_with(const Matrix& x, const Vector& y, const HyperParams& params);

struct CvResult {
  HyperParams best;
  double best_error = 0.0;
  std::vector<double> errors;  // mean validation squared error per grid point
};

// Row i goes to fold i mod folds. The grid point with the lowest mean
// per-fold squared error wins; ties keep the earlier point. Throws FitError
// when folds < 2 or there are fewer rows than folds.
CvResult cross_validate(const Matrix& x, const Vector& y, std::size_t folds,
                        const std::vector<HyperParams>& grid);

struct TrainingOptions {
  ModelKind kind = ModelKind::KernelRbf;
  std::size_t folds = 5;
  std::vector<HyperParams> grid;  // empty: default_grid(kind)
  std::size_t max_rows = 1000;    // kernel fits subsample evenly beyond this
};

// Scale, cross-validate, then fit on all rows. The scaler is stored in the
// model. With fewer rows than folds the first grid point is used.
RegressionModel fit_pipeline(const Matrix& x, const Vector& y, const TrainingOptions& options);

}  // namespace priorart
