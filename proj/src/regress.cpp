#include "priorart/regress.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "priorart/error.hpp"

namespace priorart {

std::string_view model_kind_name(ModelKind kind) {
  return kind == ModelKind::Linear ? "linear" : "kernel-rbf";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "linear") return ModelKind::Linear;
  if (name == "kernel-rbf" || name == "kernel") return ModelKind::KernelRbf;
  throw FitError("unknown model kind '" + std::string(name) + "'");
}

// --- scaling ----------------------------------------------------------------------

MinMaxScaler MinMaxScaler::fit(const Matrix& x) {
  MinMaxScaler s;
  if (x.rows() == 0) {
    s.min = Vector::Zero(x.cols());
    s.max = Vector::Zero(x.cols());
    return s;
  }
  s.min = x.colwise().minCoeff().transpose();
  s.max = x.colwise().maxCoeff().transpose();
  return s;
}

Vector MinMaxScaler::apply(const Vector& row) const {
  Vector out(row.size());
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    double range = max[j] - min[j];
    out[j] = range > 0.0 ? (row[j] - min[j]) / range : 0.0;
  }
  return out;
}

Matrix MinMaxScaler::apply(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(i) = apply(Vector(x.row(i).transpose())).transpose();
  return out;
}

// --- models -----------------------------------------------------------------------

namespace {

void check_inputs(const Matrix& x, const Vector& y) {
  if (x.rows() != y.size()) {
    throw FitError("feature rows (" + std::to_string(x.rows()) + ") and targets (" +
                   std::to_string(y.size()) + ") differ");
  }
  if (x.rows() == 0) throw FitError("no training rows");
  if (!x.allFinite() || !y.allFinite()) throw FitError("non-finite training values");
}

double rbf(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b, double gamma) {
  return std::exp(-gamma * (a - b).squaredNorm());
}

}  // namespace

std::size_t RegressionModel::dimension() const {
  return static_cast<std::size_t>(kind == ModelKind::Linear ? weights.size() : support.cols());
}

double RegressionModel::predict(const Vector& raw) const {
  if (static_cast<std::size_t>(raw.size()) != dimension()) {
    throw FitError("input has " + std::to_string(raw.size()) + " features, model expects " +
                   std::to_string(dimension()));
  }
  Vector x = scaler ? scaler->apply(raw) : raw;
  if (kind == ModelKind::Linear) return intercept + weights.dot(x);
  double out = offset;
  for (Eigen::Index i = 0; i < support.rows(); ++i) {
    out += alpha[i] * rbf(support.row(i).transpose(), x, gamma);
  }
  return out;
}

Vector RegressionModel::predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = predict(Vector(x.row(i).transpose()));
  return out;
}

bool operator==(const RegressionModel& a, const RegressionModel& b) {
  auto same_vec = [](const Vector& u, const Vector& v) { return u.size() == v.size() && u == v; };
  auto same_mat = [](const Matrix& u, const Matrix& v) {
    return u.rows() == v.rows() && u.cols() == v.cols() && u == v;
  };
  bool scalers = a.scaler.has_value() == b.scaler.has_value() &&
                 (!a.scaler || (same_vec(a.scaler->min, b.scaler->min) && same_vec(a.scaler->max, b.scaler->max)));
  return a.kind == b.kind && scalers && a.intercept == b.intercept && same_vec(a.weights, b.weights) &&
         same_mat(a.support, b.support) && same_vec(a.alpha, b.alpha) && a.gamma == b.gamma &&
         a.offset == b.offset;
}

RegressionModel fit_linear(const Matrix& x, const Vector& y, double ridge) {
  check_inputs(x, y);
  if (!(ridge >= 0.0)) throw FitError("ridge must be >= 0");
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();

  std::vector<Eigen::Index> varying;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (x.col(j).maxCoeff() > x.col(j).minCoeff()) varying.push_back(j);
  }
  const auto k = static_cast<Eigen::Index>(varying.size());
  Matrix a(n, k + 1);
  a.col(0).setOnes();
  for (Eigen::Index c = 0; c < k; ++c) a.col(c + 1) = x.col(varying[c]);

  Vector coef;
  if (ridge > 0.0) {
    Matrix gram = a.transpose() * a;
    for (Eigen::Index c = 1; c <= k; ++c) gram(c, c) += ridge;
    Eigen::LDLT<Matrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success) throw FitError("ridge system could not be factorized");
    coef = ldlt.solve(a.transpose() * y);
  } else {
    coef = a.completeOrthogonalDecomposition().solve(y);
  }
  if (!coef.allFinite()) throw FitError("linear fit produced non-finite coefficients");

  RegressionModel m;
  m.kind = ModelKind::Linear;
  m.intercept = coef[0];
  m.weights = Vector::Zero(d);
  for (Eigen::Index c = 0; c < k; ++c) m.weights[varying[c]] = coef[c + 1];
  return m;
}

RegressionModel fit_kernel_rbf(const Matrix& x, const Vector& y, double gamma, double reg) {
  check_inputs(x, y);
  if (!(gamma > 0.0)) throw FitError("gamma must be > 0");
  if (!(reg >= 0.0)) throw FitError("kernel regularization must be >= 0");
  const Eigen::Index n = x.rows();
  const double mean = y.mean();
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0 + reg;
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = rbf(x.row(i).transpose(), x.row(j).transpose(), gamma);
    }
  }
  Vector centered = y.array() - mean;
  Vector alpha;
  if (reg > 0.0) {
    Eigen::LLT<Matrix> llt(k);
    if (llt.info() != Eigen::Success) throw FitError("kernel system is not positive definite");
    alpha = llt.solve(centered);
  } else {
    Eigen::FullPivLU<Matrix> lu(k);
    if (!lu.isInvertible()) throw FitError("kernel system is singular (duplicate rows without regularization)");
    alpha = lu.solve(centered);
  }
  if (!alpha.allFinite()) throw FitError("kernel fit produced non-finite coefficients");

  RegressionModel m;
  m.kind = ModelKind::KernelRbf;
  m.support = x;
  m.alpha = std::move(alpha);
  m.gamma = gamma;
  m.offset = mean;
  return m;
}

std::vector<HyperParams> default_grid(ModelKind kind) {
  std::vector<HyperParams> grid;
  if (kind == ModelKind::Linear) {
    for (double r : {0.0, 1e-3, 1e-2, 1e-1, 1.0}) grid.push_back({ModelKind::Linear, r, 1.0, 1.0});
  } else {
    for (double g : {0.01, 0.1, 1.0, 10.0}) {
      for (double r : {1e-3, 1e-2, 1e-1, 1.0}) grid.push_back({ModelKind::KernelRbf, 0.0, g, r});
    }
  }
  return grid;
}

RegressionModel fit_with(const Matrix& x, const Vector& y, const HyperParams& p) {
  return p.kind == ModelKind::Linear ? fit_linear(x, y, p.ridge) : fit_kernel_rbf(x, y, p.gamma, p.reg);
}

CvResult cross_validate(const Matrix& x, const Vector& y, std::size_t folds,
                        const std::vector<HyperParams>& grid) {
  check_inputs(x, y);
  if (folds < 2) throw FitError("cross-validation needs at least 2 folds");
  if (static_cast<std::size_t>(x.rows()) < folds) throw FitError("fewer rows than folds");
  if (grid.empty()) throw FitError("empty hyperparameter grid");

  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<Matrix> train_x(folds), test_x(folds);
  std::vector<Vector> train_y(folds), test_y(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (std::size_t i = 0; i < n; ++i) (i % folds == f ? test : train).push_back(static_cast<Eigen::Index>(i));
    train_x[f] = x(train, Eigen::all);
    train_y[f] = y(train);
    test_x[f] = x(test, Eigen::all);
    test_y[f] = y(test);
  }

  CvResult result;
  result.best_error = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double total = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      try {
        auto model = fit_with(train_x[f], train_y[f], grid[g]);
        total += (model.predict(test_x[f]) - test_y[f]).squaredNorm() / static_cast<double>(test_y[f].size());
      } catch (const FitError&) {
        total = std::numeric_limits<double>::infinity();
        break;
      }
    }
    double err = total / static_cast<double>(folds);
    result.errors.push_back(err);
    if (g == 0 || err < result.best_error) {
      result.best_error = err;
      result.best = grid[g];
    }
  }
  return result;
}

RegressionModel fit_pipeline(const Matrix& raw_x, const Vector& raw_y, const TrainingOptions& options) {
  check_inputs(raw_x, raw_y);
  auto grid = options.grid.empty() ? default_grid(options.kind) : options.grid;

  Matrix x = raw_x;
  Vector y = raw_y;
  const auto n = static_cast<std::size_t>(raw_x.rows());
  if (options.kind == ModelKind::KernelRbf && options.max_rows > 0 && n > options.max_rows) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < options.max_rows; ++i) {
      rows.push_back(static_cast<Eigen::Index>(i * n / options.max_rows));
    }
    x = raw_x(rows, Eigen::all);
    y = raw_y(rows);
  }

  auto scaler = MinMaxScaler::fit(x);
  Matrix scaled = scaler.apply(x);
  HyperParams chosen = grid.front();
  if (grid.size() > 1 && static_cast<std::size_t>(scaled.rows()) >= options.folds && options.folds >= 2) {
    chosen = cross_validate(scaled, y, options.folds, grid).best;
  }
  auto model = fit_with(scaled, y, chosen);
  model.scaler = std::move(scaler);
  return model;
}

// --- persistence ------------------------------------------------------------------

namespace {

nlohmann::json vec_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector json_vec(const nlohmann::json& j) {
  auto values = j.get<std::vector<double>>();
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::string RegressionModel::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = 1;
  j["kind"] = model_kind_name(kind);
  if (scaler) {
    j["scaler"] = {{"min", vec_json(scaler->min)}, {"max", vec_json(scaler->max)}};
  } else {
    j["scaler"] = nullptr;
  }
  if (kind == ModelKind::Linear) {
    j["intercept"] = intercept;
    j["weights"] = vec_json(weights);
  } else {
    j["gamma"] = gamma;
    j["offset"] = offset;
    j["alpha"] = vec_json(alpha);
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < support.rows(); ++i) rows.push_back(vec_json(support.row(i).transpose()));
    j["support"] = std::move(rows);
  }
  return j.dump();
}

RegressionModel RegressionModel::from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("format").get<int>() != 1) throw FitError("unsupported model format");
    RegressionModel m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    if (!j.at("scaler").is_null()) {
      m.scaler = MinMaxScaler{json_vec(j["scaler"].at("min")), json_vec(j["scaler"].at("max"))};
    }
    if (m.kind == ModelKind::Linear) {
      m.intercept = j.at("intercept").get<double>();
      m.weights = json_vec(j.at("weights"));
    } else {
      m.gamma = j.at("gamma").get<double>();
      m.offset = j.at("offset").get<double>();
      m.alpha = json_vec(j.at("alpha"));
      const auto& rows = j.at("support");
      const Eigen::Index cols = rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size());
      m.support.resize(static_cast<Eigen::Index>(rows.size()), cols);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto r = json_vec(rows[i]);
        if (r.size() != cols) throw FitError("ragged support vectors");
        m.support.row(static_cast<Eigen::Index>(i)) = r.transpose();
      }
      if (m.alpha.size() != m.support.rows()) throw FitError("alpha/support size mismatch");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad model file: ") + e.what());
  }
}

void RegressionModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path);
  out << to_json() << '\n';
}

RegressionModel RegressionModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace priorart
