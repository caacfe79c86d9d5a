#include <doctest.h>

#include <cmath>
#include <random>

#include "priorart/error.hpp"
#include "priorart/regress.hpp"
#include "test_util.hpp"

using namespace priorart;

namespace {
Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix x(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) x(i, j) = u(rng);
  return x;
}
}  // namespace

TEST_CASE("fit_linear") {
  SUBCASE("y = 2x") {
    Matrix x(5, 1);
    Vector y(5);
    for (int i = 0; i < 5; ++i) {
      x(i, 0) = i;
      y(i) = 2.0 * i;
    }
    auto m = fit_linear(x, y);
    CHECK(m.weights(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(m.intercept) < 1e-9);
    CHECK((m.predict(x) - y).norm() < 1e-9);
  }
  SUBCASE("constant y") {
    auto x = random_matrix(10, 3, 1);
    Vector y = Vector::Constant(10, 4.5);
    auto m = fit_linear(x, y);
    CHECK(m.intercept == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(m.weights.norm() < 1e-9);
  }
  SUBCASE("y = 3x1 - x2 + 0.5 on 50 points") {
    auto x = random_matrix(50, 2, 2);
    Vector y = 3.0 * x.col(0) - x.col(1) + Vector::Constant(50, 0.5);
    auto m = fit_linear(x, y);
    CHECK(std::abs(m.weights(0) - 3.0) < 1e-6);
    CHECK(std::abs(m.weights(1) + 1.0) < 1e-6);
    CHECK(std::abs(m.intercept - 0.5) < 1e-6);
  }
  SUBCASE("constant column gets weight 0") {
    auto x = random_matrix(20, 2, 3);
    x.col(1).setConstant(7.0);
    Vector y = x.col(0);
    auto m = fit_linear(x, y);
    CHECK(m.weights(1) == 0.0);
  }
  SUBCASE("ridge shrinks weights") {
    auto x = random_matrix(30, 2, 4);
    Vector y = 3.0 * x.col(0);
    CHECK(fit_linear(x, y, 1.0).weights.norm() < fit_linear(x, y, 0.0).weights.norm());
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fit_linear(Matrix(0, 2), Vector(0)), FitError);
    CHECK_THROWS_AS(fit_linear(random_matrix(3, 2, 5), Vector::Zero(4)), FitError);
    Matrix bad = random_matrix(3, 1, 6);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(fit_linear(bad, Vector::Zero(3)), FitError);
  }
}

TEST_CASE("fit_kernel_rbf") {
  SUBCASE("interpolates training points as reg -> 0") {
    auto x = random_matrix(15, 2, 7);
    Vector y = x.col(0).array().sin() + x.col(1).array().square();
    auto m = fit_kernel_rbf(x, y, 1.0, 1e-8);
    CHECK((m.predict(x) - y).cwiseAbs().maxCoeff() < 1e-4);
  }
  SUBCASE("gamma -> 0 gives a near-constant fit") {
    auto x = random_matrix(20, 1, 8);
    Vector y = x.col(0);
    auto m = fit_kernel_rbf(x, y, 1e-9, 1.0);
    Vector p = m.predict(x);
    CHECK(p.maxCoeff() - p.minCoeff() < 1e-6);
    CHECK(p(0) == doctest::Approx(y.mean()).epsilon(1e-6));
  }
  SUBCASE("1-D sine: kernel beats linear on held-out points") {
    Matrix x(40, 1), xt(100, 1);
    for (int i = 0; i < 40; ++i) x(i, 0) = i / 39.0;
    for (int i = 0; i < 100; ++i) xt(i, 0) = (i + 0.5) / 100.0;
    auto f = [](const Matrix& m) { return Vector((m.col(0).array() * 6.283185307179586).sin()); };
    auto lin = fit_linear(x, f(x));
    auto ker = fit_kernel_rbf(x, f(x), 10.0, 1e-3);
    double rl = std::sqrt((lin.predict(xt) - f(xt)).squaredNorm() / 100.0);
    double rk = std::sqrt((ker.predict(xt) - f(xt)).squaredNorm() / 100.0);
    CHECK(rk < rl);
  }
  SUBCASE("errors") {
    auto x = random_matrix(5, 1, 9);
    CHECK_THROWS_AS(fit_kernel_rbf(x, Vector::Zero(5), 0.0, 1.0), FitError);
    CHECK_THROWS_AS(fit_kernel_rbf(x, Vector::Zero(5), 1.0, -1.0), FitError);
  }
}

TEST_CASE("MinMaxScaler") {
  Matrix x(3, 2);
  x << 5, 1, 10, 1, 20, 1;
  auto s = MinMaxScaler::fit(x);
  Matrix t = s.apply(x);
  CHECK(t(0, 0) == 0.0);
  CHECK(t(1, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(t(2, 0) == 1.0);
  CHECK(t.col(1).isZero());
  Vector unseen(2);
  unseen << 25, 1;
  CHECK(s.apply(unseen)(0) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("cross_validate") {
  auto x = random_matrix(30, 1, 10);
  Vector y = 2.0 * x.col(0);
  SUBCASE("single grid point") {
    std::vector<HyperParams> grid = {{ModelKind::Linear, 0.5, 1, 1}};
    CHECK(cross_validate(x, y, 5, grid).best == grid[0]);
  }
  SUBCASE("exact-fit point is selected") {
    std::vector<HyperParams> grid = {{ModelKind::Linear, 10.0, 1, 1}, {ModelKind::Linear, 0.0, 1, 1}};
    auto cv = cross_validate(x, y, 5, grid);
    CHECK(cv.best.ridge == 0.0);
    CHECK(cv.best_error < 1e-20);
    CHECK(cv.errors.size() == 2);
  }
  SUBCASE("ties keep the first point") {
    std::vector<HyperParams> grid = {{ModelKind::Linear, 0.0, 1, 1}, {ModelKind::Linear, 0.0, 2, 2}};
    CHECK(cross_validate(x, y, 5, grid).best == grid[0]);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(cross_validate(x, y, 1, default_grid(ModelKind::Linear)), FitError);
    CHECK_THROWS_AS(cross_validate(random_matrix(3, 1, 1), Vector::Zero(3), 5, default_grid(ModelKind::Linear)),
                    FitError);
  }
}

TEST_CASE("default grids") {
  CHECK(default_grid(ModelKind::Linear).size() == 5);
  CHECK(default_grid(ModelKind::KernelRbf).size() == 16);
}

TEST_CASE("fit_pipeline and persistence") {
  auto x = random_matrix(60, 3, 12);
  Vector y = (x.col(0).array() * 3.0).sin() + x.col(1).array();
  for (auto kind : {ModelKind::Linear, ModelKind::KernelRbf}) {
    TrainingOptions opt;
    opt.kind = kind;
    auto m = fit_pipeline(x, y, opt);
    CHECK(m.kind == kind);
    REQUIRE(m.scaler.has_value());
    CHECK(m.dimension() == 3);
    auto dir = testutil::temp_dir("regress_io");
    m.save((dir / "m.json").string());
    auto back = RegressionModel::load((dir / "m.json").string());
    CHECK(back == m);
    CHECK((back.predict(x) - m.predict(x)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("kernel training subsamples to max_rows") {
    TrainingOptions opt;
    opt.kind = ModelKind::KernelRbf;
    opt.max_rows = 20;
    CHECK(fit_pipeline(x, y, opt).support.rows() == 20);
  }
  SUBCASE("fewer rows than folds uses the first grid point") {
    TrainingOptions opt;
    opt.kind = ModelKind::Linear;
    CHECK_NOTHROW(fit_pipeline(x.topRows(3), y.head(3), opt));
  }
  CHECK_THROWS_AS(RegressionModel::from_json("{}"), Error);
  CHECK(parse_model_kind(model_kind_name(ModelKind::KernelRbf)) == ModelKind::KernelRbf);
}
