#include "conformal/lab/forecasters.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace conformal::lab {

namespace {

Eigen::MatrixXd design_matrix(const core::Dataset& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto d = static_cast<Eigen::Index>(data.feature_dim());
  Eigen::MatrixXd X(n, d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto xi = data.x(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = xi[static_cast<std::size_t>(j)];
    X(i, d) = 1.0;
  }
  return X;
}

Eigen::MatrixXd target_matrix(const core::Dataset& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto m = static_cast<Eigen::Index>(data.target_dim());
  Eigen::MatrixXd Y(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto yi = data.y(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < m; ++j) Y(i, j) = yi[static_cast<std::size_t>(j)];
  }
  return Y;
}

// Least-squares weights, (d+1) x m.  Falls back to ridge when the
// design is rank deficient; reports whether it did.
Eigen::MatrixXd solve_least_squares(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                    double ridge, bool* used_fallback) {
  *used_fallback = false;
  if (ridge > 0.0) {
    *used_fallback = true;
    Eigen::MatrixXd gram = X.transpose() * X;
    gram.diagonal().array() += ridge;
    return gram.ldlt().solve(X.transpose() * Y);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < X.cols()) {
    *used_fallback = true;
    const double scale = std::max((X.transpose() * X).trace() /
                                      static_cast<double>(X.cols()),
                                  1.0);
    Eigen::MatrixXd gram = X.transpose() * X;
    gram.diagonal().array() += 1e-8 * scale;
    return gram.ldlt().solve(X.transpose() * Y);
  }
  return qr.solve(Y);
}

double dot_with_intercept(std::span<const double> w, std::span<const double> x) {
  double acc = w[x.size()];  // intercept stored last
  for (std::size_t j = 0; j < x.size(); ++j) acc += w[j] * x[j];
  return acc;
}

}  // namespace

ConstantForecaster::ConstantForecaster(std::vector<double> value)
    : value_(std::move(value)) {
  if (value_.empty()) throw std::invalid_argument("constant value must be nonempty");
}

ConstantForecaster ConstantForecaster::fit(const core::Dataset& train) {
  if (train.empty()) throw std::invalid_argument("training set is empty");
  std::vector<double> mean(train.target_dim(), 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto yi = train.y(i);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += yi[j];
  }
  for (double& m : mean) m /= static_cast<double>(train.size());
  return ConstantForecaster(std::move(mean));
}

std::vector<double> ConstantForecaster::predict(std::span<const double>) const {
  return value_;
}

LinearForecaster LinearForecaster::fit(const core::Dataset& train, double ridge) {
  if (train.empty()) throw std::invalid_argument("training set is empty");
  if (ridge < 0.0) throw std::invalid_argument("ridge must be >= 0");

  const Eigen::MatrixXd X = design_matrix(train);
  const Eigen::MatrixXd Y = target_matrix(train);
  bool fallback = false;
  const Eigen::MatrixXd W = solve_least_squares(X, Y, ridge, &fallback);

  LinearForecaster model;
  model.feature_dim_ = train.feature_dim();
  model.target_dim_ = train.target_dim();
  model.ridge_fallback_ = fallback;
  model.coef_.resize(model.target_dim_ * (model.feature_dim_ + 1));
  for (std::size_t out = 0; out < model.target_dim_; ++out) {
    for (std::size_t j = 0; j <= model.feature_dim_; ++j) {
      model.coef_[out * (model.feature_dim_ + 1) + j] =
          W(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(out));
    }
  }
  return model;
}

std::vector<double> LinearForecaster::predict(std::span<const double> x) const {
  if (x.size() != feature_dim_) throw std::invalid_argument("feature dimension mismatch");
  std::vector<double> out(target_dim_);
  for (std::size_t j = 0; j < target_dim_; ++j) {
    out[j] = dot_with_intercept(coefficients(j), x);
  }
  return out;
}

std::span<const double> LinearForecaster::coefficients(std::size_t output) const {
  if (output >= target_dim_) throw std::out_of_range("output index out of range");
  return {coef_.data() + output * (feature_dim_ + 1), feature_dim_ + 1};
}

KnnForecaster::KnnForecaster(core::Dataset train, std::size_t k)
    : train_(std::move(train)), k_(k) {}

KnnForecaster KnnForecaster::fit(const core::Dataset& train, std::size_t k) {
  if (train.empty()) throw std::invalid_argument("training set is empty");
  if (k == 0 || k > train.size()) {
    throw std::invalid_argument("k must lie in [1, n_train]");
  }
  return {train, k};
}

namespace {
std::vector<std::size_t> nearest_rows(const core::Dataset& train,
                                      std::span<const double> x, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto xi = train.x(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = xi[j] - x[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  // Ties break on the row index, keeping predictions deterministic.
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = dist[i].second;
  return idx;
}
}  // namespace

std::vector<double> KnnForecaster::predict(std::span<const double> x) const {
  if (x.size() != train_.feature_dim()) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  const auto idx = nearest_rows(train_, x, k_);
  std::vector<double> out(train_.target_dim(), 0.0);
  for (std::size_t i : idx) {
    const auto yi = train_.y(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += yi[j];
  }
  for (double& v : out) v /= static_cast<double>(k_);
  return out;
}

namespace {

// Full-batch subgradient descent on the pinball loss at `level`,
// starting from `w` (the least-squares solution).  Step sizes decay as
// eta / sqrt(t).
void pinball_descent(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double level,
                     std::size_t iterations, Eigen::VectorXd& w) {
  const auto n = static_cast<double>(X.rows());
  const double y_spread = y.maxCoeff() - y.minCoeff();
  const double mean_sq_norm = X.squaredNorm() / n;
  const double eta0 = (y_spread > 0.0 ? y_spread : 1.0) / (1.0 + mean_sq_norm);
  Eigen::VectorXd grad(w.size());
  for (std::size_t t = 1; t <= iterations; ++t) {
    const Eigen::VectorXd resid = y - X * w;
    grad.setZero();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      // d/dpred pinball(y - pred): -level when under, (1-level) when over.
      const double g = resid(i) > 0.0 ? -level : (resid(i) < 0.0 ? 1.0 - level : 0.0);
      grad += g * X.row(i).transpose();
    }
    grad /= n;
    w -= (eta0 / std::sqrt(static_cast<double>(t))) * grad;
  }
}

}  // namespace

LinearQuantileForecaster LinearQuantileForecaster::fit(const core::Dataset& train,
                                                       double lower_level,
                                                       double upper_level,
                                                       std::size_t iterations) {
  if (train.empty()) throw std::invalid_argument("training set is empty");
  if (!(lower_level > 0.0) || !(lower_level < 1.0) || !(upper_level > 0.0) ||
      !(upper_level < 1.0) || lower_level >= upper_level) {
    throw std::invalid_argument("need 0 < lower_level < upper_level < 1");
  }

  const Eigen::MatrixXd X = design_matrix(train);
  const Eigen::MatrixXd Y = target_matrix(train);
  bool fallback = false;
  const Eigen::MatrixXd W0 = solve_least_squares(X, Y, 0.0, &fallback);

  LinearQuantileForecaster model;
  model.feature_dim_ = train.feature_dim();
  model.target_dim_ = train.target_dim();
  const std::size_t stride = model.feature_dim_ + 1;
  model.w_lo_.resize(model.target_dim_ * stride);
  model.w_hi_.resize(model.target_dim_ * stride);

  for (std::size_t out = 0; out < model.target_dim_; ++out) {
    const Eigen::VectorXd y = Y.col(static_cast<Eigen::Index>(out));
    Eigen::VectorXd w_lo = W0.col(static_cast<Eigen::Index>(out));
    Eigen::VectorXd w_hi = w_lo;
    pinball_descent(X, y, lower_level, iterations, w_lo);
    pinball_descent(X, y, upper_level, iterations, w_hi);
    for (std::size_t j = 0; j < stride; ++j) {
      model.w_lo_[out * stride + j] = w_lo(static_cast<Eigen::Index>(j));
      model.w_hi_[out * stride + j] = w_hi(static_cast<Eigen::Index>(j));
    }
  }
  return model;
}

std::optional<core::QuantileBand> LinearQuantileForecaster::predict_band(
    std::span<const double> x) const {
  if (x.size() != feature_dim_) throw std::invalid_argument("feature dimension mismatch");
  const std::size_t stride = feature_dim_ + 1;
  core::QuantileBand band;
  band.lo.resize(target_dim_);
  band.hi.resize(target_dim_);
  for (std::size_t j = 0; j < target_dim_; ++j) {
    const double a =
        dot_with_intercept({w_lo_.data() + j * stride, stride}, x);
    const double b =
        dot_with_intercept({w_hi_.data() + j * stride, stride}, x);
    band.lo[j] = std::min(a, b);
    band.hi[j] = std::max(a, b);
  }
  return band;
}

std::vector<double> LinearQuantileForecaster::predict(std::span<const double> x) const {
  const auto band = predict_band(x);
  std::vector<double> mid(target_dim_);
  for (std::size_t j = 0; j < target_dim_; ++j) mid[j] = 0.5 * (band->lo[j] + band->hi[j]);
  return mid;
}

KnnScaleEstimator::KnnScaleEstimator(std::shared_ptr<const core::Forecaster> model,
                                     core::Dataset train, std::size_t k, double floor)
    : model_(std::move(model)), train_(std::move(train)), k_(k), floor_(floor) {
  if (!model_) throw std::invalid_argument("model is required");
  if (train_.empty()) throw std::invalid_argument("training set is empty");
  if (k_ == 0 || k_ > train_.size()) {
    throw std::invalid_argument("k must lie in [1, n_train]");
  }
  if (!(floor_ > 0.0)) throw std::invalid_argument("floor must be > 0");
  residuals_.resize(train_.size());
  for (std::size_t i = 0; i < train_.size(); ++i) {
    const auto pred = model_->predict(train_.x(i));
    const auto yi = train_.y(i);
    double r = 0.0;
    for (std::size_t j = 0; j < yi.size(); ++j) r = std::max(r, std::abs(yi[j] - pred[j]));
    residuals_[i] = r;
  }
}

double KnnScaleEstimator::scale(std::span<const double> x) const {
  const auto idx = nearest_rows(train_, x, k_);
  double acc = 0.0;
  for (std::size_t i : idx) acc += residuals_[i];
  return std::max(acc / static_cast<double>(k_), floor_);
}

online::ForecasterRecipe linear_recipe(double ridge) {
  return [ridge](const core::Dataset& train) {
    return std::make_unique<LinearForecaster>(LinearForecaster::fit(train, ridge));
  };
}

online::ForecasterRecipe knn_recipe(std::size_t k) {
  return [k](const core::Dataset& train) {
    return std::make_unique<KnnForecaster>(
        KnnForecaster::fit(train, std::min(k, train.size())));
  };
}

online::ForecasterRecipe constant_recipe() {
  return [](const core::Dataset& train) {
    return std::make_unique<ConstantForecaster>(ConstantForecaster::fit(train));
  };
}

}  // namespace conformal::lab
