#include "conformal/online/aci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conformal::online {

AciState make_aci_state(double target_alpha, double gamma, std::size_t window_size) {
  if (!(target_alpha > 0.0) || !(target_alpha < 1.0)) {
    throw std::invalid_argument("target_alpha must lie in (0, 1)");
  }
  if (std::isnan(gamma) || gamma < 0.0) {
    throw std::invalid_argument("gamma must be >= 0");
  }
  if (window_size == 0) throw std::invalid_argument("window_size must be >= 1");
  AciState state;
  state.alpha = target_alpha;
  state.target_alpha = target_alpha;
  state.initial_alpha = target_alpha;
  state.gamma = gamma;
  state.window_size = window_size;
  return state;
}

void aci_observe_score(AciState& state, double score) {
  if (!std::isfinite(score)) throw std::invalid_argument("score must be finite");
  state.window_scores.push_back(score);
  while (state.window_scores.size() > state.window_size) state.window_scores.pop_front();
}

void aci_update(AciState& state, bool err) {
  state.err_history.push_back(err ? 1 : 0);
  state.alpha += state.gamma * (state.target_alpha - (err ? 1.0 : 0.0));
}

core::PredictionInterval aci_interval(const AciState& state, std::span<const double> x,
                                      const core::Forecaster& model,
                                      const core::ScoreFunction& score) {
  const std::size_t dim = model.target_dim();
  if (state.alpha <= 0.0) return core::PredictionInterval::unbounded(dim);
  if (state.alpha >= 1.0) return core::PredictionInterval::empty_set(dim);
  if (state.window_scores.empty()) throw std::invalid_argument("empty score window");
  const std::vector<double> scores(state.window_scores.begin(),
                                   state.window_scores.end());
  const double q = core::empirical_quantile(1.0 - state.alpha, scores,
                                            /*augment_with_infinity=*/true);
  return score.invert(score.context_for(model, x), q);
}

StreamRecord aci_step(AciState& state, std::size_t t, std::span<const double> x,
                      std::span<const double> y, const core::Forecaster& model,
                      const core::ScoreFunction& score) {
  const double alpha_t = state.alpha;
  const auto interval = aci_interval(state, x, model, score);

  // Endpoint rules: the whole space never misses, the empty set always
  // does.  In between, err is the plain miss indicator.
  bool err;
  if (alpha_t <= 0.0) {
    err = false;
  } else if (alpha_t >= 1.0) {
    err = true;
  } else {
    err = !interval.contains(y);
  }

  StreamRecord rec;
  rec.t = t;
  rec.lo = interval.lo(0);
  rec.hi = interval.hi(0);
  rec.y = y[0];
  rec.err = err;
  rec.alpha = alpha_t;

  aci_update(state, err);
  aci_observe_score(state, score.evaluate(y, score.context_for(model, x)));
  return rec;
}

std::vector<StreamRecord> aci_run(AciState& state, const core::Dataset& stream,
                                  const core::Forecaster& model,
                                  const core::ScoreFunction& score) {
  if (stream.target_dim() != 1) {
    throw std::invalid_argument("stream evaluation requires a scalar target");
  }
  std::vector<StreamRecord> records;
  records.reserve(stream.size());
  for (std::size_t t = 0; t < stream.size(); ++t) {
    records.push_back(aci_step(state, t, stream.x(t), stream.y(t), model, score));
  }
  return records;
}

std::pair<double, double> aci_bound_check(const AciState& state) {
  const std::size_t T = state.err_history.size();
  if (T == 0) throw std::invalid_argument("no steps recorded");
  double sum = 0.0;
  for (auto e : state.err_history) sum += e;
  const double lhs = std::abs(sum / static_cast<double>(T) - state.target_alpha);
  if (state.gamma == 0.0) {
    return {lhs, std::numeric_limits<double>::infinity()};
  }
  const double numer =
      std::max(state.initial_alpha, 1.0 - state.initial_alpha) + state.gamma;
  const double rhs = numer / (state.gamma * static_cast<double>(T));
  return {lhs, rhs};
}

}  // namespace conformal::online
