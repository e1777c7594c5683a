#include <cmath>

#include "symcap/capopt.hpp"

namespace symcap {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;
constexpr double kRoundingSlack = 1e-13;
constexpr double kProjectionTol = 1e-10;
constexpr int kProjectionRounds = 50;

}  // namespace

CovarianceMatrix project_to_reduced_set(const SymmetryGroup& g, const ComplexMatrix& x) {
  if (x.rows() != g.dim() || x.cols() != g.dim()) {
    throw DimensionError("project_to_reduced_set: dimension mismatch");
  }
  ComplexMatrix y = hermitian_part(x);
  CovarianceMatrix q = project_to_covariance(average(g, y));
  // For a group average the first round is already exact; the loop guards rounding drift.
  for (int round = 1; round < kProjectionRounds; ++round) {
    if (fixed_point_residual(g, q.matrix()) <= kProjectionTol) break;
    q = project_to_covariance(average(g, q.matrix()));
  }
  return q;
}

CapacityResult optimize_objective(const SaaObjective& objective, const SymmetryGroup& g,
                                  const OptConfig& cfg, OptimizerTrace* trace) {
  if (objective.dim() != g.dim()) {
    throw DimensionError("optimize: group acts on " + std::to_string(g.dim()) +
                         " inputs but the channel has " + std::to_string(objective.dim()));
  }
  if (!(cfg.conv_tol > 0.0)) throw Error("optimize: conv_tol must be positive");
  const int n = g.dim();

  CapacityResult result;
  result.reduced_set = averaged_set(g);
  if (const auto* s = result.reduced_set.as<reduced::Singleton>()) {
    result.q_star = s->point;
    result.saa_value = objective.value(s->point.matrix());
    result.converged = true;
    if (trace) {
      trace->values.push_back(result.saa_value);
      trace->fixed_residuals.push_back(fixed_point_residual(g, s->point.matrix()));
    }
    return result;
  }

  CovarianceMatrix q = project_to_reduced_set(g, CovarianceMatrix::isotropic(n).matrix());
  double f = objective.value(q.matrix());
  auto record = [&] {
    if (!trace) return;
    trace->values.push_back(f);
    trace->fixed_residuals.push_back(fixed_point_residual(g, q.matrix()));
  };
  record();

  double last_step = 1.0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const ComplexMatrix grad = objective.gradient(q.matrix());
    CovarianceMatrix candidate = project_to_reduced_set(g, q.matrix() + grad);
    result.gradient_norm = (candidate.matrix() - q.matrix()).norm();
    result.iterations = it;
    if (result.gradient_norm <= cfg.conv_tol) {
      result.converged = true;
      break;
    }
    // Backtracking restarts from twice the last accepted step, so near the optimum the trial step
    // stays close to 1/L instead of overshooting from 1 every time.
    double step = cfg.step_rule == StepRule::kFixed ? cfg.fixed_step : std::min(1.0, 2.0 * last_step);
    if (step != 1.0) candidate = project_to_reduced_set(g, q.matrix() + step * grad);
    double f_new = objective.value(candidate.matrix());
    if (cfg.step_rule == StepRule::kBacktracking) {
      // Once the predicted ascent drops below the rounding error of g, value comparisons carry no
      // information; the step must then shrink the gradient mapping instead.
      const double slack = kRoundingSlack * (1.0 + std::abs(f));
      auto sufficient = [&] {
        const double predicted = trace_inner(grad, candidate.matrix() - q.matrix());
        if (predicted > slack) return f_new >= f + kArmijo * predicted;
        if (f_new < f - slack) return false;
        const ComplexMatrix& c = candidate.matrix();
        return (project_to_reduced_set(g, c + objective.gradient(c)).matrix() - c).norm() < result.gradient_norm;
      };
      while (!sufficient()) {
        step *= 0.5;
        if (step < kMinStep) break;
        candidate = project_to_reduced_set(g, q.matrix() + step * grad);
        f_new = objective.value(candidate.matrix());
      }
      if (step < kMinStep) {
        result.iterations = it + 1;
        break;  // no ascent at machine precision
      }
    }
    last_step = step;
    q = candidate;
    f = f_new;
    result.iterations = it + 1;
    record();
  }
  result.q_star = q;
  result.saa_value = f;
  return result;
}

CapacityResult optimize_capacity(const ChannelModel& model, const SymmetryGroup& g,
                                 const OptConfig& cfg, OptimizerTrace* trace) {
  if (g.dim() != model.n()) {
    throw DimensionError("optimize_capacity: group acts on " + std::to_string(g.dim()) +
                         " inputs but the channel has " + std::to_string(model.n()));
  }
  if (cfg.n_saa_samples < 100) throw Error("optimize_capacity: n_saa_samples must be >= 100");
  const RandomStream root(cfg.seed);
  RandomStream saa_rng = root.split(1);
  RandomStream eval_rng = root.split(2);
  const SaaObjective objective = SaaObjective::for_model(model, cfg.n_saa_samples, saa_rng);
  CapacityResult result = optimize_objective(objective, g, cfg, trace);
  result.capacity = estimate_mi(model, result.q_star, cfg.n_eval_samples, eval_rng);
  result.capacity.seed = cfg.seed;
  return result;
}

std::pair<double, double> capacity_closed_form_alpha(double alpha) {
  if (!(alpha >= 1.0 / std::sqrt(2.0) - 1e-15)) throw Error("alpha must be at least 1/sqrt(2)");
  const double a2 = alpha * alpha;
  return {2.0 * std::log((1.0 + 2.0 * a2) / (2.0 * alpha)), std::min(1.0, 1.0 / (2.0 * a2))};
}

std::pair<double, CovarianceMatrix> capacity_closed_form_inf() {
  RealVector d(2);
  d << 0.0, 1.0;
  return {std::log(5.0), CovarianceMatrix::diagonal(d)};
}

}  // namespace symcap
