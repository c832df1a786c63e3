#include "hilldro/models.hpp"

#include <algorithm>
#include <cmath>

#include "hilldro/corrections.hpp"
#include "hilldro/errors.hpp"
#include "hilldro/reduction.hpp"

namespace hilldro {

std::string mode_name(AveragingMode mode) {
  switch (mode) {
    case AveragingMode::closed6: return "closed6";
    case AveragingMode::series8: return "series8";
    case AveragingMode::quadrature: return "quadrature";
  }
  return "?";
}

AveragingMode parse_mode(std::string_view name) {
  if (name == "closed6") return AveragingMode::closed6;
  if (name == "series8") return AveragingMode::series8;
  if (name == "quadrature") return AveragingMode::quadrature;
  throw DomainError("unknown averaging mode '" + std::string(name) +
                    "' (closed6, series8, quadrature)");
}

std::string ModelSpec::name() const {
  switch (kind) {
    case ModelKind::truth: return "truth";
    case ModelKind::linear: return "linear";
    case ModelKind::low6: return "low6";
    case ModelKind::lindstedt9: return "lindstedt9";
    case ModelKind::secular: return "secular:" + mode_name(mode);
  }
  return "?";
}

ModelSpec parse_model(std::string_view name) {
  ModelSpec s;
  if (name == "truth") {
    s.kind = ModelKind::truth;
  } else if (name == "linear") {
    s.kind = ModelKind::linear;
  } else if (name == "low6") {
    s.kind = ModelKind::low6;
  } else if (name == "lindstedt9") {
    s.kind = ModelKind::lindstedt9;
  } else if (name.starts_with("secular:")) {
    s.kind = ModelKind::secular;
    s.mode = parse_mode(name.substr(8));
  } else if (name == "secular") {
    s.kind = ModelKind::secular;
  } else {
    throw DomainError("unknown model '" + std::string(name) +
                      "' (truth, linear, low6, lindstedt9, secular:<mode>)");
  }
  return s;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  if (n < 2) throw DomainError("uniform_grid: need at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.back() = t1;
  return g;
}

SecularState initial_mean_elements(const CartesianState& ic, int corrections,
                                   const ModelParams& p) {
  const ReducedState osc = to_reduced(ic, p);
  return as_mean(inverse_correct(osc, corrections, p));
}

std::vector<CartesianState> evaluate_model(const ModelSpec& spec,
                                           const CartesianState& ic,
                                           const std::vector<double>& times,
                                           const ModelParams& p,
                                           const IntegratorConfig& integ) {
  p.validate();
  std::vector<CartesianState> out;
  out.reserve(times.size());

  if (spec.kind == ModelKind::truth) {
    CartesianState s0 = ic;
    s0.t = 0.0;
    for (const auto& s : propagate_to(s0, times, integ, p).samples) {
      out.push_back(s.state);
    }
    return out;
  }
  if (spec.kind == ModelKind::linear) {
    const ReducedState r0 = to_reduced(ic, p);
    for (const double t : times) out.push_back(linear_solution(r0, t, p));
    return out;
  }

  const SecularState s0 = initial_mean_elements(ic, spec.corrections, p);
  std::vector<SecularState> mean;
  switch (spec.kind) {
    case ModelKind::low6:
      for (const double t : times) mean.push_back(solution6(s0, t, p));
      break;
    case ModelKind::lindstedt9:
      mean = LindstedtSolution(s0, p).states(times);
      break;
    case ModelKind::secular: {
      SecularSolutionConfig cfg;
      cfg.mode = spec.mode;
      cfg.correction_order = spec.corrections;
      mean = secular_propagate(s0, times, cfg, p, integ).states;
      break;
    }
    default:
      throw DomainError("evaluate_model: unsupported model");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    const ReducedState osc =
        direct_correct(as_reduced(mean[i]), spec.corrections, p);
    out.push_back(from_reduced(osc, p, times[i]));
  }
  return out;
}

ErrorSummary compare_states(const std::vector<CartesianState>& a,
                            const std::vector<CartesianState>& b,
                            double orbit_size) {
  if (a.size() != b.size()) {
    throw DomainError("compare_states: grids differ in length");
  }
  ErrorSummary e;
  e.orbit_size = orbit_size;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].t - b[i].t) > 1e-9 * std::max(1.0, std::abs(a[i].t))) {
      throw DomainError("compare_states: epochs differ at index " +
                        std::to_string(i));
    }
    e.max_position = std::max(
        e.max_position, std::hypot(a[i].x - b[i].x, a[i].y - b[i].y));
    e.max_velocity = std::max(
        e.max_velocity, std::hypot(a[i].X - b[i].X, a[i].Y - b[i].Y));
  }
  return e;
}

}  // namespace hilldro
