#pragma once

// Uniform evaluation of the truth model and the analytical solutions on a
// time grid, in Cartesian coordinates.

#include <string>
#include <string_view>
#include <vector>

#include "hilldro/hill.hpp"
#include "hilldro/secular.hpp"

namespace hilldro {

enum class ModelKind { truth, linear, low6, lindstedt9, secular };

struct ModelSpec {
  ModelKind kind = ModelKind::truth;
  AveragingMode mode = AveragingMode::closed6;  // for ModelKind::secular
  // Short-period correction order: 0, or 4..9. When nonzero the initial
  // osculating elements are converted to mean elements first and the
  // output is corrected back.
  int corrections = 0;

  std::string name() const;
};

// "truth", "linear", "low6", "lindstedt9", "secular:<closed6|series8|quadrature>"
ModelSpec parse_model(std::string_view name);
AveragingMode parse_mode(std::string_view name);
std::string mode_name(AveragingMode mode);

std::vector<CartesianState> evaluate_model(const ModelSpec& spec,
                                           const CartesianState& ic,
                                           const std::vector<double>& times,
                                           const ModelParams& p,
                                           const IntegratorConfig& integ = {});

// Mean elements used to start the analytical solutions.
SecularState initial_mean_elements(const CartesianState& ic, int corrections,
                                   const ModelParams& p);

struct ErrorSummary {
  double max_position = 0.0;  // absolute
  double max_velocity = 0.0;
  double orbit_size = 0.0;    // semi-major axis of the initial ellipse
  double relative() const { return max_position / orbit_size; }
};

ErrorSummary compare_states(const std::vector<CartesianState>& a,
                            const std::vector<CartesianState>& b,
                            double orbit_size);

std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

}  // namespace hilldro
