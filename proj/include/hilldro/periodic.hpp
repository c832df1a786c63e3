#pragma once

// Periodicity error and differential correction of periodic orbits of the
// Hill problem.

#include <complex>
#include <functional>
#include <vector>

#include "hilldro/hill.hpp"

namespace hilldro {

// max of the relative position and velocity closure errors after time T.
double periodicity_error(const CartesianState& s0, double T,
                         const IntegratorConfig& cfg, const ModelParams& p);

enum class PhaseCondition {
  // correction orthogonal to the flow at the current iterate
  moving,
  // iterate stays on the hyperplane through the seed normal to its flow
  anchored,
  // as anchored, using only the position part of the seed's flow
  anchored_position,
};

struct CorrectorConfig {
  IntegratorConfig integ{1e-13, 1e-13};
  int max_iterations = 20;
  // stop once epsilon falls below this
  double target_epsilon = 1e-12;
  // stop once the update norm falls below this
  double step_tolerance = 1e-12;
  PhaseCondition phase = PhaseCondition::anchored_position;
  // before Newton, move T to the closest return of the seed within this
  // relative window (0 disables)
  double period_window = 0.02;
  // keep the seed's Hamiltonian value
  bool fix_energy = true;
  // halve steps that increase the closure residual
  bool line_search = false;
  // cap on the state update norm per iteration
  double max_update = 0.5;

  // called after every closure evaluation
  std::function<void(const struct PeriodicOrbit&)> on_iteration;

  void validate() const;
};

struct PeriodicOrbit {
  CartesianState initial;
  double period = 0.0;
  double epsilon = 0.0;
  double trace = 0.0;  // of the monodromy matrix
  int iterations = 0;
  std::vector<double> update_norms;
  std::vector<double> epsilons;  // epsilon after each iteration

  // |trace - 2| > 2: the nontrivial pair is off the unit circle.
  bool unstable() const { return std::abs(trace - 2.0) > 2.0; }
  double nontrivial_trace() const { return trace - 2.0; }
};

PeriodicOrbit differential_correct(const CartesianState& seed, double T,
                                   const CorrectorConfig& cfg,
                                   const ModelParams& p);

struct Monodromy {
  Mat4 matrix;
  double trace = 0.0;
  double determinant = 0.0;
  std::vector<std::complex<double>> eigenvalues;
  // trace of the block left after removing the unit pair
  double nontrivial_trace() const { return trace - 2.0; }
};

Monodromy monodromy(const CartesianState& s0, double T,
                    const IntegratorConfig& cfg, const ModelParams& p);

}  // namespace hilldro
