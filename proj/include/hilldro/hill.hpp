#pragma once

// Planar Hill problem in the rotating frame: Hamiltonian, equations of
// motion, variational equations and adaptive propagation.

#include <Eigen/Dense>
#include <limits>
#include <span>
#include <vector>

namespace hilldro {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

struct ModelParams {
  double mu = 1.0;
  double omega = 1.0;
  // Distance below which the Keplerian term is refused.
  double r_floor = 1e-9;

  void validate() const;
  // (mu / (3 omega^2))^(1/3)
  double hill_radius() const;
};

struct CartesianState {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double X = 0.0;
  double Y = 0.0;

  Vec4 vec() const { return {x, y, X, Y}; }
  static CartesianState from_vec(const Vec4& v, double t = 0.0) {
    return {t, v[0], v[1], v[2], v[3]};
  }
};

struct IntegratorConfig {
  double rtol = 1e-12;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  bool dense = true;

  void validate() const;
};

struct TrajectorySample {
  CartesianState state;
  double energy = 0.0;
  double r = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::size_t steps = 0;  // accepted integrator steps

  double min_distance() const;
  double max_relative_energy_drift() const;
};

// ||(x, y)||, throws SingularityError below the floor.
double distance_checked(const CartesianState& s, const ModelParams& p);

Vec4 eom(const CartesianState& s, const ModelParams& p);
double hamiltonian(const CartesianState& s, const ModelParams& p);
// Gradient of the Hamiltonian with respect to (x, y, X, Y).
Vec4 hamiltonian_gradient(const CartesianState& s, const ModelParams& p);
// Jacobian of eom with respect to (x, y, X, Y).
Mat4 jacobian(const CartesianState& s, const ModelParams& p);
Mat4 variational_eom(const CartesianState& s, const Mat4& stm,
                     const ModelParams& p);

// Canonical 2-form matrix for the ordering (x, y, X, Y).
Mat4 symplectic_form();

// Samples at every accepted step (dense = false) or on a uniform grid of
// `samples` points including both ends (dense = true, samples >= 2).
Trajectory propagate(const CartesianState& s0, double t_end,
                     const IntegratorConfig& cfg, const ModelParams& p,
                     std::size_t samples = 0);

// Dense-output samples at the requested epochs (monotone, same direction
// as the propagation from s0.t).
Trajectory propagate_to(const CartesianState& s0, std::span<const double> times,
                        const IntegratorConfig& cfg, const ModelParams& p);

// Final state only.
CartesianState flow(const CartesianState& s0, double t_end,
                    const IntegratorConfig& cfg, const ModelParams& p);

struct FlowWithStm {
  CartesianState state;
  Mat4 stm;
  std::size_t steps = 0;
};

FlowWithStm flow_with_stm(const CartesianState& s0, double t_end,
                          const IntegratorConfig& cfg, const ModelParams& p);

}  // namespace hilldro
