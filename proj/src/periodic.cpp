#include "hilldro/periodic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "hilldro/errors.hpp"

namespace hilldro {

namespace {

double closure_error(const Vec4& z0, const Vec4& z1) {
  const double rn = z0.head<2>().norm();
  const double vn = z0.tail<2>().norm();
  if (rn == 0.0 || vn == 0.0) {
    throw DomainError(
        "periodicity_error: initial position or momentum has zero norm");
  }
  const double er = (z1.head<2>() - z0.head<2>()).norm() / rn;
  const double ev = (z1.tail<2>() - z0.tail<2>()).norm() / vn;
  return std::max(er, ev);
}

// Time in [lo, hi] at which the orbit from s passes closest to s.
double closest_return(const CartesianState& s, double lo, double hi,
                      const IntegratorConfig& cfg, const ModelParams& p) {
  constexpr int kSamples = 400;
  std::vector<double> grid(kSamples + 1);
  grid[0] = 0.0;
  for (int i = 0; i < kSamples; ++i) grid[i + 1] = lo + (hi - lo) * i / (kSamples - 1);
  const auto traj = propagate_to(s, grid, cfg, p);
  const Vec4 z0 = s.vec();
  auto dist = [&](double t) { return (flow(s, t, cfg, p).vec() - z0).norm(); };
  int best = 1;
  for (int i = 1; i <= kSamples; ++i) {
    if ((traj.samples[i].state.vec() - z0).norm() <
        (traj.samples[best].state.vec() - z0).norm()) {
      best = i;
    }
  }
  double a = grid[std::max(best - 1, 1)];
  double b = grid[std::min(best + 1, kSamples)];
  // golden section on the bracket
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = dist(c), fd = dist(d);
  for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc; c = b - g * (b - a); fc = dist(c);
    } else {
      a = c; c = d; fc = fd; d = a + g * (b - a); fd = dist(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double periodicity_error(const CartesianState& s0, double T,
                         const IntegratorConfig& cfg, const ModelParams& p) {
  closure_error(s0.vec(), s0.vec());  // norm guard before propagating
  if (T == 0.0) return 0.0;
  CartesianState start = s0;
  start.t = 0.0;
  return closure_error(s0.vec(), flow(start, T, cfg, p).vec());
}

void CorrectorConfig::validate() const {
  integ.validate();
  if (max_iterations < 1) {
    throw DomainError("CorrectorConfig: max_iterations must be >= 1");
  }
  if (!(target_epsilon > 0.0) || !(step_tolerance > 0.0) ||
      !(max_update > 0.0) || !(period_window >= 0.0 && period_window < 1.0)) {
    throw DomainError("CorrectorConfig: tolerances must be positive");
  }
}

PeriodicOrbit differential_correct(const CartesianState& seed, double T,
                                   const CorrectorConfig& cfg,
                                   const ModelParams& p) {
  cfg.validate();
  p.validate();
  if (!(T > 0.0)) throw DomainError("differential_correct: T must be positive");

  CartesianState s = seed;
  s.t = 0.0;
  const Vec4 z_seed = s.vec();
  const Vec4 f_seed = eom(s, p);
  const double h0 = hamiltonian(s, p);

  if (cfg.period_window > 0.0) {
    T = closest_return(s, T * (1.0 - cfg.period_window),
                       T * (1.0 + cfg.period_window), cfg.integ, p);
  }

  PeriodicOrbit out;
  auto residual = [&](const Vec4& z, double period) {
    const auto end = flow(CartesianState::from_vec(z, 0.0), period, cfg.integ, p);
    return (end.vec() - z).norm();
  };

  for (int it = 0;; ++it) {
    const auto fs = flow_with_stm(s, T, cfg.integ, p);
    const Vec4 z = s.vec();
    const Vec4 zT = fs.state.vec();
    const Vec4 F = zT - z;
    out.epsilon = closure_error(z, zT);
    out.trace = fs.stm.trace();
    out.epsilons.push_back(out.epsilon);
    out.iterations = it;
    out.initial = s;
    out.period = T;
    if (cfg.on_iteration) cfg.on_iteration(out);
    if (out.epsilon <= cfg.target_epsilon) break;
    if (!out.update_norms.empty() &&
        out.update_norms.back() < cfg.step_tolerance) {
      break;
    }
    if (it == cfg.max_iterations) {
      throw ConvergenceError(
          "differential_correct: no convergence after " +
          std::to_string(cfg.max_iterations) +
          " iterations (epsilon = " + std::to_string(out.epsilon) + ")");
    }

    const int rows = 4 + 1 + (cfg.fix_energy ? 1 : 0);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, 5);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    A.topLeftCorner<4, 4>() = fs.stm - Mat4::Identity();
    A.block<4, 1>(0, 4) = eom(fs.state, p);
    b.head<4>() = -F;
    if (cfg.phase == PhaseCondition::moving) {
      A.block<1, 4>(4, 0) = eom(s, p).transpose();
    } else {
      Vec4 n = f_seed;
      if (cfg.phase == PhaseCondition::anchored_position) n.tail<2>().setZero();
      A.block<1, 4>(4, 0) = n.transpose();
      b[4] = -n.dot(z - z_seed);
    }
    if (cfg.fix_energy) {
      A.block<1, 4>(5, 0) = hamiltonian_gradient(s, p).transpose();
      b[5] = h0 - hamiltonian(s, p);
    }
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    if (cod.rank() < 5) {
      throw ConvergenceError("differential_correct: singular bordered system");
    }
    Eigen::VectorXd d = cod.solve(b);
    const double dn = d.head<4>().norm();
    if (dn > cfg.max_update) d *= cfg.max_update / dn;

    // Backtrack while the closure residual grows.
    const double r0 = F.norm();
    double lambda = 1.0;
    Vec4 z_new = z + d.head<4>();
    double T_new = T + d[4];
    for (int k = 0; cfg.line_search && k < 12; ++k) {
      z_new = z + lambda * d.head<4>();
      T_new = T + lambda * d[4];
      try {
        if (residual(z_new, T_new) < r0 || r0 < 1e-9) break;
      } catch (const std::runtime_error&) {
        // integration failed (close approach): shorten the step
      }
      lambda *= 0.5;
    }
    out.update_norms.push_back(
        std::hypot((z_new - z).norm(), T_new - T));
    s = CartesianState::from_vec(z_new, 0.0);
    T = T_new;
  }
  return out;
}

Monodromy monodromy(const CartesianState& s0, double T,
                    const IntegratorConfig& cfg, const ModelParams& p) {
  CartesianState start = s0;
  start.t = 0.0;
  const auto fs = flow_with_stm(start, T, cfg, p);
  Monodromy m;
  m.matrix = fs.stm;
  m.trace = fs.stm.trace();
  m.determinant = fs.stm.determinant();
  const Eigen::EigenSolver<Mat4> es(fs.stm, false);
  for (int i = 0; i < 4; ++i) m.eigenvalues.push_back(es.eigenvalues()[i]);
  return m;
}

}  // namespace hilldro
