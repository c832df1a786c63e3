#include "hilldro/hill.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hilldro/dop853.hpp"
#include "hilldro/errors.hpp"

namespace hilldro {

void ModelParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("ModelParams: mu must be positive");
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("ModelParams: omega must be positive");
  }
  if (!(r_floor >= 0.0)) {
    throw DomainError("ModelParams: r_floor must be non-negative");
  }
}

double ModelParams::hill_radius() const {
  return std::cbrt(mu / (3.0 * omega * omega));
}

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) {
    throw DomainError("IntegratorConfig: tolerances must be positive");
  }
  if (!(max_step > 0.0)) {
    throw DomainError("IntegratorConfig: max_step must be positive");
  }
}

double Trajectory::min_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) best = std::min(best, s.r);
  return best;
}

double Trajectory::max_relative_energy_drift() const {
  if (samples.empty()) return 0.0;
  const double h0 = samples.front().energy;
  double worst = 0.0;
  for (const auto& s : samples) {
    worst = std::max(worst, std::abs(s.energy - h0));
  }
  return h0 == 0.0 ? worst : worst / std::abs(h0);
}

double distance_checked(const CartesianState& s, const ModelParams& p) {
  const double r = std::hypot(s.x, s.y);
  if (!(r > p.r_floor)) {
    throw SingularityError("Hill model: distance to origin " +
                           std::to_string(r) + " below floor at t = " +
                           std::to_string(s.t));
  }
  return r;
}

Vec4 eom(const CartesianState& s, const ModelParams& p) {
  const double r = distance_checked(s, p);
  const double w = p.omega;
  const double k = p.mu / (r * r * r);
  return {s.X + w * s.y, s.Y - w * s.x, -k * s.x + 2.0 * w * w * s.x + w * s.Y,
          -k * s.y - w * w * s.y - w * s.X};
}

double hamiltonian(const CartesianState& s, const ModelParams& p) {
  const double r = distance_checked(s, p);
  const double w = p.omega;
  const double u = s.X + w * s.y;
  const double v = s.Y - w * s.x;
  return 0.5 * u * u + 0.5 * v * v - 1.5 * w * w * s.x * s.x - p.mu / r;
}

Vec4 hamiltonian_gradient(const CartesianState& s, const ModelParams& p) {
  const double r = distance_checked(s, p);
  const double w = p.omega;
  const double k = p.mu / (r * r * r);
  const double u = s.X + w * s.y;
  const double v = s.Y - w * s.x;
  return {-w * v - 3.0 * w * w * s.x + k * s.x, w * u + k * s.y, u, v};
}

Mat4 jacobian(const CartesianState& s, const ModelParams& p) {
  const double r = distance_checked(s, p);
  const double w = p.omega;
  const double r2 = r * r;
  const double k3 = p.mu / (r2 * r);
  const double k5 = 3.0 * p.mu / (r2 * r2 * r);
  const double uxx = -k3 + k5 * s.x * s.x + 2.0 * w * w;
  const double uxy = k5 * s.x * s.y;
  const double uyy = -k3 + k5 * s.y * s.y - w * w;
  Mat4 j;
  j << 0.0, w, 1.0, 0.0,
       -w, 0.0, 0.0, 1.0,
       uxx, uxy, 0.0, w,
       uxy, uyy, -w, 0.0;
  return j;
}

Mat4 variational_eom(const CartesianState& s, const Mat4& stm,
                     const ModelParams& p) {
  return jacobian(s, p) * stm;
}

Mat4 symplectic_form() {
  Mat4 j = Mat4::Zero();
  j.topRightCorner<2, 2>() = Eigen::Matrix2d::Identity();
  j.bottomLeftCorner<2, 2>() = -Eigen::Matrix2d::Identity();
  return j;
}

namespace {

using Solver4 = Dop853<4>;
using Solver20 = Dop853<20>;

Dop853Options to_options(const IntegratorConfig& cfg) {
  cfg.validate();
  Dop853Options o;
  o.rtol = cfg.rtol;
  o.atol = cfg.atol;
  o.max_step = cfg.max_step;
  return o;
}

Solver4::State pack(const CartesianState& s) { return {s.x, s.y, s.X, s.Y}; }

CartesianState unpack(const Solver4::State& y, double t) {
  return {t, y[0], y[1], y[2], y[3]};
}

struct HillRhs {
  const ModelParams& p;
  void operator()(double t, const Solver4::State& y, Solver4::State& dy) const {
    const Vec4 d = eom(unpack(y, t), p);
    for (int i = 0; i < 4; ++i) dy[i] = d[i];
  }
};

TrajectorySample make_sample(const CartesianState& s, const ModelParams& p) {
  return {s, hamiltonian(s, p), std::hypot(s.x, s.y)};
}

}  // namespace

Trajectory propagate(const CartesianState& s0, double t_end,
                     const IntegratorConfig& cfg, const ModelParams& p,
                     std::size_t samples) {
  p.validate();
  if (cfg.dense && samples >= 2) {
    std::vector<double> grid(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      grid[i] = s0.t + (t_end - s0.t) * static_cast<double>(i) /
                           static_cast<double>(samples - 1);
    }
    grid.back() = t_end;
    return propagate_to(s0, grid, cfg, p);
  }
  Trajectory traj;
  traj.samples.push_back(make_sample(s0, p));
  const Solver4 solver(to_options(cfg));
  const auto stats = solver.integrate(
      HillRhs{p}, s0.t, pack(s0), t_end, [&](const Solver4::Step& step) {
        traj.samples.push_back(make_sample(unpack(step.y1, step.t1), p));
      });
  traj.steps = stats.accepted;
  return traj;
}

Trajectory propagate_to(const CartesianState& s0, std::span<const double> times,
                        const IntegratorConfig& cfg, const ModelParams& p) {
  p.validate();
  Trajectory traj;
  if (times.empty()) return traj;
  const double t_end = times.back();
  const double dir = t_end >= s0.t ? 1.0 : -1.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if ((times[i] - times[i - 1]) * dir < 0.0) {
      throw DomainError("propagate_to: output epochs must be monotone");
    }
  }
  std::size_t next = 0;
  while (next < times.size() && times[next] == s0.t) {
    traj.samples.push_back(make_sample(s0, p));
    ++next;
  }
  if (next < times.size() && (times[next] - s0.t) * dir < 0.0) {
    throw DomainError("propagate_to: output epoch precedes the initial epoch");
  }
  const Solver4 solver(to_options(cfg));
  const auto stats = solver.integrate(
      HillRhs{p}, s0.t, pack(s0), t_end, [&](const Solver4::Step& step) {
        while (next < times.size() && (times[next] - step.t1) * dir <= 0.0) {
          const double t = times[next];
          const auto y = t == step.t1 ? step.y1 : step.eval(t);
          traj.samples.push_back(make_sample(unpack(y, t), p));
          ++next;
        }
      });
  traj.steps = stats.accepted;
  return traj;
}

CartesianState flow(const CartesianState& s0, double t_end,
                    const IntegratorConfig& cfg, const ModelParams& p) {
  p.validate();
  CartesianState out = s0;
  const Solver4 solver(to_options(cfg));
  solver.integrate(HillRhs{p}, s0.t, pack(s0), t_end,
                   [&](const Solver4::Step& step) {
                     out = unpack(step.y1, step.t1);
                   });
  return out;
}

FlowWithStm flow_with_stm(const CartesianState& s0, double t_end,
                          const IntegratorConfig& cfg, const ModelParams& p) {
  p.validate();
  Solver20::State y{};
  y[0] = s0.x;
  y[1] = s0.y;
  y[2] = s0.X;
  y[3] = s0.Y;
  // Column-major 4x4 identity in slots 4..19.
  for (int i = 0; i < 4; ++i) y[4 + 5 * i] = 1.0;

  auto rhs = [&](double t, const Solver20::State& z, Solver20::State& dz) {
    const CartesianState s{t, z[0], z[1], z[2], z[3]};
    const Vec4 d = eom(s, p);
    const Mat4 j = jacobian(s, p);
    const Eigen::Map<const Mat4> stm(z.data() + 4);
    Eigen::Map<Mat4> dstm(dz.data() + 4);
    dstm.noalias() = j * stm;
    for (int i = 0; i < 4; ++i) dz[i] = d[i];
  };

  FlowWithStm out{s0, Mat4::Identity(), 0};
  const Solver20 solver(to_options(cfg));
  const auto stats = solver.integrate(
      rhs, s0.t, y, t_end, [&](const Solver20::Step& step) {
        const auto& z = step.y1;
        out.state = {step.t1, z[0], z[1], z[2], z[3]};
        out.stm = Eigen::Map<const Mat4>(z.data() + 4);
      });
  out.steps = stats.accepted;
  return out;
}

}  // namespace hilldro
