#include "hilldro/secular.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "hilldro/dop853.hpp"
#include "hilldro/dual.hpp"
#include "hilldro/errors.hpp"
#include "hilldro/specfun.hpp"

namespace hilldro {

namespace {

using std::sqrt;
using D3 = Dual<3>;
using D1 = Dual<1>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double k_minus_e() {
  const auto& k = specfun::elliptic_constants();
  return k.Ktilde - k.Etilde;
}

void require_action(double Phi, const char* what) {
  if (!(Phi > 0.0) || !std::isfinite(Phi)) {
    throw DomainError(std::string(what) + ": Phi must be positive");
  }
}

template <class T>
struct Geometry {
  T B, chi, sigma, ratio;
};

template <class T>
Geometry<T> geometry(const T& q, const T& Q, const T& Phi,
                     const ModelParams& p) {
  const double w = p.omega;
  const T B = sqrt(Phi * (2.0 / w));
  const T chi = q / (2.0 * B);
  const T sigma = Q / (w * B);
  const T ratio = (k_minus_e() * p.mu / (w * w)) / (B * B * B);
  return {B, chi, sigma, ratio};
}

template <class T>
T ham6(const T& q, const T& Q, const T& Phi, const ModelParams& p) {
  const auto& k = specfun::elliptic_constants();
  const auto g = geometry(q, Q, Phi, p);
  const double kk = 2.0 * k.Ktilde / k_minus_e();
  return p.omega * Phi *
         (1.0 - 3.0 * g.sigma * g.sigma -
          g.ratio * (kk + (4.0 / 3.0) * g.chi * g.chi));
}

template <class T>
struct BCoefficients {
  T b1, b2, b3, b4;
};

template <class T>
BCoefficients<T> b_coefficients(const T& ratio) {
  const auto& k = specfun::elliptic_constants();
  const double ke = k_minus_e();
  const double kt = k.Ktilde;
  const double et = k.Etilde;
  BCoefficients<T> b;
  b.b1 = 1.0 - (2.0 / ke) * (kt + ((kt * kt - 0.5) / ke) * ratio) * ratio;
  b.b2 = 3.0 * (1.0 + lindstedt_e1() * ratio);
  b.b3 = (2.0 / 3.0) * ratio;
  b.b4 = ((11.0 * kt - 14.0 * et) / (9.0 * ke)) * ratio;
  (void)et;
  return b;
}

template <class T>
T ham8(const T& q, const T& Q, const T& Phi, const ModelParams& p) {
  const auto g = geometry(q, Q, Phi, p);
  const auto b = b_coefficients(g.ratio);
  const T chi2 = g.chi * g.chi;
  return p.omega * Phi *
         (b.b1 - b.b2 * g.sigma * g.sigma - 2.0 * b.b3 * chi2 -
          b.b4 * chi2 * chi2);
}

// sum_k 1/rho(phi_k) over the nodes phi_k = 2 pi (k + offset) / n.
template <class T>
T inverse_rho_sum(const T& chi, const T& sigma, std::size_t n, double offset,
                  std::size_t stride) {
  T sum(0.0);
  const T c8 = 8.0 * chi;
  const T s4 = 4.0 * sigma;
  const T base = 4.0 * (sigma * sigma + chi * chi);
  for (std::size_t k = 0; k < n; k += stride) {
    const double phi = kTwoPi * (static_cast<double>(k) + offset) /
                       static_cast<double>(n);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const T arg = base + (1.0 + 3.0 * c * c) + s4 * s + c8 * c;
    if (!(value_of(arg) > 0.0)) {
      throw SingularityError(
          "averaged Hamiltonian: rho vanishes on the reference ellipse "
          "(close-encounter configuration outside the averaging regime)");
    }
    sum += 1.0 / sqrt(arg);
  }
  return sum;
}

// Phase average of 1/rho by the periodic trapezoid rule, doubling the node
// count until consecutive estimates agree to tol.
template <class T>
T inverse_rho_average(const T& chi, const T& sigma,
                      const SecularSolutionConfig& cfg) {
  constexpr std::size_t kMaxNodes = std::size_t{1} << 20;
  std::size_t n = cfg.nodes;
  T sum = inverse_rho_sum(chi, sigma, n, 0.0, 1);
  T mean = sum / static_cast<double>(n);
  while (true) {
    // Midpoints of the current grid are the odd nodes of the doubled one.
    const T mid = inverse_rho_sum(chi, sigma, n, 0.5, 1);
    sum += mid;
    n *= 2;
    const T refined = sum / static_cast<double>(n);
    const double change = std::abs(value_of(refined) - value_of(mean));
    mean = refined;
    if (change < cfg.quadrature_tol) return mean;
    if (n >= kMaxNodes) {
      throw ConvergenceError("averaged Hamiltonian: quadrature did not settle");
    }
  }
}

template <class T>
T ham_quadrature(const T& q, const T& Q, const T& Phi, const ModelParams& p,
                 const SecularSolutionConfig& cfg) {
  const auto& k = specfun::elliptic_constants();
  const auto g = geometry(q, Q, Phi, p);
  const double ke = k_minus_e();
  // Second-order (mu^2) part of b1, absent from plain averaging.
  const T second = -2.0 * ((k.Ktilde * k.Ktilde - 0.5) / (ke * ke)) *
                   g.ratio * g.ratio;
  const T avg = inverse_rho_average(g.chi, g.sigma, cfg);
  return p.omega * Phi * (1.0 - 3.0 * g.sigma * g.sigma + second) -
         (p.mu / g.B) * avg;
}

template <class T>
T averaged(const T& q, const T& Q, const T& Phi, const ModelParams& p,
           const SecularSolutionConfig& cfg) {
  switch (cfg.mode) {
    case AveragingMode::closed6:
      return ham6(q, Q, Phi, p);
    case AveragingMode::series8:
      return ham8(q, Q, Phi, p);
    case AveragingMode::quadrature:
      return ham_quadrature(q, Q, Phi, p, cfg);
  }
  throw DomainError("averaged Hamiltonian: unknown mode");
}

}  // namespace

SecularState as_mean(const ReducedState& r) { return {r.phi, r.q, r.Phi, r.Q}; }

ReducedState as_reduced(const SecularState& s) {
  return {s.phi, s.q, s.Phi, s.Q, s.Phi > 0.0};
}

double lindstedt_e1() {
  const auto& k = specfun::elliptic_constants();
  return 4.0 / 9.0 * (4.0 * k.Etilde - k.Ktilde) / k_minus_e();
}

double lindstedt_e2() {
  const auto& k = specfun::elliptic_constants();
  return (11.0 * k.Ktilde - 14.0 * k.Etilde) / (24.0 * k_minus_e());
}

SecularCoefficients secular_coefficients(double Phi, const ModelParams& p) {
  require_action(Phi, "secular_coefficients");
  const auto& k = specfun::elliptic_constants();
  const auto g = geometry(0.0, 0.0, Phi, p);
  const auto b = b_coefficients(g.ratio);
  SecularCoefficients c;
  c.B = g.B;
  c.ratio = g.ratio;
  c.Omega = p.omega * std::sqrt(g.ratio);
  c.Ktilde = k.Ktilde;
  c.Etilde = k.Etilde;
  c.b1 = b.b1;
  c.b2 = b.b2;
  c.b3 = b.b3;
  c.b4 = b.b4;
  c.e1 = lindstedt_e1();
  c.e2 = lindstedt_e2();
  return c;
}

double libration_frequency(double Phi, const ModelParams& p) {
  require_action(Phi, "libration_frequency");
  const double B = std::sqrt(2.0 * Phi / p.omega);
  return std::sqrt(k_minus_e() * p.mu / (B * B * B));
}

double hamiltonian6(double q, double Q, double Phi, const ModelParams& p) {
  require_action(Phi, "hamiltonian6");
  return ham6(q, Q, Phi, p);
}

double hamiltonian8(double q, double Q, double Phi, const ModelParams& p) {
  require_action(Phi, "hamiltonian8");
  return ham8(q, Q, Phi, p);
}

double orbit_frequency_correction(const SecularState& s0, const ModelParams& p) {
  const auto c = secular_coefficients(s0.Phi, p);
  const double ps = 3.0 * s0.Q / c.Omega;
  return (c.Ktilde / (c.Ktilde - c.Etilde) +
          (s0.q * s0.q + ps * ps) / (4.0 * c.B * c.B)) *
         c.ratio;
}

SecularState solution6(const SecularState& s0, double t, const ModelParams& p) {
  const auto c = secular_coefficients(s0.Phi, p);
  const double W = c.Omega;
  const double w = p.omega;
  const double ps = 3.0 * s0.Q / W;
  const double delta = orbit_frequency_correction(s0, p);
  const double cw = std::cos(W * t);
  const double sw = std::sin(W * t);
  const double B2 = c.B * c.B;
  SecularState s;
  s.Phi = s0.Phi;
  s.q = s0.q * cw - ps * sw;
  s.Q = s0.Q * cw + (s0.q * W / 3.0) * sw;
  s.phi = s0.phi + w * (1.0 + delta) * t +
          (W / w) * ((s0.q * s0.q - ps * ps) / (8.0 * B2)) *
              std::sin(2.0 * W * t) +
          (W / w) * (s0.q * ps / (4.0 * B2)) * (std::cos(2.0 * W * t) - 1.0);
  return s;
}

Periods periods6(const SecularState& s0, const ModelParams& p) {
  const double delta = orbit_frequency_correction(s0, p);
  return {kTwoPi / (p.omega * (1.0 + delta)),
          kTwoPi / libration_frequency(s0.Phi, p)};
}

LindstedtSolution::LindstedtSolution(const SecularState& s0,
                                     const ModelParams& p)
    : p_(p), s0_(s0), k_(secular_coefficients(s0.Phi, p)) {
  p_star_ = 3.0 * s0.Q / k_.Omega;
  const double B2 = k_.B * k_.B;
  n1_ = 0.5 * k_.e1 * k_.ratio +
        0.375 * k_.e2 * (s0.q * s0.q + p_star_ * p_star_) / B2;
}

double LindstedtSolution::libration_period() const {
  return kTwoPi / ((1.0 + n1_) * k_.Omega);
}

std::pair<double, double> LindstedtSolution::center(double t) const {
  const double W = k_.Omega;
  const double tau = (1.0 + n1_) * t;
  const double qs = s0_.q;
  const double Qs = s0_.Q;
  const double ps = p_star_;
  const double e1r = k_.e1 * k_.ratio;
  const double e2 = k_.e2;
  const double B2 = k_.B * k_.B;
  const double c1 = std::cos(W * tau), s1 = std::sin(W * tau);
  const double c3 = std::cos(3.0 * W * tau), s3 = std::sin(3.0 * W * tau);
  const double qs2 = qs * qs, ps2 = ps * ps;

  const double q0 = qs * c1 - ps * s1;
  const double Q0 = Qs * c1 + (qs * W / 3.0) * s1;
  const double q1 =
      e2 * (qs2 - 3.0 * ps2) / (32.0 * B2) * qs * (c3 - c1) +
      (e2 * (21.0 * qs2 + 9.0 * ps2) / (32.0 * B2) - 0.5 * e1r) * ps * s1 -
      e2 * (3.0 * qs2 - ps2) / (32.0 * B2) * ps * s3;
  const double Q1 =
      3.0 * e2 * (3.0 * qs2 - ps2) / (32.0 * B2) * Qs * (c3 - c1) +
      (e2 * (11.0 * qs2 + 15.0 * ps2) / (16.0 * B2) - e1r) * qs * W / 6.0 * s1 +
      e2 * (qs2 - 3.0 * ps2) / (32.0 * B2) * qs * W * s3;
  return {q0 + q1, Q0 + Q1};
}

double LindstedtSolution::phase_rate(double t) const {
  const auto [q, Q] = center(t);
  const D1 Phi = D1::variable(s0_.Phi, 0);
  return ham8(D1(q), D1(Q), Phi, p_).d[0];
}

double LindstedtSolution::phase_increment(double t0, double t1) const {
  if (t1 == t0) return 0.0;
  const double panel = libration_period() / 64.0;
  const auto panels =
      static_cast<std::size_t>(std::ceil(std::abs(t1 - t0) / panel));
  const double h = (t1 - t0) / static_cast<double>(panels);
  double sum = 0.0;
  auto rate = [this](double t) { return phase_rate(t); };
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = t0 + h * static_cast<double>(i);
    sum += boost::math::quadrature::gauss<double, 20>::integrate(rate, a, a + h);
  }
  return sum;
}

SecularState LindstedtSolution::state(double t) const {
  const auto [q, Q] = center(t);
  return {s0_.phi + phase_increment(0.0, t), q, s0_.Phi, Q};
}

std::vector<SecularState> LindstedtSolution::states(
    const std::vector<double>& times) const {
  std::vector<SecularState> out;
  out.reserve(times.size());
  double phi = s0_.phi;
  double last = 0.0;
  for (const double t : times) {
    phi += phase_increment(last, t);
    last = t;
    const auto [q, Q] = center(t);
    out.push_back({phi, q, s0_.Phi, Q});
  }
  return out;
}

SecularState lindstedt_solution(const SecularState& s0, double t,
                                const ModelParams& p) {
  return LindstedtSolution(s0, p).state(t);
}

void SecularSolutionConfig::validate() const {
  if (!(correction_order == 0 ||
        (correction_order >= 4 && correction_order <= 9))) {
    throw DomainError("SecularSolutionConfig: correction order must be 0 or 4..9");
  }
  if (mode == AveragingMode::quadrature && nodes < 64) {
    throw DomainError("SecularSolutionConfig: quadrature needs >= 64 nodes");
  }
  if (!(quadrature_tol > 0.0)) {
    throw DomainError("SecularSolutionConfig: quadrature_tol must be positive");
  }
}

double averaged_hamiltonian(double q, double Q, double Phi,
                            const ModelParams& p,
                            const SecularSolutionConfig& cfg) {
  require_action(Phi, "averaged_hamiltonian");
  cfg.validate();
  return averaged(q, Q, Phi, p, cfg);
}

SecularRates secular_rhs(double q, double Q, double Phi, const ModelParams& p,
                         const SecularSolutionConfig& cfg) {
  require_action(Phi, "secular_rhs");
  const D3 k = averaged(D3::variable(q, 0), D3::variable(Q, 1),
                        D3::variable(Phi, 2), p, cfg);
  return {k.d[1], -k.d[0], k.d[2]};
}

namespace {

using Secular3 = Dop853<3>;

struct SecularOde {
  double Phi;
  const ModelParams& p;
  const SecularSolutionConfig& cfg;
  void operator()(double, const Secular3::State& y, Secular3::State& dy) const {
    const auto r = secular_rhs(y[0], y[1], Phi, p, cfg);
    dy = {r.dq, r.dQ, r.dphi};
  }
};

Dop853Options secular_options(const IntegratorConfig& integ) {
  integ.validate();
  Dop853Options o;
  o.rtol = integ.rtol;
  o.atol = integ.atol;
  o.max_step = integ.max_step;
  return o;
}

}  // namespace

SecularTrajectory secular_propagate(const SecularState& s0,
                                    const std::vector<double>& times,
                                    const SecularSolutionConfig& cfg,
                                    const ModelParams& p,
                                    const IntegratorConfig& integ) {
  p.validate();
  cfg.validate();
  require_action(s0.Phi, "secular_propagate");
  SecularTrajectory out;
  if (times.empty()) return out;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] < times[i - 1]) {
      throw DomainError("secular_propagate: epochs must be non-decreasing");
    }
  }
  if (times.front() < 0.0) {
    throw DomainError("secular_propagate: epochs are measured from t = 0");
  }
  std::size_t next = 0;
  auto emit = [&](double t, const Secular3::State& y) {
    out.t.push_back(t);
    out.states.push_back({y[2], y[0], s0.Phi, y[1]});
  };
  const Secular3::State y0{s0.q, s0.Q, s0.phi};
  while (next < times.size() && times[next] == 0.0) emit(times[next++], y0);
  const Secular3 solver(secular_options(integ));
  const auto stats = solver.integrate(
      SecularOde{s0.Phi, p, cfg}, 0.0, y0, times.back(),
      [&](const Secular3::Step& step) {
        while (next < times.size() && times[next] <= step.t1) {
          const double t = times[next++];
          emit(t, t == step.t1 ? step.y1 : step.eval(t));
        }
      });
  out.steps = stats.accepted;
  return out;
}

double secular_libration_period(const SecularState& s0,
                                const SecularSolutionConfig& cfg,
                                const ModelParams& p,
                                const IntegratorConfig& integ) {
  p.validate();
  cfg.validate();
  require_action(s0.Phi, "secular_libration_period");
  const SecularOde ode{s0.Phi, p, cfg};
  Secular3::State y0{s0.q, s0.Q, s0.phi};
  Secular3::State v0{};
  ode(0.0, y0, v0);
  const double speed2 = v0[0] * v0[0] + v0[1] * v0[1];
  if (!(speed2 > 0.0)) {
    throw DomainError(
        "secular_libration_period: initial point is an equilibrium");
  }
  // Signed distance to the line through the start, normal to the flow. The
  // orbit crosses it upward only when it closes.
  auto gauge = [&](const Secular3::State& y) {
    return (y[0] - y0[0]) * v0[0] + (y[1] - y0[1]) * v0[1];
  };
  const double horizon = 4.0 * kTwoPi / libration_frequency(s0.Phi, p);
  double period = -1.0;
  bool left_start = false;
  const Secular3 solver(secular_options(integ));
  solver.integrate(ode, 0.0, y0, horizon, [&](const Secular3::Step& step) {
    if (period > 0.0) return;
    const double g0 = gauge(step.y0);
    const double g1 = gauge(step.y1);
    if (g1 < 0.0) left_start = true;
    if (left_start && g0 < 0.0 && g1 >= 0.0) {
      double a = step.t0, b = step.t1;
      for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
        const double m = 0.5 * (a + b);
        (gauge(step.eval(m)) < 0.0 ? a : b) = m;
      }
      period = 0.5 * (a + b);
    }
  });
  if (period < 0.0) {
    throw ConvergenceError(
        "secular_libration_period: no return within four linear periods");
  }
  return period;
}

ContourGrid contour_grid(double Phi, std::pair<double, double> q_range,
                         std::pair<double, double> Q_range, std::size_t nq,
                         std::size_t nQ, const ModelParams& p) {
  require_action(Phi, "contour_grid");
  if (nq < 2 || nQ < 2) {
    throw DomainError("contour_grid: resolution must be >= 2 per axis");
  }
  ContourGrid g;
  g.q.resize(nq);
  g.Q.resize(nQ);
  for (std::size_t i = 0; i < nq; ++i) {
    g.q[i] = q_range.first + (q_range.second - q_range.first) *
                                 static_cast<double>(i) /
                                 static_cast<double>(nq - 1);
  }
  for (std::size_t j = 0; j < nQ; ++j) {
    g.Q[j] = Q_range.first + (Q_range.second - Q_range.first) *
                                 static_cast<double>(j) /
                                 static_cast<double>(nQ - 1);
  }
  g.energies.resize(nq * nQ);
  for (std::size_t i = 0; i < nq; ++i) {
    for (std::size_t j = 0; j < nQ; ++j) {
      g.energies[i * nQ + j] = ham8(g.q[i], g.Q[j], Phi, p);
    }
  }
  return g;
}

}  // namespace hilldro
