#pragma once

// Averaged (mean-variable) dynamics of the reference-ellipse center:
// closed-form order-6 theory, order-8 averaged Hamiltonian with its
// Lindstedt-Poincare solution, and numerically averaged dynamics.

#include <cstddef>
#include <utility>
#include <vector>

#include "hilldro/hill.hpp"
#include "hilldro/reduction.hpp"

namespace hilldro {

// Mean (prime) reduced variables. Phi is a formal integral of the
// averaged flow.
struct SecularState {
  double phi = 0.0;
  double q = 0.0;
  double Phi = 0.0;
  double Q = 0.0;
};

// Reinterprets osculating elements as mean elements (no correction).
SecularState as_mean(const ReducedState& r);
ReducedState as_reduced(const SecularState& s);

struct SecularCoefficients {
  double B = 0.0;           // sqrt(2 Phi / omega)
  double Omega = 0.0;       // libration frequency
  double ratio = 0.0;       // Omega^2 / omega^2
  double Ktilde = 0.0;
  double Etilde = 0.0;
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
  double e1 = 0.0, e2 = 0.0;
};

SecularCoefficients secular_coefficients(double Phi, const ModelParams& p);

double libration_frequency(double Phi, const ModelParams& p);

// e1 = 4/9 (4E~ - K~)/(K~ - E~), e2 = 1/24 (11K~ - 14E~)/(K~ - E~)
double lindstedt_e1();
double lindstedt_e2();

double hamiltonian6(double q, double Q, double Phi, const ModelParams& p);
double hamiltonian8(double q, double Q, double Phi, const ModelParams& p);

// Frequency correction of the phase: phi' advances at omega (1 + delta).
double orbit_frequency_correction(const SecularState& s0, const ModelParams& p);

SecularState solution6(const SecularState& s0, double t, const ModelParams& p);

struct Periods {
  double T = 0.0;       // orbit period 2 pi / (omega (1 + delta))
  double T_star = 0.0;  // libration period 2 pi / Omega
};

Periods periods6(const SecularState& s0, const ModelParams& p);

// First-order Lindstedt-Poincare solution of the order-8 reduced system.
class LindstedtSolution {
 public:
  LindstedtSolution(const SecularState& s0, const ModelParams& p);

  double n1() const { return n1_; }
  double Omega() const { return k_.Omega; }
  // 2 pi / ((1 + n1) Omega)
  double libration_period() const;
  const SecularCoefficients& coefficients() const { return k_; }

  // (q, Q) at time t.
  std::pair<double, double> center(double t) const;
  // Full state; phi integrates d(phi)/dt = dK8/dPhi along (q, Q).
  SecularState state(double t) const;
  std::vector<SecularState> states(const std::vector<double>& times) const;

 private:
  double phase_rate(double t) const;
  double phase_increment(double t0, double t1) const;

  ModelParams p_;
  SecularState s0_;
  SecularCoefficients k_;
  double p_star_ = 0.0;
  double n1_ = 0.0;
};

SecularState lindstedt_solution(const SecularState& s0, double t,
                                const ModelParams& p);

enum class AveragingMode { closed6, series8, quadrature };

struct SecularSolutionConfig {
  AveragingMode mode = AveragingMode::closed6;
  // Short-period correction order applied by callers: 0 or 4..9.
  int correction_order = 0;
  // Initial trapezoid node count; doubled until the average settles.
  std::size_t nodes = 256;
  double quadrature_tol = 1e-12;

  void validate() const;
};

// Mean Hamiltonian of the selected mode. The quadrature mode is the exact
// phase average of K0 + K1 plus the second-order constant of b1.
double averaged_hamiltonian(double q, double Q, double Phi,
                            const ModelParams& p,
                            const SecularSolutionConfig& cfg);

struct SecularRates {
  double dq = 0.0;
  double dQ = 0.0;
  double dphi = 0.0;
};

SecularRates secular_rhs(double q, double Q, double Phi, const ModelParams& p,
                         const SecularSolutionConfig& cfg);

struct SecularTrajectory {
  std::vector<double> t;
  std::vector<SecularState> states;
  std::size_t steps = 0;
};

SecularTrajectory secular_propagate(const SecularState& s0,
                                    const std::vector<double>& times,
                                    const SecularSolutionConfig& cfg,
                                    const ModelParams& p,
                                    const IntegratorConfig& integ = {});

// First return of (q, Q) to the initial point, from the averaged flow.
double secular_libration_period(const SecularState& s0,
                                const SecularSolutionConfig& cfg,
                                const ModelParams& p,
                                const IntegratorConfig& integ = {});

struct ContourGrid {
  std::vector<double> q;
  std::vector<double> Q;
  // energies[i * Q.size() + j] = hamiltonian8(q[i], Q[j], Phi)
  std::vector<double> energies;

  double at(std::size_t i, std::size_t j) const {
    return energies[i * Q.size() + j];
  }
};

ContourGrid contour_grid(double Phi, std::pair<double, double> q_range,
                         std::pair<double, double> Q_range,
                         std::size_t nq, std::size_t nQ, const ModelParams& p);

}  // namespace hilldro
