#pragma once

// Complete reduction of the quadratic part of the Hill Hamiltonian:
// (x, y, X, Y) <-> (phi, q, Phi, Q), reference-ellipse geometry, the
// linearized solution, and the expansion of 1/rho.

#include "hilldro/hill.hpp"

namespace hilldro {

struct ReducedState {
  double phi = 0.0;  // phase on the reference ellipse
  double q = 0.0;    // ordinate of the ellipse center
  double Phi = 0.0;  // action, >= 0
  double Q = 0.0;    // conjugate of q; x_C = 2 Q / omega
  // False when Phi == 0: the ellipse degenerates and phi carries no meaning.
  bool phase_defined = true;
};

struct EllipseFrame {
  double A = 0.0;  // semi-major axis, along y
  double B = 0.0;  // semi-minor axis, A = 2 B
  double xC = 0.0;
  double yC = 0.0;
};

struct ShapeParams {
  double chi = 0.0;    // q / A
  double sigma = 0.0;  // (Q / omega) / B
};

// Integration constants of the linear solution.
struct LinearConstants {
  double Q = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double q0 = 0.0;
};

ReducedState to_reduced(const CartesianState& s, const ModelParams& p);
CartesianState from_reduced(const ReducedState& r, const ModelParams& p,
                            double t = 0.0);
LinearConstants linear_constants(const CartesianState& s, const ModelParams& p);

double semi_minor_axis(double Phi, const ModelParams& p);
EllipseFrame ellipse_frame(const ReducedState& r, const ModelParams& p);
ShapeParams shape_params(const ReducedState& r, const ModelParams& p);

// Quadratic Hamiltonian in reduced variables: omega Phi - 3/2 Q^2.
double reduced_quadratic(const ReducedState& r, const ModelParams& p);
// Keplerian term in reduced variables: -(mu / B) / rho.
double reduced_perturbation(const ReducedState& r, const ModelParams& p);

// Linearized flow from r0 at epoch t: phi = phi0 + omega t, q = q0 - 3 Q t.
ReducedState linear_reduced(const ReducedState& r0, double t,
                            const ModelParams& p);
CartesianState linear_solution(const ReducedState& r0, double t,
                               const ModelParams& p);

// sqrt(1 + 3 cos^2 phi + 4 sigma sin phi + 8 chi cos phi + 4 sigma^2 + 4 chi^2)
double rho(double phi, double chi, double sigma);
// Numerator S_n of the n-th term of 1/rho = sum S_n / delta^(2n+1), n <= 5.
double series_numerator(int n, double phi, double chi, double sigma);
// Truncation of 1/rho through S_order, order in [0, 5].
double inverse_rho_series(double phi, double chi, double sigma, int order);

}  // namespace hilldro
