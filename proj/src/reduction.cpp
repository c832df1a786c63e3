#include "hilldro/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hilldro/errors.hpp"
#include "hilldro/specfun.hpp"

namespace hilldro {

ReducedState to_reduced(const CartesianState& s, const ModelParams& p) {
  const double w = p.omega;
  const double cphi = w * s.y + s.X;         //  sqrt(2 w Phi) cos phi
  const double sphi = -(w * s.x + 2.0 * s.Y);  // sqrt(2 w Phi) sin phi
  ReducedState r;
  r.Q = s.Y + w * s.x;
  r.q = -s.y - 2.0 * s.X / w;
  r.Phi = (cphi * cphi + sphi * sphi) / (2.0 * w);
  r.phase_defined = r.Phi > 0.0;
  r.phi = r.phase_defined ? std::atan2(sphi, cphi) : 0.0;
  return r;
}

CartesianState from_reduced(const ReducedState& r, const ModelParams& p,
                            double t) {
  if (r.Phi < 0.0) {
    throw DomainError("from_reduced: Phi must be non-negative");
  }
  const double w = p.omega;
  const double amp = std::sqrt(2.0 * w * r.Phi);
  const double s = std::sin(r.phi);
  const double c = std::cos(r.phi);
  CartesianState out;
  out.t = t;
  out.x = (2.0 * r.Q + amp * s) / w;
  out.y = r.q + 2.0 * amp * c / w;
  out.X = -w * r.q - amp * c;
  out.Y = -r.Q - amp * s;
  return out;
}

LinearConstants linear_constants(const CartesianState& s, const ModelParams& p) {
  const double w = p.omega;
  return {s.Y + w * s.x, -s.x - 2.0 * s.Y / w, s.y + s.X / w,
          -s.y - 2.0 * s.X / w};
}

double semi_minor_axis(double Phi, const ModelParams& p) {
  if (Phi < 0.0) throw DomainError("semi_minor_axis: Phi must be >= 0");
  return std::sqrt(2.0 * Phi / p.omega);
}

EllipseFrame ellipse_frame(const ReducedState& r, const ModelParams& p) {
  EllipseFrame f;
  f.B = semi_minor_axis(r.Phi, p);
  f.A = 2.0 * f.B;
  f.xC = 2.0 * r.Q / p.omega;
  f.yC = r.q;
  return f;
}

ShapeParams shape_params(const ReducedState& r, const ModelParams& p) {
  const double B = semi_minor_axis(r.Phi, p);
  if (B == 0.0) {
    throw DomainError("shape_params: degenerate ellipse (Phi = 0)");
  }
  return {r.q / (2.0 * B), r.Q / (p.omega * B)};
}

double reduced_quadratic(const ReducedState& r, const ModelParams& p) {
  return p.omega * r.Phi - 1.5 * r.Q * r.Q;
}

double reduced_perturbation(const ReducedState& r, const ModelParams& p) {
  const double B = semi_minor_axis(r.Phi, p);
  const auto [chi, sigma] = shape_params(r, p);
  const double rh = rho(r.phi, chi, sigma);
  if (!(rh * B > p.r_floor)) {
    throw SingularityError("reduced_perturbation: distance below floor");
  }
  return -p.mu / (B * rh);
}

ReducedState linear_reduced(const ReducedState& r0, double t,
                            const ModelParams& p) {
  ReducedState r = r0;
  r.phi = r0.phi + p.omega * t;
  r.q = r0.q - 3.0 * r0.Q * t;
  return r;
}

CartesianState linear_solution(const ReducedState& r0, double t,
                               const ModelParams& p) {
  return from_reduced(linear_reduced(r0, t, p), p, t);
}

double rho(double phi, double chi, double sigma) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double arg = 1.0 + 3.0 * c * c + 4.0 * sigma * s + 8.0 * chi * c +
                     4.0 * sigma * sigma + 4.0 * chi * chi;
  return std::sqrt(std::max(arg, 0.0));
}

double series_numerator(int n, double phi, double chi, double sigma) {
  const double x = chi;
  const double s = sigma;
  const auto cs = [phi](int k) { return std::cos(k * phi); };
  const auto sn = [phi](int k) { return std::sin(k * phi); };
  switch (n) {
    case 0:
      return 1.0;
    case 1:
      return -4.0 * x * cs(1);
    case 2:
      return -3.5 * s * sn(1) - 1.5 * s * sn(3) + 7.0 * x * x +
             9.0 * x * x * cs(2);
    case 3:
      return 30.0 * s * x * sn(2) + 9.0 * s * x * sn(4) -
             42.0 * x * x * x * cs(1) - 22.0 * x * x * x * cs(3);
    case 4: {
      const double x2 = x * x;
      const double x4 = x2 * x2;
      const double s2 = s * s;
      return 297.0 / 4.0 * x4 - 149.0 / 4.0 * s2 +
             (125.0 * x4 - 501.0 / 8.0 * s2) * cs(2) +
             (227.0 / 4.0 * x4 - 99.0 / 4.0 * s2) * cs(4) -
             27.0 / 8.0 * s2 * cs(6) - 213.0 / 2.0 * s * x2 * sn(1) -
             627.0 / 4.0 * s * x2 * sn(3) - 153.0 / 4.0 * s * x2 * sn(5);
    }
    case 5: {
      const double x3 = x * x * x;
      const double x5 = x3 * x * x;
      const double s2 = s * s;
      return (741.0 * s2 * x - 495.0 * x5) * cs(1) +
             (561.0 * s2 * x - 755.0 / 2.0 * x5) * cs(3) +
             (207.0 * s2 * x - 303.0 / 2.0 * x5) * cs(5) +
             27.0 * s2 * x * cs(7) + 1585.0 / 2.0 * s * x3 * sn(2) +
             670.0 * s * x3 * sn(4) + 285.0 / 2.0 * s * x3 * sn(6);
    }
    default:
      throw DomainError("series_numerator: only S_0..S_5 are available, got " +
                        std::to_string(n));
  }
}

double inverse_rho_series(double phi, double chi, double sigma, int order) {
  if (order < 0 || order > 5) {
    throw DomainError("inverse_rho_series: order must be in [0, 5]");
  }
  const double d = specfun::delta(phi);
  const double d2 = d * d;
  double power = d;  // delta^(2n+1)
  double sum = 0.0;
  for (int n = 0; n <= order; ++n) {
    sum += series_numerator(n, phi, chi, sigma) / power;
    power *= d2;
  }
  return sum;
}

}  // namespace hilldro
