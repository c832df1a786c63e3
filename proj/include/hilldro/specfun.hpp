#pragma once

// Elliptic integrals and the periodic building blocks used by the
// averaged Hamiltonians and the short-period corrections.
//
// Conventions: the parameter is m = k^2, so K(m) = F(pi/2 | m).

namespace hilldro::specfun {

// Carlson symmetric integrals.
//   R_F(x,y,z) = 1/2 \int_0^\infty [(t+x)(t+y)(t+z)]^{-1/2} dt
//   R_D(x,y,z) = 3/2 \int_0^\infty (t+x)^{-1/2}(t+y)^{-1/2}(t+z)^{-3/2} dt
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);

double complete_K(double m);
double complete_E(double m);

// Incomplete integrals for any real phi, extended by
// F(phi + j*pi) = F(phi) + 2 j K and E(phi + j*pi) = E(phi) + 2 j E.
double incomplete_F(double phi, double m);
double incomplete_E(double phi, double m);

// Detrended incomplete integrals at m = 3/4:
//   tilde_F(phi) = (2/pi) K(3/4) phi - F(phi | 3/4)
//   tilde_E(phi) = (2/pi) E(3/4) phi - E(phi | 3/4)
// Both are odd and pi-periodic (hence 2 pi-periodic).
double tilde_F(double phi);
double tilde_E(double phi);

// sqrt(1 + 3 cos^2 phi), in [1, 2].
double delta(double phi);

struct EllipticConstants {
  double K;       // K(3/4)
  double E;       // E(3/4)
  double Ktilde;  // K(3/4) / pi, also the phase average of 1/delta
  double Etilde;  // E(3/4) / pi, also the phase average of 1/delta^3
};

const EllipticConstants& elliptic_constants();

}  // namespace hilldro::specfun
