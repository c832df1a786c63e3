#include "hilldro/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hilldro/errors.hpp"

namespace hilldro::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

void require_parameter(double m, const char* what) {
  require_finite(m, what);
  if (m >= 1.0) {
    throw DomainError(std::string(what) + ": parameter m must be < 1, got " +
                      std::to_string(m));
  }
}

// Splits phi = j*pi + r with |r| <= pi/2.
struct Reduced {
  double r;
  double j;
};

Reduced reduce_by_pi(double phi) {
  const double r = std::remainder(phi, std::numbers::pi);
  const double j = std::round((phi - r) / std::numbers::pi);
  return {r, j};
}

// F(r | m) for |r| <= pi/2.
double principal_F(double r, double m) {
  const double s = std::sin(r);
  const double c = std::cos(r);
  return s * carlson_rf(c * c, 1.0 - m * s * s, 1.0);
}

double principal_E(double r, double m) {
  const double s = std::sin(r);
  const double c = std::cos(r);
  const double c2 = c * c;
  const double d2 = 1.0 - m * s * s;
  return s * carlson_rf(c2, d2, 1.0) -
         m / 3.0 * s * s * s * carlson_rd(c2, d2, 1.0);
}

}  // namespace

double carlson_rf(double x, double y, double z) {
  require_finite(x, "carlson_rf");
  require_finite(y, "carlson_rf");
  require_finite(z, "carlson_rf");
  if (x < 0 || y < 0 || z < 0) {
    throw DomainError("carlson_rf: arguments must be non-negative");
  }
  if (x + y == 0 || y + z == 0 || z + x == 0) {
    throw DomainError("carlson_rf: at most one argument may vanish");
  }
  double a = (x + y + z) / 3.0;
  double bound = std::pow(3.0 * kEps, -1.0 / 6.0) *
                 std::max({std::abs(a - x), std::abs(a - y), std::abs(a - z)});
  while (bound >= std::abs(a)) {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    a = 0.25 * (a + lambda);
    bound *= 0.25;
  }
  const double dx = (a - x) / a;
  const double dy = (a - y) / a;
  const double dz = -dx - dy;
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 -
          3.0 * e2 * e3 / 44.0) /
         std::sqrt(a);
}

double carlson_rd(double x, double y, double z) {
  require_finite(x, "carlson_rd");
  require_finite(y, "carlson_rd");
  require_finite(z, "carlson_rd");
  if (x < 0 || y < 0 || z <= 0 || x + y == 0) {
    throw DomainError(
        "carlson_rd: need x, y >= 0 with x + y > 0 and z > 0");
  }
  double a = (x + y + 3.0 * z) / 5.0;
  double bound = std::pow(0.25 * kEps, -1.0 / 6.0) *
                 std::max({std::abs(a - x), std::abs(a - y), std::abs(a - z)});
  double tail = 0.0;
  double scale = 1.0;
  while (bound >= std::abs(a)) {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    tail += scale / (sz * (z + lambda));
    scale *= 0.25;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    a = 0.25 * (a + lambda);
    bound *= 0.25;
  }
  const double dx = (a - x) / a;
  const double dy = (a - y) / a;
  const double dz = -(dx + dy) / 3.0;
  const double xy = dx * dy;
  const double z2 = dz * dz;
  const double e2 = xy - 6.0 * z2;
  const double e3 = (3.0 * xy - 8.0 * z2) * dz;
  const double e4 = 3.0 * (xy - z2) * z2;
  const double e5 = xy * z2 * dz;
  const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 +
                        9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 -
                        9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
  return scale * series / (a * std::sqrt(a)) + 3.0 * tail;
}

double complete_K(double m) {
  require_parameter(m, "complete_K");
  return carlson_rf(0.0, 1.0 - m, 1.0);
}

double complete_E(double m) {
  require_finite(m, "complete_E");
  if (m > 1.0) {
    throw DomainError("complete_E: parameter m must be <= 1");
  }
  if (m == 1.0) return 1.0;
  const double y = 1.0 - m;
  return carlson_rf(0.0, y, 1.0) - m / 3.0 * carlson_rd(0.0, y, 1.0);
}

double incomplete_F(double phi, double m) {
  require_finite(phi, "incomplete_F");
  require_parameter(m, "incomplete_F");
  const auto [r, j] = reduce_by_pi(phi);
  const double base = principal_F(r, m);
  return j == 0.0 ? base : base + 2.0 * j * complete_K(m);
}

double incomplete_E(double phi, double m) {
  require_finite(phi, "incomplete_E");
  require_parameter(m, "incomplete_E");
  const auto [r, j] = reduce_by_pi(phi);
  const double base = principal_E(r, m);
  return j == 0.0 ? base : base + 2.0 * j * complete_E(m);
}

// The linear terms cancel the 2 j K (resp. 2 j E) jumps exactly, so both
// functions are evaluated on the reduced argument only.
double tilde_F(double phi) {
  require_finite(phi, "tilde_F");
  const auto& k = elliptic_constants();
  const double r = reduce_by_pi(phi).r;
  return 2.0 * k.Ktilde * r - principal_F(r, 0.75);
}

double tilde_E(double phi) {
  require_finite(phi, "tilde_E");
  const auto& k = elliptic_constants();
  const double r = reduce_by_pi(phi).r;
  return 2.0 * k.Etilde * r - principal_E(r, 0.75);
}

double delta(double phi) {
  const double c = std::cos(phi);
  return std::sqrt(1.0 + 3.0 * c * c);
}

const EllipticConstants& elliptic_constants() {
  static const EllipticConstants constants = [] {
    EllipticConstants k{};
    k.K = complete_K(0.75);
    k.E = complete_E(0.75);
    k.Ktilde = k.K / std::numbers::pi;
    k.Etilde = k.E / std::numbers::pi;
    return k;
  }();
  return constants;
}

}  // namespace hilldro::specfun
