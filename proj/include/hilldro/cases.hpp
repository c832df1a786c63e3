#pragma once

// Reference initial conditions (mu = omega = 1) and their tabulated
// periods, used by the CLI and the acceptance checks.

#include <array>
#include <string_view>

#include "hilldro/hill.hpp"

namespace hilldro {

struct TestCase {
  int id;
  std::string_view label;
  CartesianState ic;
  double T;       // orbital period
  double T_star;  // libration period
  double Phi;
};

inline constexpr std::array<TestCase, 3> kTestCases{{
    {1, "periodic", {0.0, 0.1, 20.0, -10.0, -0.1}, 6.27888, 362.215, 50.005},
    {2, "small amplitude libration", {0.0, 0.1, 20.0, -10.5, -0.1}, 6.27815,
     335.394, 45.130},
    {3, "large amplitude libration", {0.0, 0.0, 10.0, -0.5, -0.1}, 6.27611,
     335.477, 45.145},
}};

// Refined case 3: a slightly unstable true periodic orbit.
inline constexpr CartesianState kCase3Periodic{
    0.0, 0.0009558942643146, 10.09070684586246, -0.5908147794362844,
    -0.1003142256682326};
inline constexpr double kCase3PeriodicT = 232.2079125513217;

// Quasi-satellite example for the linear solution, shown up to t = 126.
inline constexpr CartesianState kLinearExample{0.0, 0.0, 20.0, 0.5, -0.1};

}  // namespace hilldro
