#pragma once

// Short-period corrections between mean (prime) and osculating reduced
// variables, orders 4..9 of the Lie-transform normal form.

#include "hilldro/hill.hpp"
#include "hilldro/reduction.hpp"

namespace hilldro {

struct CorrectionTerm {
  double phi = 0.0;
  double q = 0.0;
  double Phi = 0.0;
  double Q = 0.0;
};

inline constexpr int kMinCorrectionOrder = 4;
inline constexpr int kMaxCorrectionOrder = 9;

// xi_{0,m} evaluated at the mean state.
CorrectionTerm direct_term(int m, const ReducedState& mean, const ModelParams& p);
// xi'_{0,m} evaluated at the osculating state.
CorrectionTerm inverse_term(int m, const ReducedState& osc, const ModelParams& p);

// order 0 is the identity; otherwise all terms 4..order are summed.
ReducedState direct_correct(const ReducedState& mean, int order,
                            const ModelParams& p);
ReducedState inverse_correct(const ReducedState& osc, int order,
                             const ModelParams& p);

ReducedState osculating_to_mean_cartesian(const CartesianState& s, int order,
                                          const ModelParams& p);

// Odd, continuous, 2 pi-periodic antiderivative of 1 - 2/delta^2.
double phase_bracket(double phi);

}  // namespace hilldro
