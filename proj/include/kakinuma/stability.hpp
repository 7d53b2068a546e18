//==============================================================================
// stability.hpp
// The interfacial stability condition: the pressure-gradient coefficient a,
// the pointwise margin against Kelvin-Helmholtz-type growth, and the
// frozen-coefficient dispersion roots.
//==============================================================================
#pragma once

#include "kakinuma/evolution.hpp"
#include "kakinuma/lintheory.hpp"

#include <complex>

namespace kakinuma {

// alpha constant of one layer as a double (exact rational internally).
double alpha_value(const ModelParams& params, Layer layer);

// Everything the stability condition needs, evaluated pointwise on a state.
struct StabilityContext {
    Field a;            // pressure-gradient coefficient at the interface
    Field u1, u2, v, u; // layer velocities, shear v = u2-u1, weighted mean u
    Field theta1, theta2;
    Field margin;       // a - rho1 rho2 v^2/(rho1 H2 alpha2 + rho2 H1 alpha1)
    double alpha1 = 1.0, alpha2 = 1.0;
    double margin_min = 0.0; // pointwise minimum of `margin`
};

// The coefficient a evaluated from instantaneous data, with the potential
// time derivatives replaced by the rates of the constrained evolution solve.
Field compute_a(const OperatorContext& ctx, const PotentialVec& phi1,
                const PotentialVec& phi2, const TimeDerivatives& derivs);

StabilityContext stability_context(const OperatorContext& ctx,
                                   const PotentialVec& phi1,
                                   const PotentialVec& phi2,
                                   const TimeDerivatives& derivs);

// Roots of the frozen-coefficient dispersion quadratic
//   (rho1/(H1 a1))(w - u1 xi)^2 + (rho2/(H2 a2))(w - u2 xi)^2 = a xi^2.
struct FrozenState {
    double H1, H2, u1, u2, a;
};
std::pair<std::complex<double>, std::complex<double>>
frozen_roots(double xi, const FrozenState& fs, const ModelParams& params);

} // namespace kakinuma
