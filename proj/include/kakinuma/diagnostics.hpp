//==============================================================================
// diagnostics.hpp
// Conserved quantities and their fluxes: energy density/flux, momentum
// density/flux (flat bottom), the canonical potential trace, the Hamiltonian,
// and finite-difference checks of its variational derivatives.
//==============================================================================
#pragma once

#include "kakinuma/evolution.hpp"

namespace kakinuma {

// Pointwise energy density (both layers' quadratic forms + potential energy).
Field energy_density(const OperatorContext& ctx, const PotentialVec& phi1,
                     const PotentialVec& phi2);

// Energy flux given the instantaneous potential rates.
Field energy_flux(const OperatorContext& ctx, const PotentialVec& phi1,
                  const PotentialVec& phi2, const PotentialVec& dphi1,
                  const PotentialVec& dphi2);

// Momentum density zeta·(d/dx phi) and its scalar flux; requires a flat
// bottom (throws FlatBottomRequired otherwise).  dzeta and the potential
// rates supply the time derivative of the canonical trace in the flux.
struct MomentumPair {
    Field density;
    Field flux;
};
MomentumPair momentum_and_flux(const OperatorContext& ctx, const PotentialVec& phi1,
                               const PotentialVec& phi2, const Field& dzeta,
                               const PotentialVec& dphi1, const PotentialVec& dphi2);

// Canonical potential trace phi = rho2 l2·phi2 - rho1 l1·phi1 (with the same
// filtered thickness powers as the constraint solver's reconstruction, so
// prepare -> trace round-trips exactly).
Field canonical_phi(const OperatorContext& ctx, const PotentialVec& phi1,
                    const PotentialVec& phi2);

// Hamiltonian of canonical data: constraint solve + energy integral.
double hamiltonian_value(const ModelParams& params, const NumericsConfig& num,
                         const CanonicalState& canon, const Field& b);

// Compare centered finite differences of the Hamiltonian (and of the energy
// functional at fixed coefficients) against the closed-form variational
// derivatives.  Steps are scanned; the minima over the scan are reported.
struct VariationalCheck {
    double err_phi_direction = 0.0;   // dH/ds along (0, dphi) vs closed form
    double err_zeta_direction = 0.0;  // dH/ds along (dzeta, 0) vs closed form
    double err_energy_phi1 = 0.0;     // dE/ds along a phi1 direction vs rho1 L1 phi1
};
VariationalCheck variational_derivative_check(const ModelParams& params,
                                              const NumericsConfig& num,
                                              const CanonicalState& canon,
                                              const Field& b, const Field& dzeta_dir,
                                              const Field& dphi_dir);

// Assemble one time-series diagnostics row from a constraint-consistent state.
SeriesRow diagnostics_row(const ModelParams& params, const NumericsConfig& num,
                          const State& state, const Field& b, double t);

} // namespace kakinuma
