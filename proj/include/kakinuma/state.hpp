//==============================================================================
// state.hpp
// Solution containers: the full expansion state (zeta, phi1, phi2), the
// canonical pair (zeta, phi), and the derived layer geometry with its
// non-cavitation check.
//==============================================================================
#pragma once

#include "kakinuma/grid.hpp"
#include "kakinuma/params.hpp"

namespace kakinuma {

// Expansion coefficients of one layer's velocity potential: a stack of N+1
// (upper) or N*+1 (lower) fields on a common grid.
using PotentialVec = FieldVec;

// Full state of the expanded model.
struct State {
    Field zeta;
    PotentialVec phi1; // upper layer, N+1 components
    PotentialVec phi2; // lower layer, N*+1 components
};

// Canonical (Hamiltonian) variables: interface elevation and the weighted
// potential trace phi = rho2·Phi2 - rho1·Phi1 on the interface.
struct CanonicalState {
    Field zeta;
    Field phi;
};

// Layer thickness geometry derived from (zeta, b).
struct Geometry {
    Field zeta;
    Field b;
    Field H1; // h1 - zeta
    Field H2; // h2 + zeta - b
};

// Build the geometry, throwing NonCavitation when either thickness drops
// below h_min anywhere.
Geometry make_geometry(const ModelParams& params, const Field& zeta, const Field& b,
                       double h_min);

} // namespace kakinuma
