//==============================================================================
// elliptic.hpp
// The symmetric positive constraint solver: given right-hand sides for the
// N + N* + 1 constraint rows and the weighted-trace relation, recover the
// potential expansion coefficients of both layers.  The reduced unknowns are
// (phi1 tail, phi2 tail, combined upper potential); the solve is conjugate
// gradients preconditioned by the exact Fourier inverse of the flat-geometry
// operator.
//==============================================================================
#pragma once

#include "kakinuma/operators.hpp"

namespace kakinuma {

// Right-hand side of the constraint system:
//   upper rows i=1..N:    f1p[i-1]
//   lower rows i=1..N*:   f2p[i-1]
//   combined zero row:    d/dx of the flux field f3
//   weighted trace:       -rho1 l1·phi1 + rho2 l2·phi2 = f4
struct EllipticRHS {
    FieldVec f1p;
    FieldVec f2p;
    Field f3;
    Field f4;
};

struct EllipticSolution {
    PotentialVec phi1;
    PotentialVec phi2;
    int iterations = 0;
    double residual = 0.0;
};

// Packed unknown vector: N upper-tail fields, N* lower-tail fields, and the
// combined upper potential (mean-free slot).
using PackedVec = FieldVec;

// Apply the symmetric positive block operator to a packed vector.
PackedVec apply_P_operator(const OperatorContext& ctx, const PackedVec& v);

// Full solve: reduction of the right-hand side, preconditioned CG, and
// reconstruction of the zeroth coefficients with the zero-mean gauge
// mean(rho1·phi1_0 + rho2·phi2_0) = 0.
EllipticSolution solve_compatibility(const OperatorContext& ctx, const EllipticRHS& rhs,
                                     double cg_tol, int cg_max_iter);

// Zero right-hand sides except the weighted trace: turns canonical data
// (zeta, phi) into a full constraint-consistent State.
State prepare_initial_data(const ModelParams& params, const NumericsConfig& num,
                           const CanonicalState& canon, const Field& b);

} // namespace kakinuma
