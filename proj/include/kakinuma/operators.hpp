//==============================================================================
// operators.hpp
// Discrete differential operators of the expanded two-layer model: the layer
// operator matrices L_{k,ij}, the constraint operators built from their rows,
// the layer coefficient vectors, interface velocities, the geometry-variation
// coefficient fields, and the pointwise bordered-block inverse.
//
// Product hygiene: coefficient fields (powers of the layer thicknesses, the
// bottom slope) are computed pointwise and low-pass filtered once; operator
// applications then combine them with the spectral derivative matrix through
// plain pointwise products.  Because the derivative matrix is exactly
// skew-symmetric, every discrete adjoint identity used by the elliptic solver
// holds to machine precision.
//==============================================================================
#pragma once

#include "kakinuma/state.hpp"

namespace kakinuma {

// Geometry-derived data shared by all operator applications on one state.
struct OperatorContext {
    ModelParams params;
    Grid1D grid;
    Geometry geom;
    Field db;           // bottom slope
    Field one_plus_db2; // 1 + slope^2

    OperatorContext(const ModelParams& params_, const Geometry& geom_);

    // Filtered thickness powers (coefficients of spectral operators).
    const Field& H1f(int p) const { return h1f_.at(p); }
    const Field& H2f(int p) const { return h2f_.at(p); }
    // Raw pointwise thickness powers (pointwise algebraic formulas).
    const Field& H1r(int p) const { return h1r_.at(p); }
    const Field& H2r(int p) const { return h2r_.at(p); }

  private:
    std::vector<Field> h1f_, h2f_, h1r_, h2r_;
};

// Full operator rows: (L1 phi1)_i for i = 0..N, (L2 phi2)_i for i = 0..N*.
PotentialVec apply_L1(const OperatorContext& ctx, const PotentialVec& phi1);
PotentialVec apply_L2(const OperatorContext& ctx, const PotentialVec& phi2);

// Constraint-operator rows derived from the full rows:
//   row 0 unchanged; row i >= 1 becomes rows[i] - H^{(power i)}·rows[0].
PotentialVec constraint_rows_L1(const OperatorContext& ctx, const PotentialVec& rows);
PotentialVec constraint_rows_L2(const OperatorContext& ctx, const PotentialVec& rows);

// The N + N* + 1 constraint residuals of a state:
//   [upper rows 1..N, lower rows 1..N*, sum of the two zero rows].
FieldVec apply_compat(const OperatorContext& ctx, const PotentialVec& phi1,
                      const PotentialVec& phi2);

// Layer coefficient vectors l_k(H_k) and their thickness derivatives.
struct LayerVectors {
    FieldVec l1, dl1; // length N+1
    FieldVec l2, dl2; // length N*+1
};
LayerVectors layer_vectors(const OperatorContext& ctx);

// Approximate horizontal/vertical velocities traced on the interface.
struct InterfaceVelocities {
    Field u1, u2, w1, w2;
};
InterfaceVelocities interface_velocities(const OperatorContext& ctx,
                                         const PotentialVec& phi1,
                                         const PotentialVec& phi2);

// Coefficient fields of the geometry variation of the constraint operators:
// perturbing zeta by delta changes the upper rows by f1[i]·delta and the
// lower rows by f2[i]·delta (explicit closed forms).
struct CommutatorCoefficients {
    FieldVec f1; // length N+1 (entry 0 is zero)
    FieldVec f2; // length N*+1 (entry 0 is zero)
};
CommutatorCoefficients commutator_f(const OperatorContext& ctx,
                                    const PotentialVec& phi1,
                                    const PotentialVec& phi2);

// Pointwise inverse of the bordered block matrix built from the layer
// coefficient vectors and mass matrices; q0/q1/q2 are the first column.
struct BlockInverse {
    Field q0;
    PotentialVec q1; // length N+1
    PotentialVec q2; // length N*+1
};
BlockInverse block_inverse(const OperatorContext& ctx);

} // namespace kakinuma
