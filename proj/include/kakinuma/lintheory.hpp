//==============================================================================
// lintheory.hpp
// Linear dispersion theory of the two-layer expanded model: the vertical
// expansion matrices in exact rational arithmetic, bordered determinants, the
// alpha constants, the model/full phase speeds, and order-of-accuracy scans.
//
// Everything touching the Hilbert-type matrices runs on exact rationals
// (GMP mpq): those matrices are catastrophically ill-conditioned in floating
// point.  Floating point is used only for coth and the least-squares fit.
//==============================================================================
#pragma once

#include "kakinuma/params.hpp"

#include <gmpxx.h>

#include <vector>

namespace kakinuma {

using Rational = mpq_class;
using RationalMatrix = std::vector<std::vector<Rational>>;

enum class Layer { Upper, Lower };

// The pair (A0, A1) of a layer's expansion matrices:
//   upper:  A0[i][j] = 1/(2(i+j)+1),      A1[i][j] = 4ij/(2(i+j)-1)
//   lower:  A0[i][j] = 1/(p_i+p_j+1),     A1[i][j] = p_i p_j/(p_i+p_j-1)
// with the 0/0 = 0 convention on A1.
struct ExpansionMatrices {
    Layer layer;
    RationalMatrix A0;
    RationalMatrix A1;
    int dim() const { return static_cast<int>(A0.size()); }
};

ExpansionMatrices build_matrices(const ModelParams& params, Layer layer);

// Exact determinant by fraction-preserving Gaussian elimination.
Rational det_rational(const RationalMatrix& A);

// Determinant of the bordered matrix [[0, 1^T], [-1, A]].
Rational bordered_det(const RationalMatrix& A);

// alpha = det A0 / det(bordered A0).
Rational alpha_constant(const ExpansionMatrices& m);

// One row of a dispersion-curve table.
struct DispersionSample {
    double xi;
    double cK2;   // squared phase speed of the expanded model
    double cIW2;  // squared phase speed of the full linear theory
    double cSW2;  // long-wave (shallow-water) limit
    double rel_error; // |cK2 - cIW2| / cSW2
};

// Long-wave limit (rho2-rho1) g h1 h2 / (rho1 h2 + rho2 h1).
double shallow_limit_speed2(const ModelParams& params);

// Short-wave limit of the model's squared phase speed (closed form in the
// expansion-matrix determinants).
double deep_limit_speed2(const ModelParams& params);

// Model squared phase speed at wavenumber xi (exact rational evaluation of
// the determinant ratio; xi = 0 returns the analytic long-wave limit).
double phase_speed_kakinuma(double xi, const ModelParams& params);

// Full-linear-theory squared phase speed
// (rho2-rho1) g / (rho1 |xi| coth(h1 |xi|) + rho2 |xi| coth(h2 |xi|)).
double phase_speed_full(double xi, const ModelParams& params);

std::vector<DispersionSample> dispersion_table(const ModelParams& params,
                                               double xi_min, double xi_max,
                                               int samples);

// Least-squares slope of log(rel_error) against log(h1|xi| + h2|xi|) over a
// log-spaced scan.  Throws DegenerateFit when the error is below noise
// (< 1e-14) across the whole range.
double convergence_order_scan(const ModelParams& params, double xi_min,
                              double xi_max, int samples = 25);

} // namespace kakinuma
