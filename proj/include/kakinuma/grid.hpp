//==============================================================================
// grid.hpp
// Periodic 1-D grid, real sample fields, and the Fourier pseudo-spectral
// calculus used everywhere else: derivatives, zero-mean antiderivatives,
// quadrature, low-pass filtering, and 3/2-rule dealiased products.
//
// Conventions:
//   • Nodes x_i = i·L/M, i = 0..M-1; wavenumbers 2πk/L, k = -M/2..M/2-1.
//   • Odd-order derivatives zero the Nyquist mode so the derivative matrix is
//     an exactly skew-symmetric real matrix; this makes discrete integration
//     by parts exact, which the operator adjointness identities rely on.
//   • integrate(f) = L·mean(f) (spectral/trapezoid quadrature coincide on a
//     periodic uniform grid).
//==============================================================================
#pragma once

#include "kakinuma/errors.hpp"

#include <complex>
#include <vector>

namespace kakinuma {

// Uniform periodic grid of period `length` with `points` samples.
struct Grid1D {
    double length = 0.0;
    int points = 0;

    Grid1D() = default;
    Grid1D(double length_, int points_);

    double dx() const { return length / points; }
    double node(int i) const { return length * i / points; }
    std::vector<double> nodes() const;

    friend bool operator==(const Grid1D& a, const Grid1D& b) {
        return a.length == b.length && a.points == b.points;
    }
    friend bool operator!=(const Grid1D& a, const Grid1D& b) { return !(a == b); }
};

// Real scalar field sampled on a Grid1D.  Arithmetic is pointwise.
struct Field {
    Grid1D grid;
    std::vector<double> v;

    Field() = default;
    explicit Field(const Grid1D& g, double fill = 0.0) : grid(g), v(g.points, fill) {}

    int size() const { return static_cast<int>(v.size()); }
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(const Field& o); // pointwise
    Field& operator*=(double s);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, const Field& b) { return a *= b; } // pointwise
    friend Field operator*(Field a, double s) { return a *= s; }
    friend Field operator*(double s, Field a) { return a *= s; }
    friend Field operator-(Field a) { return a *= -1.0; }
};

// A stack of fields on one grid (potential expansion coefficients, residual
// lists, solver unknowns, ...).
using FieldVec = std::vector<Field>;

// --- spectral calculus ------------------------------------------------------

// Half-complex spectrum (modes k = 0..M/2) of a real field; inverse transform.
std::vector<std::complex<double>> to_spectrum(const Field& f);
Field from_spectrum(const Grid1D& g, const std::vector<std::complex<double>>& spec);

// Fourier-collocation derivative of the given order (exact on resolved modes).
Field spectral_derivative(const Field& f, int order = 1);

// Zero-mean antiderivative g with spectral_derivative(g) = f.  Throws
// NonZeroMean when |mean(f)| > tol·rms(f).
Field spectral_antiderivative(const Field& f, double tol = 1e-12);

double mean(const Field& f);
double integrate(const Field& f);       // L · mean(f)
double max_abs(const Field& f);
double rms(const Field& f);

// Zero every mode with |k| > M/3 (the filter paired with the 3/2 product rule).
Field low_pass_filter(const Field& f);

// Product evaluated on a 3/2-times finer grid and truncated back: the exact
// product of the two trigonometric interpolants, alias-free.
Field multiply_dealiased(const Field& f, const Field& g);

// Pointwise integer power followed by the low-pass filter; the standard
// hygiene for nonlinear coefficient fields such as layer-thickness powers.
Field pow_filtered(const Field& f, int p);

} // namespace kakinuma
