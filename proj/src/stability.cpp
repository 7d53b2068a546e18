//==============================================================================
// stability.cpp
// Pressure-gradient coefficient, stability margin, and frozen-coefficient
// dispersion roots.
//==============================================================================
#include "kakinuma/stability.hpp"

#include <cmath>
#include <limits>

namespace kakinuma {

double alpha_value(const ModelParams& params, Layer layer) {
    return alpha_constant(build_matrices(params, layer)).get_d();
}

Field compute_a(const OperatorContext& ctx, const PotentialVec& phi1,
                const PotentialVec& phi2, const TimeDerivatives& derivs) {
    const ModelParams& P = ctx.params;
    const auto& p = P.p_list;
    const InterfaceVelocities iv = interface_velocities(ctx, phi1, phi2);
    const Field u2_dot_db = iv.u2 * ctx.db;

    Field lower(ctx.grid, P.grav);
    for (int i = 0; i <= P.Nstar(); ++i) {
        if (p[i] == 0) continue;
        Field adv = derivs.g2[i] + iv.u2 * spectral_derivative(phi2[i]);
        lower += double(p[i]) * (ctx.H2r(p[i] - 1) * adv);
        if (p[i] >= 2)
            lower += double(p[i]) * (p[i] - 1) *
                     (ctx.H2r(p[i] - 2) * ((iv.w2 - u2_dot_db) * phi2[i]));
    }

    Field upper(ctx.grid, -P.grav);
    for (int i = 0; i <= P.N; ++i) {
        if (i == 0) continue;
        Field adv = derivs.g1[i] + iv.u1 * spectral_derivative(phi1[i]);
        upper += 2.0 * i * (ctx.H1r(2 * i - 1) * adv);
        if (i >= 1 && 2 * i - 1 >= 1)
            upper -= 2.0 * i * (2 * i - 1) * (ctx.H1r(2 * (i - 1)) * (iv.w1 * phi1[i]));
    }

    Field a = P.rho2 * lower;
    a += P.rho1 * upper;
    return a;
}

StabilityContext stability_context(const OperatorContext& ctx, const PotentialVec& phi1,
                                   const PotentialVec& phi2,
                                   const TimeDerivatives& derivs) {
    const ModelParams& P = ctx.params;
    StabilityContext sc;
    sc.alpha1 = alpha_value(P, Layer::Upper);
    sc.alpha2 = alpha_value(P, Layer::Lower);
    const InterfaceVelocities iv = interface_velocities(ctx, phi1, phi2);
    sc.u1 = iv.u1;
    sc.u2 = iv.u2;
    sc.v = iv.u2 - iv.u1;
    sc.a = compute_a(ctx, phi1, phi2, derivs);

    sc.theta1 = Field(ctx.grid);
    sc.theta2 = Field(ctx.grid);
    sc.u = Field(ctx.grid);
    sc.margin = Field(ctx.grid);
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ctx.grid.points; ++i) {
        const double H1 = ctx.geom.H1[i], H2 = ctx.geom.H2[i];
        const double denom = P.rho1 * H2 * sc.alpha2 + P.rho2 * H1 * sc.alpha1;
        sc.theta1[i] = P.rho2 * H1 * sc.alpha1 / denom;
        sc.theta2[i] = P.rho1 * H2 * sc.alpha2 / denom;
        sc.u[i] = sc.theta2[i] * sc.u1[i] + sc.theta1[i] * sc.u2[i];
        sc.margin[i] = sc.a[i] - P.rho1 * P.rho2 * sc.v[i] * sc.v[i] / denom;
        mn = std::min(mn, sc.margin[i]);
    }
    sc.margin_min = mn;
    return sc;
}

std::pair<std::complex<double>, std::complex<double>>
frozen_roots(double xi, const FrozenState& fs, const ModelParams& params) {
    const double a1 = alpha_value(params, Layer::Upper);
    const double a2 = alpha_value(params, Layer::Lower);
    const double r1 = params.rho1 / (fs.H1 * a1);
    const double r2 = params.rho2 / (fs.H2 * a2);
    // A w^2 - 2B w + C = 0.
    const double A = r1 + r2;
    const double B = r1 * fs.u1 * xi + r2 * fs.u2 * xi;
    const double C = r1 * fs.u1 * fs.u1 * xi * xi + r2 * fs.u2 * fs.u2 * xi * xi -
                     fs.a * xi * xi;
    const double disc = B * B - A * C;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {std::complex<double>((B + s) / A, 0.0),
                std::complex<double>((B - s) / A, 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(B / A, s / A), std::complex<double>(B / A, -s / A)};
}

} // namespace kakinuma
