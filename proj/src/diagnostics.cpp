//==============================================================================
// diagnostics.cpp
// Energy/momentum densities and fluxes, canonical trace, Hamiltonian, and
// variational-derivative finite-difference checks.
//==============================================================================
#include "kakinuma/diagnostics.hpp"

#include "kakinuma/stability.hpp"

#include <cmath>
#include <limits>

namespace kakinuma {

namespace {

double ratio0(double num, double den) { return num == 0.0 ? 0.0 : num / den; }

} // namespace

Field energy_density(const OperatorContext& ctx, const PotentialVec& phi1,
                     const PotentialVec& phi2) {
    const ModelParams& P = ctx.params;
    const auto& p = P.p_list;
    Field e(ctx.grid);

    std::vector<Field> d1(P.N + 1), d2(P.Nstar() + 1);
    for (int j = 0; j <= P.N; ++j) d1[j] = spectral_derivative(phi1[j]);
    for (int j = 0; j <= P.Nstar(); ++j) d2[j] = spectral_derivative(phi2[j]);

    for (int i = 0; i <= P.N; ++i)
        for (int j = 0; j <= P.N; ++j) {
            e += (0.5 * P.rho1 / (2 * (i + j) + 1)) *
                 (ctx.H1f(2 * (i + j) + 1) * d1[i] * d1[j]);
            const double c = ratio0(4.0 * i * j, 2 * (i + j) - 1);
            if (c != 0.0)
                e += 0.5 * P.rho1 * c * (ctx.H1f(2 * (i + j) - 1) * phi1[i] * phi1[j]);
        }
    for (int i = 0; i <= P.Nstar(); ++i)
        for (int j = 0; j <= P.Nstar(); ++j) {
            const int pi = p[i], pj = p[j];
            e += (0.5 * P.rho2 / (pi + pj + 1)) * (ctx.H2f(pi + pj + 1) * d2[i] * d2[j]);
            const double cb = ratio0(2.0 * pi, pi + pj);
            if (cb != 0.0)
                e -= 0.5 * P.rho2 * cb * (ctx.H2f(pi + pj) * phi2[i] * ctx.db * d2[j]);
            const double cm = ratio0(double(pi) * pj, pi + pj - 1);
            if (cm != 0.0)
                e += 0.5 * P.rho2 * cm *
                     (ctx.H2f(pi + pj - 1) * ctx.one_plus_db2 * phi2[i] * phi2[j]);
        }
    e += (0.5 * (P.rho2 - P.rho1) * P.grav) * (ctx.geom.zeta * ctx.geom.zeta);
    return e;
}

Field energy_flux(const OperatorContext& ctx, const PotentialVec& phi1,
                  const PotentialVec& phi2, const PotentialVec& dphi1,
                  const PotentialVec& dphi2) {
    const ModelParams& P = ctx.params;
    const auto& p = P.p_list;
    Field flux(ctx.grid);
    for (int i = 0; i <= P.N; ++i)
        for (int j = 0; j <= P.N; ++j)
            flux -= (P.rho1 / (2 * (i + j) + 1)) *
                    (ctx.H1f(2 * (i + j) + 1) * spectral_derivative(phi1[j]) * dphi1[i]);
    for (int i = 0; i <= P.Nstar(); ++i)
        for (int j = 0; j <= P.Nstar(); ++j) {
            const int pi = p[i], pj = p[j];
            Field term = (-1.0 / (pi + pj + 1)) *
                         (ctx.H2f(pi + pj + 1) * spectral_derivative(phi2[j]));
            const double cb = ratio0(double(pj), pi + pj);
            if (cb != 0.0) term += cb * (ctx.H2f(pi + pj) * phi2[j] * ctx.db);
            flux += P.rho2 * (term * dphi2[i]);
        }
    return flux;
}

Field canonical_phi(const OperatorContext& ctx, const PotentialVec& phi1,
                    const PotentialVec& phi2) {
    const ModelParams& P = ctx.params;
    Field phi(ctx.grid);
    for (int j = 0; j <= P.Nstar(); ++j)
        phi += P.rho2 * (ctx.H2f(P.p_list[j]) * phi2[j]);
    for (int j = 0; j <= P.N; ++j) phi -= P.rho1 * (ctx.H1f(2 * j) * phi1[j]);
    return phi;
}

MomentumPair momentum_and_flux(const OperatorContext& ctx, const PotentialVec& phi1,
                               const PotentialVec& phi2, const Field& dzeta,
                               const PotentialVec& dphi1, const PotentialVec& dphi2) {
    const ModelParams& P = ctx.params;
    if (max_abs(ctx.geom.b) > 0.0)
        throw FlatBottomRequired("momentum diagnostics need a flat bottom");

    const Field phi = canonical_phi(ctx, phi1, phi2);
    MomentumPair mp{ctx.geom.zeta * spectral_derivative(phi), Field(ctx.grid)};

    // d/dt of the canonical trace: chain rule through the thickness powers
    // (upper thickness falls, lower thickness rises with zeta).
    const LayerVectors lv = layer_vectors(ctx);
    Field dphi_t(ctx.grid);
    for (int j = 0; j <= P.Nstar(); ++j) {
        dphi_t += P.rho2 * (ctx.H2f(P.p_list[j]) * dphi2[j]);
        dphi_t += P.rho2 * (lv.dl2[j] * phi2[j] * dzeta);
    }
    for (int j = 0; j <= P.N; ++j) {
        dphi_t -= P.rho1 * (ctx.H1f(2 * j) * dphi1[j]);
        dphi_t += P.rho1 * (lv.dl1[j] * phi1[j] * dzeta);
    }

    const Field e = energy_density(ctx, phi1, phi2);
    mp.flux = -(ctx.geom.zeta * dphi_t + e);
    for (int i = 0; i <= P.N; ++i)
        for (int j = 0; j <= P.N; ++j)
            mp.flux += (P.rho1 / (2 * (i + j) + 1)) *
                       (ctx.H1f(2 * (i + j) + 1) * spectral_derivative(phi1[i]) *
                        spectral_derivative(phi1[j]));
    // Lower-layer quadratic sum weighted by the lower-layer density.
    for (int i = 0; i <= P.Nstar(); ++i)
        for (int j = 0; j <= P.Nstar(); ++j) {
            const int pi = P.p_list[i], pj = P.p_list[j];
            mp.flux += (P.rho2 / (pi + pj + 1)) *
                       (ctx.H2f(pi + pj + 1) * spectral_derivative(phi2[i]) *
                        spectral_derivative(phi2[j]));
        }
    return mp;
}

double hamiltonian_value(const ModelParams& params, const NumericsConfig& num,
                         const CanonicalState& canon, const Field& b) {
    const State state = prepare_initial_data(params, num, canon, b);
    const Geometry geom = make_geometry(params, canon.zeta, b, num.h_min);
    const OperatorContext ctx(params, geom);
    return integrate(energy_density(ctx, state.phi1, state.phi2));
}

VariationalCheck variational_derivative_check(const ModelParams& params,
                                              const NumericsConfig& num,
                                              const CanonicalState& canon,
                                              const Field& b, const Field& dzeta_dir,
                                              const Field& dphi_dir) {
    VariationalCheck out;
    const CanonicalRates rates = rhs_canonical(params, num, canon, b);
    // Closed forms: variation in phi pairs with the interface rate; variation
    // in zeta pairs with minus the potential rate.
    const double exact_phi = integrate(rates.dzeta * dphi_dir);
    const double exact_zeta = integrate(-(rates.dphi) * dzeta_dir);

    auto H = [&](const CanonicalState& c) { return hamiltonian_value(params, num, c, b); };
    auto scan = [&](auto&& perturbed, double exact) {
        double best = std::numeric_limits<double>::infinity();
        for (double h : {1e-3, 1e-4, 1e-5, 1e-6}) {
            const double fd = (H(perturbed(h)) - H(perturbed(-h))) / (2.0 * h);
            const double scale = std::max(std::abs(exact), 1e-30);
            best = std::min(best, std::abs(fd - exact) / scale);
        }
        return best;
    };
    out.err_phi_direction = scan(
        [&](double h) { return CanonicalState{canon.zeta, canon.phi + h * dphi_dir}; },
        exact_phi);
    out.err_zeta_direction = scan(
        [&](double h) { return CanonicalState{canon.zeta + h * dzeta_dir, canon.phi}; },
        exact_zeta);

    // Energy functional at fixed coefficients: variation in one upper
    // coefficient pairs with the corresponding full operator row.
    const State state = prepare_initial_data(params, num, canon, b);
    const Geometry geom = make_geometry(params, canon.zeta, b, num.h_min);
    const OperatorContext ctx(params, geom);
    const PotentialVec rows1 = apply_L1(ctx, state.phi1);
    const double exact_e = integrate(params.rho1 * (rows1[0] * dphi_dir));
    double best = std::numeric_limits<double>::infinity();
    for (double h : {1e-3, 1e-4, 1e-5, 1e-6}) {
        auto energy_at = [&](double s) {
            PotentialVec p1 = state.phi1;
            p1[0] += s * dphi_dir;
            return integrate(energy_density(ctx, p1, state.phi2));
        };
        const double fd = (energy_at(h) - energy_at(-h)) / (2.0 * h);
        const double scale = std::max(std::abs(exact_e), 1e-30);
        best = std::min(best, std::abs(fd - exact_e) / scale);
    }
    out.err_energy_phi1 = best;
    return out;
}

SeriesRow diagnostics_row(const ModelParams& params, const NumericsConfig& num,
                          const State& state, const Field& b, double t) {
    const Geometry geom = make_geometry(params, state.zeta, b, num.h_min);
    const OperatorContext ctx(params, geom);
    SeriesRow row;
    row.t = t;
    row.mass = integrate(state.zeta);
    row.energy = integrate(energy_density(ctx, state.phi1, state.phi2));
    row.hamiltonian = row.energy; // same functional on constraint-consistent states

    const TimeDerivatives derivs =
        compute_time_derivatives(params, num, state, b, num.epsilon);
    const StabilityContext sc = stability_context(ctx, state.phi1, state.phi2, derivs);
    row.stability_margin = sc.margin_min;

    if (max_abs(b) > 0.0) {
        row.momentum = std::numeric_limits<double>::quiet_NaN();
    } else {
        const MomentumPair mp =
            momentum_and_flux(ctx, state.phi1, state.phi2, derivs.g0, derivs.g1, derivs.g2);
        row.momentum = integrate(mp.density);
    }

    double cr = 0.0;
    for (const Field& r : apply_compat(ctx, state.phi1, state.phi2))
        cr = std::max(cr, max_abs(r));
    row.compat_residual = cr;

    row.min_H1 = geom.H1[0];
    row.min_H2 = geom.H2[0];
    for (int i = 0; i < ctx.grid.points; ++i) {
        row.min_H1 = std::min(row.min_H1, geom.H1[i]);
        row.min_H2 = std::min(row.min_H2, geom.H2[i]);
    }
    return row;
}

} // namespace kakinuma
