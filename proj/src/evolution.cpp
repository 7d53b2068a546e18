//==============================================================================
// evolution.cpp
// Constrained rate solves, canonical right-hand side, RK4, and the driver.
//==============================================================================
#include "kakinuma/evolution.hpp"

#include "kakinuma/diagnostics.hpp"

#include <cmath>

namespace kakinuma {

Field compute_F(const OperatorContext& ctx, const PotentialVec& phi1,
                const PotentialVec& phi2) {
    const InterfaceVelocities iv = interface_velocities(ctx, phi1, phi2);
    const double g = ctx.params.grav;
    const double rho1 = ctx.params.rho1, rho2 = ctx.params.rho2;
    Field F = multiply_dealiased(iv.u1, iv.u1) + multiply_dealiased(iv.w1, iv.w1);
    F *= 0.5 * rho1;
    Field lower = multiply_dealiased(iv.u2, iv.u2) + multiply_dealiased(iv.w2, iv.w2);
    F -= 0.5 * rho2 * lower;
    F += (rho1 - rho2) * g * ctx.geom.zeta;
    return F;
}

namespace {

// Laplacian commutator with a constraint row by operator composition:
// lap(row(phi)) - row(lap(phi)), minus the geometry-variation part.
PotentialVec lap_of_each(const PotentialVec& phi) {
    PotentialVec out;
    out.reserve(phi.size());
    for (const Field& f : phi) out.push_back(spectral_derivative(f, 2));
    return out;
}

} // namespace

TimeDerivatives compute_time_derivatives(const ModelParams& params,
                                         const NumericsConfig& num,
                                         const State& state, const Field& b,
                                         double epsilon) {
    const Geometry geom = make_geometry(params, state.zeta, b, num.h_min);
    const OperatorContext ctx(params, geom);
    const int N = params.N, Ns = params.Nstar();
    const double rho1 = params.rho1, rho2 = params.rho2;

    const PotentialVec rows1 = apply_L1(ctx, state.phi1);
    const PotentialVec rows2 = apply_L2(ctx, state.phi2);
    const BlockInverse q = block_inverse(ctx);

    Field g0(ctx.grid);
    for (int i = 0; i <= N; ++i) g0 += rho1 * (q.q1[i] * rows1[i]);
    for (int i = 0; i <= Ns; ++i) g0 += rho2 * (q.q2[i] * rows2[i]);

    const CommutatorCoefficients cf = commutator_f(ctx, state.phi1, state.phi2);
    const InterfaceVelocities iv = interface_velocities(ctx, state.phi1, state.phi2);
    const Field v = iv.u2 - iv.u1;

    EllipticRHS rhs;
    rhs.f1p.assign(N, Field(ctx.grid));
    rhs.f2p.assign(Ns, Field(ctx.grid));
    for (int i = 1; i <= N; ++i) rhs.f1p[i - 1] = -(cf.f1[i] * g0);
    for (int i = 1; i <= Ns; ++i) rhs.f2p[i - 1] = -(cf.f2[i] * g0);
    rhs.f3 = v * g0;
    rhs.f4 = compute_F(ctx, state.phi1, state.phi2);

    if (epsilon > 0.0) {
        const Field lap_zeta = spectral_derivative(state.zeta, 2);
        const PotentialVec lap1 = lap_of_each(state.phi1);
        const PotentialVec lap2 = lap_of_each(state.phi2);
        const PotentialVec c1 = constraint_rows_L1(ctx, rows1);
        const PotentialVec c2 = constraint_rows_L2(ctx, rows2);
        const PotentialVec c1l = constraint_rows_L1(ctx, apply_L1(ctx, lap1));
        const PotentialVec c2l = constraint_rows_L2(ctx, apply_L2(ctx, lap2));
        for (int i = 1; i <= N; ++i) {
            Field ft = spectral_derivative(c1[i], 2) - c1l[i] - cf.f1[i] * lap_zeta;
            rhs.f1p[i - 1] += epsilon * ft;
        }
        for (int i = 1; i <= Ns; ++i) {
            Field ft = spectral_derivative(c2[i], 2) - c2l[i] - cf.f2[i] * lap_zeta;
            rhs.f2p[i - 1] += epsilon * ft;
        }
        // The combined-row commutator is a perfect divergence; recover its
        // flux with the spectral antiderivative (a nonzero mean would signal
        // a discretization inconsistency and throws NonZeroMean).
        Field f3_div = spectral_derivative(c1[0] + c2[0], 2) - (c1l[0] + c2l[0]);
        f3_div += spectral_derivative(v * lap_zeta);
        rhs.f3 += epsilon * spectral_antiderivative(f3_div, 1e-8);
    }

    EllipticSolution sol = solve_compatibility(ctx, rhs, num.cg_tol, num.cg_max_iter);
    return TimeDerivatives{std::move(g0), std::move(sol.phi1), std::move(sol.phi2)};
}

CanonicalRates rhs_canonical(const ModelParams& params, const NumericsConfig& num,
                             const CanonicalState& canon, const Field& b) {
    const State state = prepare_initial_data(params, num, canon, b);
    const Geometry geom = make_geometry(params, canon.zeta, b, num.h_min);
    const OperatorContext ctx(params, geom);

    const PotentialVec rows1 = apply_L1(ctx, state.phi1);
    const Field& zero_row = rows1[0];
    const LayerVectors lv = layer_vectors(ctx);

    Field weight(ctx.grid);
    for (int j = 0; j <= params.N; ++j) weight += params.rho1 * (lv.dl1[j] * state.phi1[j]);
    for (int j = 0; j <= params.Nstar(); ++j)
        weight += params.rho2 * (lv.dl2[j] * state.phi2[j]);

    CanonicalRates rates;
    rates.dzeta = -zero_row;
    rates.dphi = compute_F(ctx, state.phi1, state.phi2) - zero_row * weight;
    return rates;
}

CanonicalState step_rk4(const ModelParams& params, const NumericsConfig& num,
                        const CanonicalState& y, const Field& b, double dt) {
    auto rhs = [&](const CanonicalState& s) { return rhs_canonical(params, num, s, b); };
    const CanonicalRates k1 = rhs(y);
    const CanonicalState y2{y.zeta + 0.5 * dt * k1.dzeta, y.phi + 0.5 * dt * k1.dphi};
    const CanonicalRates k2 = rhs(y2);
    const CanonicalState y3{y.zeta + 0.5 * dt * k2.dzeta, y.phi + 0.5 * dt * k2.dphi};
    const CanonicalRates k3 = rhs(y3);
    const CanonicalState y4{y.zeta + dt * k3.dzeta, y.phi + dt * k3.dphi};
    const CanonicalRates k4 = rhs(y4);
    CanonicalState out;
    out.zeta = y.zeta + (dt / 6.0) * (k1.dzeta + 2.0 * k2.dzeta + 2.0 * k3.dzeta + k4.dzeta);
    out.phi = y.phi + (dt / 6.0) * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
    return out;
}

namespace {

State state_axpy(const State& y, double c, const TimeDerivatives& d, double epsilon,
                 const State& base) {
    // y + c·(rates of `base` state), converting the solver rates to full time
    // derivatives when the parabolic regularization is on.
    State out;
    out.zeta = y.zeta + c * d.g0;
    if (epsilon > 0.0) out.zeta += (c * epsilon) * spectral_derivative(base.zeta, 2);
    out.phi1.reserve(d.g1.size());
    out.phi2.reserve(d.g2.size());
    for (size_t j = 0; j < d.g1.size(); ++j) {
        Field f = y.phi1[j] + c * d.g1[j];
        if (epsilon > 0.0) f += (c * epsilon) * spectral_derivative(base.phi1[j], 2);
        out.phi1.push_back(std::move(f));
    }
    for (size_t j = 0; j < d.g2.size(); ++j) {
        Field f = y.phi2[j] + c * d.g2[j];
        if (epsilon > 0.0) f += (c * epsilon) * spectral_derivative(base.phi2[j], 2);
        out.phi2.push_back(std::move(f));
    }
    return out;
}

} // namespace

State step_rk4(const ModelParams& params, const NumericsConfig& num, const State& y,
               const Field& b, double dt) {
    const double eps = num.epsilon;
    auto rhs = [&](const State& s) { return compute_time_derivatives(params, num, s, b, eps); };
    const TimeDerivatives k1 = rhs(y);
    const State y2 = state_axpy(y, 0.5 * dt, k1, eps, y);
    const TimeDerivatives k2 = rhs(y2);
    const State y3 = state_axpy(y, 0.5 * dt, k2, eps, y2);
    const TimeDerivatives k3 = rhs(y3);
    const State y4 = state_axpy(y, dt, k3, eps, y3);
    const TimeDerivatives k4 = rhs(y4);

    State out = y;
    auto accumulate = [&](Field& dst, const Field& a, const Field& b2, const Field& c,
                          const Field& d) { dst += (dt / 6.0) * (a + 2.0 * b2 + 2.0 * c + d); };
    accumulate(out.zeta, k1.g0, k2.g0, k3.g0, k4.g0);
    if (eps > 0.0) {
        out.zeta += (dt / 6.0 * eps) *
                    (spectral_derivative(y.zeta, 2) + 2.0 * spectral_derivative(y2.zeta, 2) +
                     2.0 * spectral_derivative(y3.zeta, 2) + spectral_derivative(y4.zeta, 2));
    }
    for (size_t j = 0; j < out.phi1.size(); ++j) {
        accumulate(out.phi1[j], k1.g1[j], k2.g1[j], k3.g1[j], k4.g1[j]);
        if (eps > 0.0)
            out.phi1[j] += (dt / 6.0 * eps) * (spectral_derivative(y.phi1[j], 2) +
                                               2.0 * spectral_derivative(y2.phi1[j], 2) +
                                               2.0 * spectral_derivative(y3.phi1[j], 2) +
                                               spectral_derivative(y4.phi1[j], 2));
    }
    for (size_t j = 0; j < out.phi2.size(); ++j) {
        accumulate(out.phi2[j], k1.g2[j], k2.g2[j], k3.g2[j], k4.g2[j]);
        if (eps > 0.0)
            out.phi2[j] += (dt / 6.0 * eps) * (spectral_derivative(y.phi2[j], 2) +
                                               2.0 * spectral_derivative(y2.phi2[j], 2) +
                                               2.0 * spectral_derivative(y3.phi2[j], 2) +
                                               spectral_derivative(y4.phi2[j], 2));
    }
    return out;
}

namespace {

SimResult run_simulation(const Config& cfg, CanonicalState canon, State state,
                         bool canonical, const SnapshotCallback& on_snapshot) {
    const ModelParams& P = cfg.model;
    const NumericsConfig& num = cfg.num;
    if (!(num.dt > 0.0) || !(num.t_end > 0.0))
        throw ConfigError("simulate requires positive dt and t_end");
    const Grid1D grid(num.L, num.M);
    const Field b = make_bottom(num.bottom, grid);

    SimResult res;
    const int steps = static_cast<int>(std::llround(num.t_end / num.dt));
    double t = 0.0;

    auto record = [&](double tnow) {
        const State& s = canonical ? (state = prepare_initial_data(P, num, canon, b)) : state;
        SeriesRow row = diagnostics_row(P, num, s, b, tnow);
        res.series.push_back(row);
        if (on_snapshot) on_snapshot(tnow, s);
        if (row.stability_margin < num.margin_min)
            throw StabilityViolated("stability margin fell below margin_min");
    };

    try {
        record(0.0);
        for (int n = 0; n < steps; ++n) {
            if (canonical) {
                canon = step_rk4(P, num, canon, b, num.dt);
            } else {
                state = step_rk4(P, num, state, b, num.dt);
                if (num.reproject_every > 0 && (n + 1) % num.reproject_every == 0) {
                    const Geometry geom = make_geometry(P, state.zeta, b, num.h_min);
                    const OperatorContext ctx(P, geom);
                    const Field phi = canonical_phi(ctx, state.phi1, state.phi2);
                    state = prepare_initial_data(P, num, CanonicalState{state.zeta, phi}, b);
                }
            }
            t = (n + 1) * num.dt;
            if ((n + 1) % num.output_every == 0 || n + 1 == steps) record(t);
            res.t_final = t;
        }
        if (canonical) state = prepare_initial_data(P, num, canon, b);
    } catch (const StabilityViolated& e) {
        res.aborted = true;
        res.abort_reason = e.what();
    } catch (const NonCavitation& e) {
        res.aborted = true;
        res.abort_reason = e.what();
    }
    res.final_state = std::move(state);
    return res;
}

} // namespace

SimResult simulate(const Config& cfg, const CanonicalState& initial,
                   const SnapshotCallback& on_snapshot) {
    return run_simulation(cfg, initial, State{}, true, on_snapshot);
}

SimResult simulate(const Config& cfg, const State& initial,
                   const SnapshotCallback& on_snapshot) {
    return run_simulation(cfg, CanonicalState{}, initial, false, on_snapshot);
}

} // namespace kakinuma
