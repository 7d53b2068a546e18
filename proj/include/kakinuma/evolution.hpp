//==============================================================================
// evolution.hpp
// Time evolution: the interface-rate/potential-rate solve, the Hamiltonian
// (canonical) right-hand side, RK4 stepping with physical monitors, and the
// simulation driver.
//==============================================================================
#pragma once

#include "kakinuma/elliptic.hpp"

#include <functional>
#include <string>
#include <vector>

namespace kakinuma {

// Rates produced by the constrained evolution solve: g0 is the interface rate
// (minus the regularization term), g1/g2 are the potential-coefficient rates.
struct TimeDerivatives {
    Field g0;
    PotentialVec g1;
    PotentialVec g2;
};

// The Bernoulli-difference forcing rho1(g zeta + (u1^2+w1^2)/2)
//                               - rho2(g zeta + (u2^2+w2^2)/2).
Field compute_F(const OperatorContext& ctx, const PotentialVec& phi1,
                const PotentialVec& phi2);

// Full rate solve on a constraint-consistent state (epsilon >= 0 adds the
// parabolic regularization terms to the right-hand sides).
TimeDerivatives compute_time_derivatives(const ModelParams& params,
                                         const NumericsConfig& num,
                                         const State& state, const Field& b,
                                         double epsilon);

// Canonical right-hand side: d/dt zeta and d/dt phi for the Hamiltonian pair.
struct CanonicalRates {
    Field dzeta;
    Field dphi;
};
CanonicalRates rhs_canonical(const ModelParams& params, const NumericsConfig& num,
                             const CanonicalState& canon, const Field& b);

// One classical RK4 step of either formulation.
CanonicalState step_rk4(const ModelParams& params, const NumericsConfig& num,
                        const CanonicalState& canon, const Field& b, double dt);
State step_rk4(const ModelParams& params, const NumericsConfig& num,
               const State& state, const Field& b, double dt);

// One diagnostics row of a simulation time series.
struct SeriesRow {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double momentum = 0.0; // NaN when the bottom is not flat
    double hamiltonian = 0.0;
    double stability_margin = 0.0;
    double compat_residual = 0.0;
    double min_H1 = 0.0;
    double min_H2 = 0.0;
};

struct SimResult {
    std::vector<SeriesRow> series;
    State final_state;
    double t_final = 0.0;
    bool aborted = false;
    std::string abort_reason;
};

// Step to t_end, recording diagnostics every output_every steps.  The
// canonical scheme evolves (zeta, phi); the direct scheme evolves the full
// coefficient state, re-solving the constraints every reproject_every steps.
// Stability/cavitation violations abort cleanly with the last good time.
using SnapshotCallback = std::function<void(double t, const State& state)>;
SimResult simulate(const Config& cfg, const CanonicalState& initial,
                   const SnapshotCallback& on_snapshot = nullptr);
SimResult simulate(const Config& cfg, const State& initial,
                   const SnapshotCallback& on_snapshot = nullptr);

} // namespace kakinuma
