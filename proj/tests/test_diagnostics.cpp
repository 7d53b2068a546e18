//==============================================================================
// test_diagnostics.cpp
// Energy density/flux, momentum, the canonical trace, the Hamiltonian, and
// the variational-derivative finite-difference checks.
//==============================================================================
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kakinuma/diagnostics.hpp"
#include "kakinuma/errors.hpp"

#include <cmath>
#include <random>

using namespace kakinuma;

namespace {

ModelParams base_params(int N, std::vector<int> p) {
    ModelParams m;
    m.rho1 = 1.0;
    m.rho2 = 2.0;
    m.h1 = 1.0;
    m.h2 = 3.0;
    m.grav = 9.81;
    m.N = N;
    m.p_list = std::move(p);
    return m;
}

NumericsConfig base_num(double L, int M) {
    NumericsConfig n;
    n.L = L;
    n.M = M;
    n.dt = 0.005;
    n.t_end = 0.05;
    n.cg_tol = 1e-12;
    n.cg_max_iter = 500;
    return n;
}

Field cosine(const Grid1D& g, double amp, int mode, double phase = 0.0) {
    Field f(g);
    for (int i = 0; i < g.points; ++i)
        f.v[i] =
            amp * std::cos(2.0 * M_PI * mode * g.node(i) / g.length + phase);
    return f;
}

Field random_smooth(const Grid1D& g, std::mt19937& rng, int modes = 3,
                    double amp = 1.0) {
    std::uniform_real_distribution<double> coeff(-amp, amp);
    Field f(g);
    for (int k = 1; k <= modes; ++k) {
        double a = coeff(rng), b = coeff(rng);
        for (int i = 0; i < g.points; ++i) {
            double t = 2.0 * M_PI * k * g.node(i) / g.length;
            f.v[i] += a * std::cos(t) + b * std::sin(t);
        }
    }
    return f;
}

OperatorContext make_ctx(const ModelParams& m, const Grid1D& g,
                         const Field& zeta, const Field& b) {
    return OperatorContext(m, make_geometry(m, zeta, b, 1e-6));
}

} // namespace

TEST_CASE("energy density: rest, single-term, operator form") {
    Grid1D g(2.0 * M_PI, 96);
    ModelParams m = base_params(1, {0, 1});
    OperatorContext ctx = make_ctx(m, g, Field(g), Field(g));

    PotentialVec z1{Field(g), Field(g)}, z2{Field(g), Field(g)};
    CHECK(max_abs(energy_density(ctx, z1, z2)) == 0.0);

    Field p = cosine(g, 0.4, 2);
    Field e = energy_density(ctx, {p, Field(g)}, z2);
    Field dp = spectral_derivative(p);
    Field expect = 0.5 * m.rho1 * m.h1 * (dp * dp);
    Field err = e - expect;
    CHECK(max_abs(err) < 1e-12);

    // integral form: quadratic pairings with the layer operators plus the
    // potential-energy term
    std::mt19937 rng(111);
    Field zeta = cosine(g, 0.05, 1);
    Field b = cosine(g, 0.2, 2);
    OperatorContext cx = make_ctx(m, g, zeta, b);
    PotentialVec phi1{random_smooth(g, rng), random_smooth(g, rng)};
    PotentialVec phi2{random_smooth(g, rng), random_smooth(g, rng)};
    double pair = 0.0;
    auto r1 = apply_L1(cx, phi1);
    auto r2 = apply_L2(cx, phi2);
    for (std::size_t j = 0; j < phi1.size(); ++j)
        pair += 0.5 * m.rho1 * integrate(r1[j] * phi1[j]);
    for (std::size_t j = 0; j < phi2.size(); ++j)
        pair += 0.5 * m.rho2 * integrate(r2[j] * phi2[j]);
    pair += 0.5 * (m.rho2 - m.rho1) * m.grav * integrate(zeta * zeta);
    const double direct = integrate(energy_density(cx, phi1, phi2));
    CHECK(direct == doctest::Approx(pair).epsilon(1e-10));
    CHECK(direct >= 0.0);
}

TEST_CASE("energy is zero only at rest") {
    Grid1D g(2.0 * M_PI, 64);
    ModelParams m = base_params(1, {0, 1});
    std::mt19937 rng(113);
    Field zeta = cosine(g, 0.04, 1);
    OperatorContext ctx = make_ctx(m, g, zeta, Field(g));
    PotentialVec phi1{random_smooth(g, rng), random_smooth(g, rng)};
    PotentialVec phi2{random_smooth(g, rng), random_smooth(g, rng)};
    CHECK(integrate(energy_density(ctx, phi1, phi2)) > 0.0);
}

TEST_CASE("energy flux vanishes without potential rates") {
    Grid1D g(2.0 * M_PI, 64);
    ModelParams m = base_params(1, {0, 1});
    std::mt19937 rng(117);
    OperatorContext ctx = make_ctx(m, g, cosine(g, 0.05, 1), Field(g));
    PotentialVec phi1{random_smooth(g, rng), random_smooth(g, rng)};
    PotentialVec phi2{random_smooth(g, rng), random_smooth(g, rng)};
    PotentialVec zr1{Field(g), Field(g)}, zr2{Field(g), Field(g)};
    CHECK(max_abs(energy_flux(ctx, phi1, phi2, zr1, zr2)) == 0.0);
    CHECK(max_abs(energy_flux(ctx, zr1, zr2, zr1, zr2)) == 0.0);
}

TEST_CASE("canonical trace") {
    Grid1D g(2.0 * M_PI, 64);
    ModelParams m = base_params(1, {0, 1});
    OperatorContext ctx = make_ctx(m, g, cosine(g, 0.05, 1), Field(g));

    const double c1 = 0.7, c2 = -0.4;
    Field tr = canonical_phi(ctx, {Field(g, c1), Field(g)},
                             {Field(g, c2), Field(g)});
    Field err = tr - Field(g, m.rho2 * c2 - m.rho1 * c1);
    CHECK(max_abs(err) < 1e-13);

    NumericsConfig num = base_num(g.length, g.points);
    CanonicalState canon{cosine(g, 0.05, 1), cosine(g, 0.2, 1, 0.3)};
    State s = prepare_initial_data(m, num, canon, Field(g));
    OperatorContext cx = make_ctx(m, g, s.zeta, Field(g));
    Field back = canonical_phi(cx, s.phi1, s.phi2);
    Field rerr = back - canon.phi;
    CHECK(max_abs(rerr) <= 10 * num.cg_tol);
}

TEST_CASE("momentum requires a flat bottom") {
    Grid1D g(2.0 * M_PI, 64);
    ModelParams m = base_params(1, {0, 1});
    Field b = cosine(g, 0.1, 1);
    OperatorContext ctx = make_ctx(m, g, Field(g), b);
    PotentialVec z1{Field(g), Field(g)}, z2{Field(g), Field(g)};
    CHECK_THROWS_AS(
        (void)momentum_and_flux(ctx, z1, z2, Field(g), z1, z2),
        FlatBottomRequired);
}

TEST_CASE("momentum density basics") {
    Grid1D g(2.0 * M_PI, 64);
    ModelParams m = base_params(1, {0, 1});
    OperatorContext ctx = make_ctx(m, g, Field(g), Field(g));
    std::mt19937 rng(119);
    PotentialVec phi1{random_smooth(g, rng), random_smooth(g, rng)};
    PotentialVec phi2{random_smooth(g, rng), random_smooth(g, rng)};
    // zeta = 0 kills the density regardless of the potentials
    auto mp = momentum_and_flux(ctx, phi1, phi2, Field(g), phi1, phi2);
    CHECK(max_abs(mp.density) == 0.0);
}

TEST_CASE("Hamiltonian: zero, quadratic scaling, gauge invariance") {
    Grid1D g(2.0 * M_PI, 64);
    ModelParams m = base_params(1, {0, 2});
    NumericsConfig num = base_num(g.length, g.points);
    Field b(g);

    CHECK(std::abs(hamiltonian_value(m, num, {Field(g), Field(g)}, b)) <
          1e-14);

    Field phi = cosine(g, 0.3, 1, 0.2);
    const double h1v = hamiltonian_value(m, num, {Field(g), phi}, b);
    const double h2v = hamiltonian_value(m, num, {Field(g), phi * 2.0}, b);
    CHECK(h2v == doctest::Approx(4.0 * h1v).epsilon(1e-11));

    Field shifted = phi + Field(g, 5.0);
    const double h3v = hamiltonian_value(m, num, {Field(g), shifted}, b);
    CHECK(h3v == doctest::Approx(h1v).epsilon(1e-10));
}

TEST_CASE("energy equals Hamiltonian on constraint-consistent states") {
    Grid1D g(2.0 * M_PI, 96);
    ModelParams m = base_params(1, {0, 2});
    NumericsConfig num = base_num(g.length, g.points);
    Field b = cosine(g, 0.15, 2);
    CanonicalState canon{cosine(g, 0.04, 1), cosine(g, 0.1, 1, 0.6)};
    State s = prepare_initial_data(m, num, canon, b);
    SeriesRow row = diagnostics_row(m, num, s, b, 0.0);
    CHECK(row.energy ==
          doctest::Approx(row.hamiltonian).epsilon(1e-10));
    CHECK(std::isnan(row.momentum)); // disabled over topography
    CHECK(row.min_H1 > 0.0);
}

TEST_CASE("variational derivatives match finite differences") {
    Grid1D g(2.0 * M_PI, 64);
    ModelParams m = base_params(1, {0, 2});
    NumericsConfig num = base_num(g.length, g.points);
    Field b(g);

    // rest state: both directional derivatives vanish
    auto rest = variational_derivative_check(
        m, num, {Field(g), Field(g)}, b, cosine(g, 1.0, 1), cosine(g, 1.0, 2));
    CHECK(rest.err_phi_direction < 1e-8);

    std::mt19937 rng(127);
    CanonicalState canon{random_smooth(g, rng, 2, 0.02),
                         random_smooth(g, rng, 2, 0.05)};
    auto chk = variational_derivative_check(m, num, canon, b,
                                            cosine(g, 1.0, 1, 0.3),
                                            cosine(g, 1.0, 2, 0.9));
    CHECK(chk.err_phi_direction < 1e-5);
    CHECK(chk.err_zeta_direction < 1e-5);
    CHECK(chk.err_energy_phi1 < 1e-5);
}
