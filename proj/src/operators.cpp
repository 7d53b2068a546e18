//==============================================================================
// operators.cpp
// Implementation of the discrete layer operators and pointwise block solves.
//==============================================================================
#include "kakinuma/operators.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace kakinuma {

namespace {

// 0/0 = 0 convention for exponent-ratio coefficients.
double ratio0(double num, double den) { return num == 0.0 ? 0.0 : num / den; }

} // namespace

Geometry make_geometry(const ModelParams& params, const Field& zeta, const Field& b,
                       double h_min) {
    Geometry g;
    g.zeta = zeta;
    g.b = b;
    g.H1 = Field(zeta.grid);
    g.H2 = Field(zeta.grid);
    for (int i = 0; i < zeta.size(); ++i) {
        g.H1[i] = params.h1 - zeta[i];
        g.H2[i] = params.h2 + zeta[i] - b[i];
        if (g.H1[i] < h_min || g.H2[i] < h_min)
            throw NonCavitation("layer thickness fell below h_min");
    }
    return g;
}

OperatorContext::OperatorContext(const ModelParams& params_, const Geometry& geom_)
    : params(params_), grid(geom_.zeta.grid), geom(geom_) {
    db = spectral_derivative(geom.b);
    one_plus_db2 = Field(grid, 1.0);
    for (int i = 0; i < grid.points; ++i) one_plus_db2[i] += db[i] * db[i];

    const int max1 = 4 * params.N + 1;
    const int p_max = params.p_list.back();
    const int max2 = 2 * p_max + 1;
    h1f_.reserve(max1 + 1);
    h2f_.reserve(max2 + 1);
    for (int p = 0; p <= max1; ++p) h1f_.push_back(pow_filtered(geom.H1, p));
    for (int p = 0; p <= max2; ++p) h2f_.push_back(pow_filtered(geom.H2, p));

    auto raw_pow = [](const Field& base, int p) {
        Field out(base.grid, 1.0);
        for (int i = 0; i < base.size(); ++i) out[i] = std::pow(base[i], p);
        return out;
    };
    h1r_.reserve(max1 + 1);
    h2r_.reserve(max2 + 1);
    for (int p = 0; p <= max1; ++p) h1r_.push_back(raw_pow(geom.H1, p));
    for (int p = 0; p <= max2; ++p) h2r_.push_back(raw_pow(geom.H2, p));
}

PotentialVec apply_L1(const OperatorContext& ctx, const PotentialVec& phi1) {
    const int N = ctx.params.N;
    PotentialVec rows(N + 1, Field(ctx.grid));
    std::vector<Field> dphi(N + 1);
    for (int j = 0; j <= N; ++j) dphi[j] = spectral_derivative(phi1[j]);

    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            // -d/dx( H1^{2(i+j)+1}/(2(i+j)+1) · dphi_j )
            Field flux = ctx.H1f(2 * (i + j) + 1) * dphi[j];
            flux *= 1.0 / (2 * (i + j) + 1);
            rows[i] -= spectral_derivative(flux);
            // + 4ij/(2(i+j)-1) · H1^{2(i+j)-1} · phi_j
            const double c = ratio0(4.0 * i * j, 2 * (i + j) - 1);
            if (c != 0.0) rows[i] += c * (ctx.H1f(2 * (i + j) - 1) * phi1[j]);
        }
    }
    return rows;
}

PotentialVec apply_L2(const OperatorContext& ctx, const PotentialVec& phi2) {
    const auto& p = ctx.params.p_list;
    const int Ns = ctx.params.Nstar();
    PotentialVec rows(Ns + 1, Field(ctx.grid));
    std::vector<Field> dphi(Ns + 1);
    for (int j = 0; j <= Ns; ++j) dphi[j] = spectral_derivative(phi2[j]);

    for (int i = 0; i <= Ns; ++i) {
        for (int j = 0; j <= Ns; ++j) {
            const int pi = p[i], pj = p[j];
            // -d/dx( H2^{pi+pj+1}/(pi+pj+1)·dphi_j - pj/(pi+pj)·H2^{pi+pj}·phi_j·b' )
            Field flux = ctx.H2f(pi + pj + 1) * dphi[j];
            flux *= 1.0 / (pi + pj + 1);
            const double cb = ratio0(double(pj), pi + pj);
            if (cb != 0.0) flux -= cb * (ctx.H2f(pi + pj) * phi2[j] * ctx.db);
            rows[i] -= spectral_derivative(flux);
            // - pi/(pi+pj)·H2^{pi+pj}·b'·dphi_j
            const double cg = ratio0(double(pi), pi + pj);
            if (cg != 0.0) rows[i] -= cg * (ctx.H2f(pi + pj) * ctx.db * dphi[j]);
            // + pi·pj/(pi+pj-1)·H2^{pi+pj-1}·(1+b'^2)·phi_j
            const double cm = ratio0(double(pi) * pj, pi + pj - 1);
            if (cm != 0.0)
                rows[i] += cm * (ctx.H2f(pi + pj - 1) * ctx.one_plus_db2 * phi2[j]);
        }
    }
    return rows;
}

PotentialVec constraint_rows_L1(const OperatorContext& ctx, const PotentialVec& rows) {
    PotentialVec out = rows;
    for (int i = 1; i < static_cast<int>(rows.size()); ++i)
        out[i] -= ctx.H1f(2 * i) * rows[0];
    return out;
}

PotentialVec constraint_rows_L2(const OperatorContext& ctx, const PotentialVec& rows) {
    PotentialVec out = rows;
    for (int i = 1; i < static_cast<int>(rows.size()); ++i)
        out[i] -= ctx.H2f(ctx.params.p_list[i]) * rows[0];
    return out;
}

FieldVec apply_compat(const OperatorContext& ctx, const PotentialVec& phi1,
                      const PotentialVec& phi2) {
    const auto c1 = constraint_rows_L1(ctx, apply_L1(ctx, phi1));
    const auto c2 = constraint_rows_L2(ctx, apply_L2(ctx, phi2));
    FieldVec out;
    out.reserve(ctx.params.N + ctx.params.Nstar() + 1);
    for (int i = 1; i <= ctx.params.N; ++i) out.push_back(c1[i]);
    for (int i = 1; i <= ctx.params.Nstar(); ++i) out.push_back(c2[i]);
    out.push_back(c1[0] + c2[0]);
    return out;
}

LayerVectors layer_vectors(const OperatorContext& ctx) {
    const int N = ctx.params.N;
    const int Ns = ctx.params.Nstar();
    const auto& p = ctx.params.p_list;
    LayerVectors lv;
    lv.l1.reserve(N + 1);
    lv.dl1.reserve(N + 1);
    for (int j = 0; j <= N; ++j) {
        lv.l1.push_back(ctx.H1r(2 * j));
        lv.dl1.push_back(j == 0 ? Field(ctx.grid) : 2.0 * j * ctx.H1r(2 * j - 1));
    }
    lv.l2.reserve(Ns + 1);
    lv.dl2.reserve(Ns + 1);
    for (int j = 0; j <= Ns; ++j) {
        lv.l2.push_back(ctx.H2r(p[j]));
        lv.dl2.push_back(p[j] == 0 ? Field(ctx.grid) : double(p[j]) * ctx.H2r(p[j] - 1));
    }
    return lv;
}

InterfaceVelocities interface_velocities(const OperatorContext& ctx,
                                         const PotentialVec& phi1,
                                         const PotentialVec& phi2) {
    const int N = ctx.params.N;
    const int Ns = ctx.params.Nstar();
    const auto& p = ctx.params.p_list;
    InterfaceVelocities iv{Field(ctx.grid), Field(ctx.grid), Field(ctx.grid),
                           Field(ctx.grid)};
    for (int j = 0; j <= N; ++j) {
        iv.u1 += ctx.H1r(2 * j) * spectral_derivative(phi1[j]);
        if (j > 0) iv.w1 -= 2.0 * j * (ctx.H1r(2 * j - 1) * phi1[j]);
    }
    for (int j = 0; j <= Ns; ++j) {
        iv.u2 += ctx.H2r(p[j]) * spectral_derivative(phi2[j]);
        if (p[j] > 0) {
            Field t = double(p[j]) * (ctx.H2r(p[j] - 1) * phi2[j]);
            iv.u2 -= t * ctx.db;
            iv.w2 += t;
        }
    }
    return iv;
}

CommutatorCoefficients commutator_f(const OperatorContext& ctx,
                                    const PotentialVec& phi1,
                                    const PotentialVec& phi2) {
    const int N = ctx.params.N;
    const int Ns = ctx.params.Nstar();
    const auto& p = ctx.params.p_list;
    CommutatorCoefficients cf;
    cf.f1.assign(N + 1, Field(ctx.grid));
    cf.f2.assign(Ns + 1, Field(ctx.grid));

    std::vector<Field> lap1(N + 1), lap2(Ns + 1), d2(Ns + 1);
    for (int j = 0; j <= N; ++j) lap1[j] = spectral_derivative(phi1[j], 2);
    for (int j = 0; j <= Ns; ++j) {
        lap2[j] = spectral_derivative(phi2[j], 2);
        d2[j] = spectral_derivative(phi2[j]);
    }

    for (int i = 1; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            cf.f1[i] -= (2.0 * i / (2 * j + 1)) * (ctx.H1f(2 * (i + j)) * lap1[j]);
            const double c = 4.0 * i * j;
            if (c != 0.0) cf.f1[i] -= c * (ctx.H1f(2 * (i + j - 1)) * phi1[j]);
        }
    }
    for (int i = 1; i <= Ns; ++i) {
        const int pi = p[i];
        for (int j = 0; j <= Ns; ++j) {
            const int pj = p[j];
            cf.f2[i] += (double(pi) / (pj + 1)) * (ctx.H2f(pi + pj) * lap2[j]);
            if (pj != 0) {
                // - pi·pj/pj · H2^{pi+pj-1} · d/dx(phi_j·b')  (0/0 = 0 on pj)
                Field div = spectral_derivative(phi2[j] * ctx.db);
                cf.f2[i] -= double(pi) * (ctx.H2f(pi + pj - 1) * div);
                cf.f2[i] += double(pi) * pj *
                            (ctx.H2f(pi + pj - 2) * ctx.one_plus_db2 * phi2[j]);
            }
            cf.f2[i] -= double(pi) * (ctx.H2f(pi + pj - 1) * ctx.db * d2[j]);
        }
    }
    return cf;
}

BlockInverse block_inverse(const OperatorContext& ctx) {
    const int N = ctx.params.N;
    const int Ns = ctx.params.Nstar();
    const auto& p = ctx.params.p_list;
    const int n1 = N + 1, n2 = Ns + 1;
    const int dim = 1 + n1 + n2;
    const double rho1 = ctx.params.rho1, rho2 = ctx.params.rho2;

    BlockInverse out;
    out.q0 = Field(ctx.grid);
    out.q1.assign(n1, Field(ctx.grid));
    out.q2.assign(n2, Field(ctx.grid));

    Eigen::MatrixXd Mmat(dim, dim);
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(dim);
    e0(0) = 1.0;

    for (int x = 0; x < ctx.grid.points; ++x) {
        const double H1v = ctx.geom.H1[x];
        const double H2v = ctx.geom.H2[x];
        Mmat.setZero();
        for (int j = 0; j < n1; ++j) {
            const double l1j = std::pow(H1v, 2 * j);
            Mmat(0, 1 + j) = -rho1 * l1j;
            Mmat(1 + j, 0) = -rho1 * l1j;
        }
        for (int j = 0; j < n2; ++j) {
            const double l2j = std::pow(H2v, p[j]);
            Mmat(0, 1 + n1 + j) = rho2 * l2j;
            Mmat(1 + n1 + j, 0) = rho2 * l2j;
        }
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n1; ++j)
                Mmat(1 + i, 1 + j) =
                    rho1 * std::pow(H1v, 2 * (i + j) + 1) / (2 * (i + j) + 1);
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n2; ++j)
                Mmat(1 + n1 + i, 1 + n1 + j) =
                    rho2 * std::pow(H2v, p[i] + p[j] + 1) / (p[i] + p[j] + 1);

        Eigen::FullPivLU<Eigen::MatrixXd> lu(Mmat);
        if (!lu.isInvertible())
            throw SingularBlock("pointwise bordered block matrix is singular");
        const Eigen::VectorXd q = lu.solve(e0);
        out.q0[x] = q(0);
        for (int j = 0; j < n1; ++j) out.q1[j][x] = q(1 + j);
        for (int j = 0; j < n2; ++j) out.q2[j][x] = q(1 + n1 + j);
    }
    return out;
}

} // namespace kakinuma
