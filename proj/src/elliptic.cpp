//==============================================================================
// elliptic.cpp
// Constraint-system solver: packed operator application, flat-geometry Fourier
// preconditioner, preconditioned conjugate gradients, and reconstruction.
//==============================================================================
#include "kakinuma/elliptic.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace kakinuma {

namespace {

double ratio0(double num, double den) { return num == 0.0 ? 0.0 : num / den; }

// Lift a tail vector (components 1..) to a full potential vector whose zeroth
// component encodes subtraction of the thickness-weighted tail; applying the
// full operator rows to the lift realizes the reduced blocks.
PotentialVec lift_upper(const OperatorContext& ctx, const FieldVec& tail) {
    const int N = ctx.params.N;
    PotentialVec psi(N + 1, Field(ctx.grid));
    for (int j = 1; j <= N; ++j) {
        psi[j] = tail[j - 1];
        psi[0] -= ctx.H1f(2 * j) * tail[j - 1];
    }
    return psi;
}

PotentialVec lift_lower(const OperatorContext& ctx, const FieldVec& tail) {
    const int Ns = ctx.params.Nstar();
    PotentialVec psi(Ns + 1, Field(ctx.grid));
    for (int j = 1; j <= Ns; ++j) {
        psi[j] = tail[j - 1];
        psi[0] -= ctx.H2f(ctx.params.p_list[j]) * tail[j - 1];
    }
    return psi;
}

// Scalar (Fourier-symbol) versions of the blocks at flat geometry.
struct FlatSymbols {
    double h1, h2, rho1, rho2;
    int N, Ns;
    const std::vector<int>* p;

    double L1(int i, int j, double k2) const {
        return k2 * std::pow(h1, 2 * (i + j) + 1) / (2 * (i + j) + 1) +
               ratio0(4.0 * i * j, 2 * (i + j) - 1) * std::pow(h1, 2 * (i + j) - 1);
    }
    double L2(int i, int j, double k2) const {
        const int pi = (*p)[i], pj = (*p)[j];
        return k2 * std::pow(h2, pi + pj + 1) / (pi + pj + 1) +
               ratio0(double(pi) * pj, pi + pj - 1) * std::pow(h2, pi + pj - 1);
    }
    double E1(int j) const { return std::pow(h1, 2 * j); }
    double E2(int j) const { return std::pow(h2, (*p)[j]); }
};

// Assemble the packed-operator symbol matrix for one squared wavenumber.
Eigen::MatrixXd symbol_matrix(const FlatSymbols& s, double k2) {
    const int K = s.N + s.Ns + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
    for (int i = 1; i <= s.N; ++i) {
        for (int j = 1; j <= s.N; ++j)
            A(i - 1, j - 1) = s.rho1 * (s.L1(i, j, k2) - s.E1(i) * s.L1(0, j, k2) -
                                        s.L1(i, 0, k2) * s.E1(j) +
                                        s.E1(i) * s.L1(0, 0, k2) * s.E1(j));
        A(i - 1, K - 1) = s.rho1 * (s.L1(i, 0, k2) - s.E1(i) * s.L1(0, 0, k2));
        A(K - 1, i - 1) = s.rho1 * (s.L1(0, i, k2) - s.L1(0, 0, k2) * s.E1(i));
    }
    for (int i = 1; i <= s.Ns; ++i) {
        for (int j = 1; j <= s.Ns; ++j)
            A(s.N + i - 1, s.N + j - 1) =
                s.rho2 * (s.L2(i, j, k2) - s.E2(i) * s.L2(0, j, k2) -
                          s.L2(i, 0, k2) * s.E2(j) + s.E2(i) * s.L2(0, 0, k2) * s.E2(j));
        A(s.N + i - 1, K - 1) = s.rho1 * (s.L2(i, 0, k2) - s.E2(i) * s.L2(0, 0, k2));
        A(K - 1, s.N + i - 1) = s.rho1 * (s.L2(0, i, k2) - s.L2(0, 0, k2) * s.E2(i));
    }
    A(K - 1, K - 1) = s.rho1 * (s.L1(0, 0, k2) + (s.rho1 / s.rho2) * s.L2(0, 0, k2));
    return A;
}

// Exact Fourier inverse of the flat-geometry operator; the k = 0 block is
// inverted on the complement of the null slot (the combined potential).
struct Preconditioner {
    std::vector<Eigen::MatrixXd> inv; // one (K x K) matrix per mode 0..M/2
    int K = 0;

    Preconditioner(const OperatorContext& ctx) {
        const ModelParams& P = ctx.params;
        FlatSymbols s{P.h1, P.h2, P.rho1, P.rho2, P.N, P.Nstar(), &P.p_list};
        K = P.N + P.Nstar() + 1;
        const int M = ctx.grid.points;
        const double k0 = 2.0 * M_PI / ctx.grid.length;
        inv.reserve(M / 2 + 1);
        for (int k = 0; k <= M / 2; ++k) {
            const double k2 = (k0 * k) * (k0 * k);
            Eigen::MatrixXd A = symbol_matrix(s, k2);
            Eigen::MatrixXd Ainv(K, K);
            if (k == 0) {
                Ainv.setZero();
                if (K > 1)
                    Ainv.topLeftCorner(K - 1, K - 1) =
                        A.topLeftCorner(K - 1, K - 1).inverse();
            } else {
                Ainv = A.inverse();
            }
            inv.push_back(std::move(Ainv));
        }
    }

    PackedVec apply(const OperatorContext& ctx, const PackedVec& r) const {
        const int M = ctx.grid.points;
        std::vector<std::vector<std::complex<double>>> spec(K);
        for (int c = 0; c < K; ++c) spec[c] = to_spectrum(r[c]);
        std::vector<std::vector<std::complex<double>>> out(
            K, std::vector<std::complex<double>>(M / 2 + 1, 0.0));
        for (int k = 0; k <= M / 2; ++k) {
            const Eigen::MatrixXd& A = inv[k];
            for (int i = 0; i < K; ++i) {
                std::complex<double> acc = 0.0;
                for (int j = 0; j < K; ++j) acc += A(i, j) * spec[j][k];
                out[i][k] = acc;
            }
        }
        PackedVec z;
        z.reserve(K);
        for (int c = 0; c < K; ++c) z.push_back(from_spectrum(ctx.grid, out[c]));
        return z;
    }
};

double packed_dot(const PackedVec& a, const PackedVec& b) {
    double s = 0.0;
    for (size_t c = 0; c < a.size(); ++c)
        for (int i = 0; i < a[c].size(); ++i) s += a[c][i] * b[c][i];
    return s;
}

void packed_axpy(PackedVec& y, double alpha, const PackedVec& x) {
    for (size_t c = 0; c < y.size(); ++c)
        for (int i = 0; i < y[c].size(); ++i) y[c][i] += alpha * x[c][i];
}

} // namespace

PackedVec apply_P_operator(const OperatorContext& ctx, const PackedVec& v) {
    const int N = ctx.params.N;
    const int Ns = ctx.params.Nstar();
    const int K = N + Ns + 1;
    const double rho1 = ctx.params.rho1, rho2 = ctx.params.rho2;

    FieldVec tail1(v.begin(), v.begin() + N);
    FieldVec tail2(v.begin() + N, v.begin() + N + Ns);
    const Field& varphi = v[K - 1];

    const PotentialVec r1 = apply_L1(ctx, lift_upper(ctx, tail1));
    const PotentialVec r2 = apply_L2(ctx, lift_lower(ctx, tail2));

    PotentialVec one1(N + 1, Field(ctx.grid));
    one1[0] = varphi;
    PotentialVec one2(Ns + 1, Field(ctx.grid));
    one2[0] = varphi;
    const PotentialVec s1 = apply_L1(ctx, one1);
    const PotentialVec s2 = apply_L2(ctx, one2);

    PackedVec out(K, Field(ctx.grid));
    for (int i = 1; i <= N; ++i) {
        out[i - 1] = rho1 * (r1[i] - ctx.H1f(2 * i) * r1[0]);
        out[i - 1] += rho1 * (s1[i] - ctx.H1f(2 * i) * s1[0]);
    }
    for (int i = 1; i <= Ns; ++i) {
        const int pi = ctx.params.p_list[i];
        out[N + i - 1] = rho2 * (r2[i] - ctx.H2f(pi) * r2[0]);
        out[N + i - 1] += rho1 * (s2[i] - ctx.H2f(pi) * s2[0]);
    }
    out[K - 1] = rho1 * (r1[0] + r2[0]) + rho1 * (s1[0] + (rho1 / rho2) * s2[0]);
    return out;
}

EllipticSolution solve_compatibility(const OperatorContext& ctx, const EllipticRHS& rhs,
                                     double cg_tol, int cg_max_iter) {
    const int N = ctx.params.N;
    const int Ns = ctx.params.Nstar();
    const int K = N + Ns + 1;
    const double rho1 = ctx.params.rho1, rho2 = ctx.params.rho2;

    // Reduce the right-hand side: fold the weighted-trace datum f4 into the
    // lower rows (through the adjoint zero-row block) and the combined row.
    PotentialVec f4vec(Ns + 1, Field(ctx.grid));
    f4vec[0] = rhs.f4;
    const PotentialVec sf4 = apply_L2(ctx, f4vec);

    PackedVec b(K, Field(ctx.grid));
    for (int i = 1; i <= N; ++i) b[i - 1] = rho1 * rhs.f1p[i - 1];
    for (int i = 1; i <= Ns; ++i) {
        const int pi = ctx.params.p_list[i];
        b[N + i - 1] = rho2 * rhs.f2p[i - 1];
        b[N + i - 1] -= sf4[i] - ctx.H2f(pi) * sf4[0];
    }
    Field F3 = rhs.f3 + (1.0 / rho2) * (ctx.H2f(1) * spectral_derivative(rhs.f4));
    b[K - 1] = rho1 * spectral_derivative(F3);

    // Preconditioned conjugate gradients on the packed system.
    const Preconditioner prec(ctx);
    PackedVec x(K, Field(ctx.grid));
    PackedVec r = b;
    PackedVec z = prec.apply(ctx, r);
    double rz = packed_dot(r, z);
    const double denom = std::sqrt(std::max(rz, 0.0));
    int iterations = 0;
    double residual = denom > 0.0 ? 1.0 : 0.0;

    if (denom > 0.0) {
        PackedVec p = z;
        for (iterations = 1; iterations <= cg_max_iter; ++iterations) {
            const PackedVec Ap = apply_P_operator(ctx, p);
            const double pAp = packed_dot(p, Ap);
            if (!(pAp > 0.0))
                throw NoConvergence(iterations, residual,
                                    "constraint operator lost positivity in CG");
            const double alpha = rz / pAp;
            packed_axpy(x, alpha, p);
            packed_axpy(r, -alpha, Ap);
            z = prec.apply(ctx, r);
            const double rz_next = packed_dot(r, z);
            residual = std::sqrt(std::max(rz_next, 0.0)) / denom;
            if (residual <= cg_tol) break;
            const double beta = rz_next / rz;
            rz = rz_next;
            for (size_t c = 0; c < p.size(); ++c)
                for (int i = 0; i < p[c].size(); ++i)
                    p[c][i] = z[c][i] + beta * p[c][i];
        }
        if (residual > cg_tol)
            throw NoConvergence(cg_max_iter, residual,
                                "constraint CG did not reach tolerance");
    }

    // Reconstruct the zeroth coefficients and fix the additive gauge.
    EllipticSolution sol;
    sol.iterations = iterations;
    sol.residual = residual;
    sol.phi1.assign(N + 1, Field(ctx.grid));
    sol.phi2.assign(Ns + 1, Field(ctx.grid));
    const Field& varphi = x[K - 1];

    sol.phi1[0] = varphi;
    for (int j = 1; j <= N; ++j) {
        sol.phi1[j] = x[j - 1];
        sol.phi1[0] -= ctx.H1f(2 * j) * sol.phi1[j];
    }
    sol.phi2[0] = (rho1 / rho2) * varphi + (1.0 / rho2) * rhs.f4;
    for (int j = 1; j <= Ns; ++j) {
        sol.phi2[j] = x[N + j - 1];
        sol.phi2[0] -= ctx.H2f(ctx.params.p_list[j]) * sol.phi2[j];
    }

    // Adding c to the combined potential shifts the gauge functional
    // mean(rho1 phi1_0 + rho2 phi2_0) by 2 rho1 c.
    const double gauge = mean(rho1 * sol.phi1[0] + rho2 * sol.phi2[0]);
    const double c = -gauge / (2.0 * rho1);
    for (int i = 0; i < ctx.grid.points; ++i) {
        sol.phi1[0][i] += c;
        sol.phi2[0][i] += (rho1 / rho2) * c;
    }
    return sol;
}

State prepare_initial_data(const ModelParams& params, const NumericsConfig& num,
                           const CanonicalState& canon, const Field& b) {
    const Geometry geom = make_geometry(params, canon.zeta, b, num.h_min);
    const OperatorContext ctx(params, geom);
    EllipticRHS rhs;
    rhs.f1p.assign(params.N, Field(ctx.grid));
    rhs.f2p.assign(params.Nstar(), Field(ctx.grid));
    rhs.f3 = Field(ctx.grid);
    rhs.f4 = canon.phi;
    EllipticSolution sol = solve_compatibility(ctx, rhs, num.cg_tol, num.cg_max_iter);
    return State{canon.zeta, std::move(sol.phi1), std::move(sol.phi2)};
}

} // namespace kakinuma
