//==============================================================================
// grid.cpp
// FFT-backed implementation of the pseudo-spectral calculus.  FFTW plans and
// buffers are cached per (thread, grid size); all public functions are pure.
//==============================================================================
#include "kakinuma/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <numeric>

namespace kakinuma {

namespace {

// One cached real-to-complex transform pair for a given number of points.
struct FftWorkspace {
    int M = 0;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit FftWorkspace(int M_) : M(M_) {
        real = fftw_alloc_real(M);
        spec = fftw_alloc_complex(M / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(M, real, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(M, spec, real, FFTW_ESTIMATE);
    }
    ~FftWorkspace() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
    FftWorkspace(const FftWorkspace&) = delete;
    FftWorkspace& operator=(const FftWorkspace&) = delete;
};

FftWorkspace& workspace(int M) {
    thread_local std::map<int, std::unique_ptr<FftWorkspace>> cache;
    auto& slot = cache[M];
    if (!slot) slot = std::make_unique<FftWorkspace>(M);
    return *slot;
}

} // namespace

Grid1D::Grid1D(double length_, int points_) : length(length_), points(points_) {
    if (!(length > 0.0)) throw ConfigError("grid period must be positive");
    if (points < 8 || points % 2 != 0)
        throw ConfigError("grid needs at least 8 points and an even count");
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> x(points);
    for (int i = 0; i < points; ++i) x[i] = node(i);
    return x;
}

Field& Field::operator+=(const Field& o) {
    for (int i = 0; i < size(); ++i) v[i] += o.v[i];
    return *this;
}
Field& Field::operator-=(const Field& o) {
    for (int i = 0; i < size(); ++i) v[i] -= o.v[i];
    return *this;
}
Field& Field::operator*=(const Field& o) {
    for (int i = 0; i < size(); ++i) v[i] *= o.v[i];
    return *this;
}
Field& Field::operator*=(double s) {
    for (double& x : v) x *= s;
    return *this;
}

std::vector<std::complex<double>> to_spectrum(const Field& f) {
    const int M = f.size();
    FftWorkspace& ws = workspace(M);
    std::memcpy(ws.real, f.v.data(), sizeof(double) * M);
    fftw_execute(ws.fwd);
    std::vector<std::complex<double>> spec(M / 2 + 1);
    for (int k = 0; k <= M / 2; ++k)
        spec[k] = std::complex<double>(ws.spec[k][0], ws.spec[k][1]) / double(M);
    return spec;
}

Field from_spectrum(const Grid1D& g, const std::vector<std::complex<double>>& spec) {
    const int M = g.points;
    FftWorkspace& ws = workspace(M);
    for (int k = 0; k <= M / 2; ++k) {
        ws.spec[k][0] = spec[k].real();
        ws.spec[k][1] = spec[k].imag();
    }
    fftw_execute(ws.bwd); // unnormalized inverse; spectrum was pre-divided by M
    Field out(g);
    std::memcpy(out.v.data(), ws.real, sizeof(double) * M);
    return out;
}

Field spectral_derivative(const Field& f, int order) {
    const int M = f.size();
    const double k0 = 2.0 * M_PI / f.grid.length;
    auto spec = to_spectrum(f);
    for (int k = 0; k <= M / 2; ++k) {
        std::complex<double> ik(0.0, k0 * k);
        spec[k] *= std::pow(ik, order);
    }
    // Zero the Nyquist mode for odd orders: keeps the result real-valued and
    // the first-derivative matrix exactly skew-symmetric.
    if (order % 2 != 0) spec[M / 2] = 0.0;
    return from_spectrum(f.grid, spec);
}

Field spectral_antiderivative(const Field& f, double tol) {
    const double m = mean(f);
    const double scale = rms(f);
    if (scale == 0.0) return Field(f.grid);
    if (std::abs(m) > tol * scale)
        throw NonZeroMean("antiderivative requested for a field with nonzero mean");
    const int M = f.size();
    const double k0 = 2.0 * M_PI / f.grid.length;
    auto spec = to_spectrum(f);
    spec[0] = 0.0;
    for (int k = 1; k < M / 2; ++k) spec[k] /= std::complex<double>(0.0, k0 * k);
    spec[M / 2] = 0.0;
    return from_spectrum(f.grid, spec);
}

double mean(const Field& f) {
    double s = std::accumulate(f.v.begin(), f.v.end(), 0.0);
    return s / f.size();
}

double integrate(const Field& f) { return f.grid.length * mean(f); }

double max_abs(const Field& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double rms(const Field& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s / f.size());
}

Field low_pass_filter(const Field& f) {
    const int M = f.size();
    auto spec = to_spectrum(f);
    const int kcut = M / 3;
    for (int k = kcut + 1; k <= M / 2; ++k) spec[k] = 0.0;
    return from_spectrum(f.grid, spec);
}

Field multiply_dealiased(const Field& f, const Field& g) {
    const int M = f.size();
    const int Mp = 3 * M / 2; // M is even, so Mp is an integer
    const Grid1D fine(f.grid.length, Mp);

    auto pad = [&](const Field& a) {
        auto spec = to_spectrum(a);
        std::vector<std::complex<double>> big(Mp / 2 + 1, 0.0);
        for (int k = 0; k <= M / 2; ++k) big[k] = spec[k];
        return from_spectrum(fine, big);
    };
    Field pf = pad(f), pg = pad(g);
    pf *= pg;
    auto big = to_spectrum(pf);
    std::vector<std::complex<double>> spec(M / 2 + 1);
    for (int k = 0; k <= M / 2; ++k) spec[k] = big[k];
    return from_spectrum(f.grid, spec);
}

Field pow_filtered(const Field& f, int p) {
    Field out(f.grid, 1.0);
    if (p == 0) return out;
    for (int i = 0; i < f.size(); ++i) out.v[i] = std::pow(f.v[i], p);
    return low_pass_filter(out);
}

} // namespace kakinuma
