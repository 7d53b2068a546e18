//==============================================================================
// params.hpp
// Physical and numerical configuration: two-layer model parameters, bottom
// topography description, simulation settings, and strict JSON loading.
//==============================================================================
#pragma once

#include "kakinuma/grid.hpp"

#include <string>
#include <vector>

namespace kakinuma {

// Bottom topography of the lower layer (zero-mean by construction).
struct BottomSpec {
    enum class Type { Flat, Cosine };
    Type type = Type::Flat;
    double amplitude = 0.0; // cosine amplitude
    int mode = 1;           // cosine mode number on the periodic domain
};

// Physical parameters of the two-layer system.  Layer 1 is the upper layer
// (depth h1 below the rigid lid), layer 2 the lower layer (depth h2 above the
// bottom); densities satisfy 0 < rho1 < rho2 (stable stratification).
struct ModelParams {
    double rho1 = 0.0, rho2 = 0.0;
    double h1 = 0.0, h2 = 0.0;
    double grav = 0.0;
    int N = 0;                     // upper-layer expansion order
    std::vector<int> p_list = {0}; // lower-layer vertical exponents, p0 = 0

    int Nstar() const { return static_cast<int>(p_list.size()) - 1; }
    void validate() const; // throws ConfigError
};

// Time-stepping scheme: evolve the canonical pair (zeta, phi) and re-solve the
// constraint system each stage, or evolve every expansion coefficient.
enum class Scheme { Canonical, Direct };

// Numerical / run configuration.
struct NumericsConfig {
    double L = 0.0;
    int M = 0;
    BottomSpec bottom;
    double dt = 0.0;
    double t_end = 0.0;
    double epsilon = 0.0;       // parabolic regularization strength
    double cg_tol = 1e-10;
    int cg_max_iter = 500;
    double h_min = 1e-6;        // non-cavitation floor for both thicknesses
    double margin_min = 0.0;    // abort threshold for the stability margin
    int output_every = 1;
    Scheme scheme = Scheme::Canonical; // CLI override, not a config-file key
    int reproject_every = 10;          // direct scheme only; CLI override
};

struct Config {
    ModelParams model;
    NumericsConfig num;
};

// Strict JSON loading: unknown keys are rejected with the offending key named.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);
std::string resolved_config_json(const Config& cfg); // round-trip for manifests

// Sample the bottom topography on a grid (always mean-free).
Field make_bottom(const BottomSpec& spec, const Grid1D& g);

} // namespace kakinuma
