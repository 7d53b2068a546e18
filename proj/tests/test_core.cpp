//==============================================================================
// test_core.cpp
// Grid, spectral calculus, configuration parsing, and CSV round trips.
//==============================================================================
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kakinuma/csvio.hpp"
#include "kakinuma/errors.hpp"
#include "kakinuma/params.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace kakinuma;

namespace {

Field sampled(const Grid1D& g, double (*fn)(double)) {
    Field f(g);
    for (int i = 0; i < g.points; ++i) f.v[i] = fn(g.node(i));
    return f;
}

Field random_smooth(const Grid1D& g, std::mt19937& rng, int modes = 5,
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

} // namespace

TEST_CASE("spectral derivative on resolved modes") {
    Grid1D g(2.0 * M_PI, 64);
    const double k = 2.0 * M_PI / g.length;

    Field f(g), expect(g);
    for (int i = 0; i < g.points; ++i) {
        f.v[i] = std::sin(k * g.node(i));
        expect.v[i] = k * std::cos(k * g.node(i));
    }
    Field df = spectral_derivative(f);
    df -= expect;
    CHECK(max_abs(df) < 1e-13);

    Field c(g, 3.7);
    CHECK(max_abs(spectral_derivative(c, 1)) < 1e-13);
    CHECK(max_abs(spectral_derivative(c, 3)) < 1e-13);

    // second derivative is the eigenvalue -(2k pi/L)^2 on a pure cosine
    const int kk = 5;
    Field f2(g), e2(g);
    for (int i = 0; i < g.points; ++i) {
        double kv = 2.0 * M_PI * kk / g.length;
        f2.v[i] = std::cos(kv * g.node(i));
        e2.v[i] = -kv * kv * std::cos(kv * g.node(i));
    }
    Field d2 = spectral_derivative(f2, 2);
    d2 -= e2;
    CHECK(max_abs(d2) < 1e-11);
}

TEST_CASE("spectral antiderivative") {
    Grid1D g(5.0, 64);
    const double k = 2.0 * M_PI / g.length;

    Field f(g), expect(g);
    for (int i = 0; i < g.points; ++i) {
        f.v[i] = std::cos(k * g.node(i));
        expect.v[i] = std::sin(k * g.node(i)) / k;
    }
    Field a = spectral_antiderivative(f);
    a -= expect;
    CHECK(max_abs(a) < 1e-14);

    CHECK(max_abs(spectral_antiderivative(Field(g))) == 0.0);

    // linearity on a two-mode combination
    Field f2(g), e2(g);
    for (int i = 0; i < g.points; ++i) {
        f2.v[i] = std::cos(k * g.node(i)) + 0.5 * std::cos(2 * k * g.node(i));
        e2.v[i] = std::sin(k * g.node(i)) / k +
                  0.25 * std::sin(2 * k * g.node(i)) / k;
    }
    Field a2 = spectral_antiderivative(f2);
    a2 -= e2;
    CHECK(max_abs(a2) < 1e-14);

    Field bad(g, 1.0);
    CHECK_THROWS_AS((void)spectral_antiderivative(bad), NonZeroMean);
}

TEST_CASE("quadrature") {
    Grid1D g(2.0 * M_PI, 32);
    CHECK(integrate(Field(g, 1.0)) == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
    Field s = sampled(g, [](double x) { return std::sin(x); });
    CHECK(std::abs(integrate(s)) < 1e-14);
    CHECK(integrate(Field(g, -2.5)) ==
          doctest::Approx(-2.5 * 2.0 * M_PI).epsilon(1e-15));
}

TEST_CASE("dealiased products") {
    Grid1D g(2.0 * M_PI, 64);
    Field zero(g);
    Field c = sampled(g, [](double x) { return std::cos(3.0 * x); });
    CHECK(max_abs(multiply_dealiased(zero, c)) == 0.0);

    // cos^2 = (1 + cos 2kx)/2 for a resolved mode
    Field expect = sampled(g, [](double x) { return 0.5 * (1 + std::cos(6.0 * x)); });
    Field p = multiply_dealiased(c, c);
    p -= expect;
    CHECK(max_abs(p) < 1e-14);

    std::mt19937 rng(7);
    Field a = random_smooth(g, rng), b = random_smooth(g, rng);
    Field ab = multiply_dealiased(a, b);
    Field ba = multiply_dealiased(b, a);
    ab -= ba;
    CHECK(max_abs(ab) == 0.0);
}

TEST_CASE("derivative/antiderivative inverse, periodicity, Parseval") {
    Grid1D g(3.0, 128);
    std::mt19937 rng(11);
    Field f = random_smooth(g, rng, 20);
    const double m = mean(f);
    for (double& x : f.v) x -= m;

    Field back = spectral_derivative(spectral_antiderivative(f));
    back -= f;
    CHECK(max_abs(back) < 1e-12 * (1.0 + max_abs(f)));

    Field any = random_smooth(g, rng, 30);
    CHECK(std::abs(integrate(spectral_derivative(any))) < 1e-12);

    // Parseval: integrate(f^2) equals the squared spectral norm
    auto spec = to_spectrum(any);
    const int M = g.points;
    double norm2 = std::norm(spec[0]);
    for (int k = 1; k < M / 2; ++k) norm2 += 2.0 * std::norm(spec[k]);
    norm2 += std::norm(spec[M / 2]);
    norm2 *= g.length;
    CHECK(integrate(any * any) == doctest::Approx(norm2).epsilon(1e-12));
}

TEST_CASE("low-pass filter and filtered powers") {
    Grid1D g(2.0 * M_PI, 96); // cutoff |k| > 32
    Field lo = sampled(g, [](double x) { return std::cos(7.0 * x); });
    Field hi = sampled(g, [](double x) { return std::cos(40.0 * x); });
    Field flo = low_pass_filter(lo);
    flo -= lo;
    CHECK(max_abs(flo) < 1e-13);
    CHECK(max_abs(low_pass_filter(hi)) < 1e-13);

    // pow_filtered equals the raw power when the result is resolved
    Field base = sampled(g, [](double x) { return 2.0 + 0.1 * std::cos(3.0 * x); });
    Field raw(g);
    for (int i = 0; i < g.points; ++i) raw.v[i] = std::pow(base.v[i], 3);
    Field filt = pow_filtered(base, 3);
    filt -= raw;
    CHECK(max_abs(filt) < 1e-12);
}

static const char* kGoodConfig = R"json({
  "rho1": 1.0, "rho2": 2.0, "h1": 1.0, "h2": 3.0, "g": 9.81,
  "N": 1, "p_list": [0, 2],
  "L": 6.0, "M": 64,
  "bottom": {"type": "cosine", "amplitude": 0.1, "mode": 2},
  "dt": 0.01, "t_end": 0.1, "epsilon": 0.0,
  "cg_tol": 1e-11, "cg_max_iter": 300,
  "h_min": 1e-5, "margin_min": 0.5, "output_every": 2
})json";

TEST_CASE("config parsing") {
    Config cfg = parse_config(kGoodConfig);
    CHECK(cfg.model.rho2 == 2.0);
    CHECK(cfg.model.N == 1);
    CHECK(cfg.model.p_list == std::vector<int>{0, 2});
    CHECK(cfg.num.bottom.type == BottomSpec::Type::Cosine);
    CHECK(cfg.num.bottom.mode == 2);
    CHECK(cfg.num.cg_max_iter == 300);
    CHECK(cfg.num.output_every == 2);

    // round trip through the resolved-config serialization
    Config again = parse_config(resolved_config_json(cfg));
    CHECK(resolved_config_json(again) == resolved_config_json(cfg));
}

TEST_CASE("config rejects unknown and malformed input") {
    std::string with_unknown(kGoodConfig);
    with_unknown.insert(with_unknown.rfind('}'), ", \"speling\": 1");
    try {
        parse_config(with_unknown);
        FAIL("unknown key accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("speling") != std::string::npos);
    }

    CHECK_THROWS_AS((void)parse_config("{ not json"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("{}"), ConfigError);

    std::string bad_bottom(kGoodConfig);
    auto pos = bad_bottom.find("\"mode\": 2");
    bad_bottom.insert(pos, "\"tilt\": 1, ");
    CHECK_THROWS_AS((void)parse_config(bad_bottom), ConfigError);

    std::string inverted(kGoodConfig);
    inverted.replace(inverted.find("\"rho2\": 2.0"), 11, "\"rho2\": 0.5");
    CHECK_THROWS_AS((void)parse_config(inverted), ConfigError);
}

TEST_CASE("bottom sampling is mean-free") {
    Grid1D g(4.0, 64);
    BottomSpec spec;
    spec.type = BottomSpec::Type::Cosine;
    spec.amplitude = 0.2;
    spec.mode = 3;
    Field b = make_bottom(spec, g);
    CHECK(std::abs(mean(b)) < 1e-15);
    CHECK(max_abs(b) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(max_abs(make_bottom(BottomSpec{}, g)) == 0.0);
}

TEST_CASE("csv round trip is byte-identical") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "kakinuma_csv_test";
    fs::create_directories(dir);

    Table t;
    t.header = {"x", "y"};
    t.rows = {{0.1, -1.0 / 3.0}, {1e-17, 12345.678901234567}};
    const std::string p1 = (dir / "a.csv").string();
    const std::string p2 = (dir / "b.csv").string();
    write_csv(p1, t);
    Table back = read_csv(p1);
    CHECK(back.header == t.header);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[1][1] == t.rows[1][1]); // exact double round trip
    write_csv(p2, back);

    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CHECK(back.column("y") == 1);
    CHECK(back.column("z") == -1);
}

TEST_CASE("state csv round trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "kakinuma_csv_test";
    fs::create_directories(dir);

    Grid1D g(2.0, 16);
    ModelParams params;
    params.rho1 = 1;
    params.rho2 = 2;
    params.h1 = 1;
    params.h2 = 1;
    params.grav = 9.81;
    params.N = 1;
    params.p_list = {0, 2};

    std::mt19937 rng(3);
    State s{random_smooth(g, rng, 3, 0.01),
            {random_smooth(g, rng, 3), random_smooth(g, rng, 3)},
            {random_smooth(g, rng, 3), random_smooth(g, rng, 3)}};
    const std::string path = (dir / "state.csv").string();
    write_state_csv(path, s);
    State back = read_state_csv(path, g, params);
    Field dz = back.zeta - s.zeta;
    CHECK(max_abs(dz) == 0.0);
    for (int j = 0; j < 2; ++j) {
        Field d1 = back.phi1[j] - s.phi1[j];
        Field d2 = back.phi2[j] - s.phi2[j];
        CHECK(max_abs(d1) == 0.0);
        CHECK(max_abs(d2) == 0.0);
    }
}
