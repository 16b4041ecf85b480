#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "sobograd/functionals.hpp"
#include "sobograd/oracle.hpp"

using namespace sobograd;
using std::numbers::pi;

namespace {

ComplexField smooth_random_field(const GridPtr& g, std::uint64_t seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    SpectralField F;
    F.grid = g;
    F.coefficients.assign(g->size(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < F.coefficients.size(); ++i)
        F.coefficients[i] = amp * Complex(gauss(rng), gauss(rng)) * std::exp(-0.5 * g->k_squared(i));
    return inverse_transform(F);
}

ComplexField normalized_gaussian(const GridPtr& g) {
    ComplexField f(g);
    int idx[2];
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        g->decompose(i, idx);
        const double x = g->centered_coord(0, idx[0]);
        const double y = g->centered_coord(1, idx[1]);
        f.samples[i] = std::exp(-0.5 * (x * x + y * y)) / std::sqrt(pi);
    }
    return f;
}

double grad_match_error(const std::function<double(const ComplexField&)>& F,
                        const ComplexField& g_analytic, const ComplexField& psi,
                        const ComplexField& d) {
    const double fd = fd_directional_derivative(F, psi, d);
    const double an = 2.0 * inner_product(d, g_analytic).real();
    return std::abs(fd - an) / std::max(1e-8, std::abs(an));
}

}  // namespace

TEST_CASE("gpe_energy of the linear ground state") {
    auto g = make_grid({64, 64}, {16.0, 16.0});
    GpeParams p;  // g = 0, Omega = 0, harmonic trap
    ComplexField psi = normalized_gaussian(g);
    CHECK(std::abs(gpe_energy(psi, p) - 1.0) < 1e-8);

    ComplexField zero(g);
    CHECK(gpe_energy(zero, p) == 0.0);
}

TEST_CASE("gpe_energy in the rotating high-g regime is finite and real") {
    auto g = make_grid({64, 64}, {16.0, 16.0});
    GpeParams p;
    p.g = 100.0;
    p.omega = 0.6;
    ComplexField psi = normalized_gaussian(g);
    const double e = gpe_energy(psi, p);
    CHECK(std::isfinite(e));
    CHECK(e > 0.0);
}

TEST_CASE("gpe_energy rotational and phase invariance") {
    auto g = make_grid({32, 32}, {16.0, 16.0});
    GpeParams p;
    p.g = 2.0;
    ComplexField psi = smooth_random_field(g, 41, 0.3);
    const double e0 = gpe_energy(psi, p);

    // 90-degree lattice rotation (x, y) -> (-y, x) about the center; relies on
    // the potential being radial.
    ComplexField rot(g);
    int idx[2];
    const int n0 = g->dim(0), n1 = g->dim(1);
    const int c0 = n0 / 2, c1 = n1 / 2;
    for (std::size_t i = 0; i < psi.samples.size(); ++i) {
        g->decompose(i, idx);
        const int a = idx[0] - c0, b = idx[1] - c1;
        const int sa = ((-b + c0) % n0 + n0) % n0;
        const int sb = ((a + c1) % n1 + n1) % n1;
        rot.samples[std::size_t(sa) * n1 + sb] = psi.samples[i];
    }
    CHECK(std::abs(gpe_energy(rot, p) - e0) <= 1e-8 * std::max(1.0, std::abs(e0)));

    ComplexField phased = psi;
    scale(phased, std::exp(Complex(0.0, 0.7)));
    CHECK(std::abs(gpe_energy(phased, p) - e0) <= 1e-12 * std::max(1.0, std::abs(e0)));
}

TEST_CASE("gpe_gradient eigenrelation and zero field") {
    auto g = make_grid({64, 64}, {16.0, 16.0});
    GpeParams p;
    ComplexField psi = normalized_gaussian(g);
    ComplexField gr = gpe_gradient(psi, p);
    double max_err = 0.0;
    for (std::size_t i = 0; i < psi.samples.size(); ++i)
        max_err = std::max(max_err, std::abs(gr.samples[i] - psi.samples[i]));
    CHECK(max_err <= 1e-8);

    ComplexField zero(g);
    ComplexField gz = gpe_gradient(zero, p);
    for (const auto& v : gz.samples) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("gpe gradients match finite differences") {
    auto g = make_grid({16, 16}, {8.0, 8.0});
    GpeParams p;
    p.g = 3.0;
    p.omega = 0.4;
    p.lambda = 3.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        ComplexField psi = smooth_random_field(g, 50 + s, 0.4);
        ComplexField d = smooth_random_field(g, 60 + s, 0.4);
        auto Fe = [&](const ComplexField& x) { return gpe_energy(x, p); };
        CHECK(grad_match_error(Fe, gpe_gradient(psi, p), psi, d) <= 1e-6);
        auto Ff = [&](const ComplexField& x) { return free_energy(x, p); };
        CHECK(grad_match_error(Ff, free_energy_gradient(psi, p), psi, d) <= 1e-6);
    }
}

TEST_CASE("free_energy basics") {
    auto g = make_grid({32, 32}, {16.0, 16.0});
    GpeParams p;
    p.lambda = 3.0;
    ComplexField zero(g);
    CHECK(free_energy(zero, p) == doctest::Approx(4.5));  // lambda^2 / 2
    ComplexField gz = free_energy_gradient(zero, p);
    for (const auto& v : gz.samples) CHECK(v == Complex(0.0, 0.0));

    // N = lambda  =>  F = E
    ComplexField psi = normalized_gaussian(g);
    scale(psi, Complex(std::sqrt(3.0), 0.0));
    CHECK(free_energy(psi, p) == doctest::Approx(gpe_energy(psi, p)));
}

TEST_CASE("free_energy at the optimal Gaussian scaling, linear case") {
    // g = 0, Omega = 0: E(k psi0) = k^2 N0 with E(psi0) = N0 = 1, so
    // F(k) = k^2 + (k^2 - 3)^2 / 2 is minimized at N = k^2 = 2, F = 2.5.
    auto g = make_grid({64, 64}, {16.0, 16.0});
    GpeParams p;
    p.lambda = 3.0;
    ComplexField psi = normalized_gaussian(g);
    scale(psi, Complex(std::sqrt(2.0), 0.0));
    CHECK(std::abs(free_energy(psi, p) - 2.5) < 1e-8);
    // and it is the 1-D optimum over scalings
    for (double k2 : {1.8, 1.9, 2.1, 2.2}) {
        ComplexField trial = normalized_gaussian(g);
        scale(trial, Complex(std::sqrt(k2), 0.0));
        CHECK(free_energy(trial, p) > 2.5 - 1e-10);
    }
}

TEST_CASE("optics energy basics") {
    auto g = make_grid({16, 16}, {2 * pi, 2 * pi});
    OpticsParams p;
    p.kappa = 1.0;
    VectorField zero{ComplexField(g), ComplexField(g)};
    CHECK(optics_energy(zero, p) == doctest::Approx(0.0));
    CHECK(optics_free_energy(zero, p) == doctest::Approx(1.0));  // (1 + 1)/2

    // plane wave u with |k|^2 = 4, w = 0, kappa -> small: kinetic = |k|^2 N_u
    ComplexField u(g);
    int idx[2];
    for (std::size_t i = 0; i < u.samples.size(); ++i) {
        g->decompose(i, idx);
        const double x = g->origin(0) + idx[0] * g->spacing(0);
        u.samples[i] = std::exp(Complex(0.0, 2.0 * x));
    }
    VectorField U(u, ComplexField(g));
    OpticsParams tiny;
    tiny.kappa = 1e-12;
    const double n_u = sq_norm(u);
    const double kinetic = optics_energy(U, tiny) - integrate(ComplexField(g, std::vector<Complex>(g->size(), 1.0))).real();
    CHECK(kinetic == doctest::Approx(4.0 * n_u).epsilon(1e-9));
}

TEST_CASE("optics gradients match finite differences") {
    auto g = make_grid({16, 16}, {8.0, 8.0});
    OpticsParams p;
    p.kappa = 1.0;
    p.mu_u = 0.5;
    p.mu_w = 1.0;
    p.lambda_u = 2.0;
    p.lambda_w = 3.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        VectorField U(smooth_random_field(g, 70 + s, 0.5), smooth_random_field(g, 80 + s, 0.5));
        VectorField D(smooth_random_field(g, 90 + s, 0.5), smooth_random_field(g, 95 + s, 0.5));

        auto Ff = [&](const VectorField& X) { return optics_free_energy(X, p); };
        VectorField gf = optics_free_energy_gradient(U, p);
        double fd = fd_directional_derivative(Ff, U, D);
        double an = 2.0 * (inner_product(D.u, gf.u) + inner_product(D.w, gf.w)).real();
        CHECK(std::abs(fd - an) <= 1e-6 * std::max(1e-8, std::abs(an)));

        auto Fe = [&](const VectorField& X) { return error_functional(X, p); };
        VectorField ge = error_gradient(U, p);
        fd = fd_directional_derivative(Fe, U, D);
        an = 2.0 * (inner_product(D.u, ge.u) + inner_product(D.w, ge.w)).real();
        CHECK(std::abs(fd - an) <= 1e-6 * std::max(1e-8, std::abs(an)));
    }
}

TEST_CASE("error_functional zero cases and positivity") {
    auto g = make_grid({16, 16}, {2 * pi, 2 * pi});
    OpticsParams p;
    p.kappa = 1.0;
    VectorField zero{ComplexField(g), ComplexField(g)};
    CHECK(error_functional(zero, p) == doctest::Approx(0.0));
    VectorField gz = error_gradient(zero, p);
    for (const auto& v : gz.u.samples) CHECK(v == Complex(0.0, 0.0));
    for (const auto& v : gz.w.samples) CHECK(v == Complex(0.0, 0.0));

    // At kappa -> 0 the problem linearizes: for |u| -> 0 a plane wave with
    // mu = |k|^2 + 1 satisfies f(U) ~ 0.
    OpticsParams lin;
    lin.kappa = 1e-8;
    lin.mu_u = 2.0;  // |k|^2 = 1 mode
    lin.mu_w = 1.0;
    ComplexField u(g);
    int idx[2];
    for (std::size_t i = 0; i < u.samples.size(); ++i) {
        g->decompose(i, idx);
        const double x = g->origin(0) + idx[0] * g->spacing(0);
        u.samples[i] = 1e-4 * std::exp(Complex(0.0, x));
    }
    VectorField U(u, ComplexField(g));
    CHECK(error_functional(U, lin) <= 1e-20);

    // positivity on random data
    OpticsParams p2;
    p2.kappa = 0.5;
    p2.mu_u = -1.0;
    p2.mu_w = -0.3;
    VectorField R(smooth_random_field(g, 99, 1.0), smooth_random_field(g, 98, 1.0));
    CHECK(error_functional(R, p2) >= 0.0);
}

TEST_CASE("optics functionals are phase invariant") {
    auto g = make_grid({16, 16}, {8.0, 8.0});
    OpticsParams p;
    p.kappa = 1.0;
    p.mu_u = 0.4;
    p.mu_w = 1.0;
    VectorField U(smooth_random_field(g, 101, 0.5), smooth_random_field(g, 102, 0.5));
    VectorField V = U;
    scale(V.u, std::exp(Complex(0.0, 1.1)));
    scale(V.w, std::exp(Complex(0.0, -0.4)));
    CHECK(std::abs(optics_energy(U, p) - optics_energy(V, p)) <= 1e-12 * std::max(1.0, optics_energy(U, p)));
    CHECK(std::abs(error_functional(U, p) - error_functional(V, p)) <=
          1e-12 * std::max(1.0, error_functional(U, p)));
}
