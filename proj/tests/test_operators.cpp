#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sobograd/operators.hpp"

using namespace sobograd;

namespace {

ComplexField smooth_random_field(const GridPtr& g, std::uint64_t seed) {
    // Random low-mode Fourier data, decaying envelope: smooth and periodic.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    SpectralField F;
    F.grid = g;
    F.coefficients.assign(g->size(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
        const double k2 = g->k_squared(i);
        F.coefficients[i] = Complex(gauss(rng), gauss(rng)) * std::exp(-0.5 * k2);
    }
    return inverse_transform(F);
}

ComplexField gaussian(const GridPtr& g, double alpha = 0.5) {
    ComplexField f(g);
    int idx[2];
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        g->decompose(i, idx);
        const double x = g->centered_coord(0, idx[0]);
        const double y = g->centered_coord(1, idx[1]);
        f.samples[i] = std::exp(-alpha * (x * x + y * y));
    }
    return f;
}

}  // namespace

TEST_CASE("potential_field harmonic") {
    auto g = make_grid({64, 64}, {16.0, 16.0});
    ComplexField v = potential_field(PotentialSpec::harmonic(), g);
    int idx[2];
    double at_center = 1e300, at_corner = -1.0;
    for (std::size_t i = 0; i < v.samples.size(); ++i) {
        g->decompose(i, idx);
        const double x = g->centered_coord(0, idx[0]);
        const double y = g->centered_coord(1, idx[1]);
        CHECK(v.samples[i].imag() == 0.0);
        CHECK(v.samples[i].real() == doctest::Approx(0.5 * (x * x + y * y)));
        if (x == 0.0 && y == 0.0) at_center = v.samples[i].real();
        if (idx[0] == 0 && idx[1] == 0) at_corner = v.samples[i].real();
    }
    CHECK(at_center == 0.0);
    CHECK(at_corner == doctest::Approx(64.0));  // r^2 = 128 at the corner of L=16
}

TEST_CASE("potential_field custom pass-through and shape errors") {
    auto g = make_grid({8, 8}, {4.0, 4.0});
    ComplexField v(g);
    for (std::size_t i = 0; i < v.samples.size(); ++i) v.samples[i] = double(i);
    ComplexField out = potential_field(PotentialSpec::custom_samples(v), g);
    for (std::size_t i = 0; i < v.samples.size(); ++i) CHECK(out.samples[i] == v.samples[i]);

    auto g2 = make_grid({4, 4}, {4.0, 4.0});
    CHECK_THROWS(potential_field(PotentialSpec::custom_samples(v), g2));
}

TEST_CASE("apply_Lz annihilates radial fields") {
    auto g = make_grid({64, 64}, {16.0, 16.0});
    ComplexField f = gaussian(g);
    ComplexField lf = apply_Lz(f);
    for (const auto& v : lf.samples) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("apply_Lz eigenvalue +1 on the l=1 mode") {
    auto g = make_grid({64, 64}, {16.0, 16.0});
    ComplexField f(g);
    int idx[2];
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        g->decompose(i, idx);
        const double x = g->centered_coord(0, idx[0]);
        const double y = g->centered_coord(1, idx[1]);
        f.samples[i] = Complex(x, y) * std::exp(-0.5 * (x * x + y * y));
    }
    ComplexField lf = apply_Lz(f);
    double max_err = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        max_err = std::max(max_err, std::abs(lf.samples[i] - f.samples[i]));
    CHECK(max_err <= 1e-8);
}

TEST_CASE("apply_Lz hermiticity and conjugation antisymmetry") {
    auto g = make_grid({32, 32}, {16.0, 16.0});
    ComplexField f = smooth_random_field(g, 11);
    Complex lz = inner_product(f, apply_Lz(f));
    CHECK(std::abs(lz.imag()) < 1e-10 * std::max(1.0, std::abs(lz)));

    ComplexField fc(g);
    for (std::size_t i = 0; i < f.samples.size(); ++i) fc.samples[i] = std::conj(f.samples[i]);
    Complex lzc = inner_product(fc, apply_Lz(fc));
    CHECK(std::abs(lz.real() + lzc.real()) < 1e-10 * std::max(1.0, std::abs(lz)));
}

TEST_CASE("apply_Lz is linear and requires rank 2") {
    auto g = make_grid({16, 16}, {8.0, 8.0});
    ComplexField f = smooth_random_field(g, 12), h = smooth_random_field(g, 13);
    const Complex a(1.5, -0.5), b(0.25, 2.0);
    ComplexField combo(g);
    axpy(combo, a, f);
    axpy(combo, b, h);
    ComplexField lhs = apply_Lz(combo);
    ComplexField la = apply_Lz(f), lb = apply_Lz(h);
    ComplexField rhs(g);
    axpy(rhs, a, la);
    axpy(rhs, b, lb);
    for (std::size_t i = 0; i < lhs.samples.size(); ++i)
        CHECK(std::abs(lhs.samples[i] - rhs.samples[i]) < 1e-10);

    auto g1 = make_grid({16}, {8.0});
    ComplexField f1(g1);
    CHECK_THROWS(apply_Lz(f1));
}

TEST_CASE("saturable_I") {
    auto g = make_grid({4, 4}, {2.0, 2.0});
    ComplexField rho(g);
    // rho = 0 -> I = 1
    ComplexField i0 = saturable_I(rho, 1.0);
    for (const auto& v : i0.samples) CHECK(v == Complex(1.0, 0.0));

    for (auto& v : rho.samples) v = 2.0;
    ComplexField ih = saturable_I(rho, 0.5);  // 1/(1+1) = 0.5
    for (const auto& v : ih.samples) CHECK(v.real() == doctest::Approx(0.5));

    rho.samples[3] = -1e-6;
    CHECK_THROWS(saturable_I(rho, 0.5));
    rho.samples[3] = 0.0;
    CHECK_THROWS(saturable_I(rho, 0.0));
    CHECK_THROWS(saturable_I(rho, -1.0));
}

TEST_CASE("apply_A against known symbols") {
    auto g = make_grid({16, 16}, {8.0, 8.0});
    ComplexField f = smooth_random_field(g, 14);

    auto spec_k2 = DiagonalOperatorSpec::from_function(g, [](double k2) { return k2; });
    ComplexField af = apply_A(spec_k2, f);
    ComplexField lf = laplacian(f);
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        CHECK(std::abs(af.samples[i] + lf.samples[i]) < 1e-12);

    auto spec_zero = DiagonalOperatorSpec::from_function(g, [](double) { return 0.0; });
    ComplexField zf = apply_A(spec_zero, f);
    for (const auto& v : zf.samples) CHECK(std::abs(v) < 1e-12);

    // sigma = |k|^4 on a plane wave with |k| = 1: eigenvalue 1.
    auto gpw = make_grid({8, 8}, {2 * 3.14159265358979323846, 2 * 3.14159265358979323846});
    ComplexField w(gpw);
    int idx[2];
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        gpw->decompose(i, idx);
        const double x = gpw->origin(0) + idx[0] * gpw->spacing(0);
        w.samples[i] = std::exp(Complex(0.0, x));
    }
    auto spec_k4 = DiagonalOperatorSpec::from_function(gpw, [](double k2) { return k2 * k2; });
    ComplexField aw = apply_A(spec_k4, w);
    for (std::size_t i = 0; i < w.samples.size(); ++i)
        CHECK(std::abs(aw.samples[i] - w.samples[i]) < 1e-12);
}

TEST_CASE("apply_A hermitian and nonnegative") {
    auto g = make_grid({12, 12}, {6.0, 6.0});
    auto spec = DiagonalOperatorSpec::from_function(
        g, [](double k2) { return k2 + 0.25 * k2 * k2; });
    ComplexField f = smooth_random_field(g, 15), h = smooth_random_field(g, 16);
    Complex lhs = inner_product(f, apply_A(spec, h));
    Complex rhs = inner_product(h, apply_A(spec, f));
    CHECK(std::abs(lhs - std::conj(rhs)) < 1e-12 * std::max(1.0, std::abs(lhs)));
    Complex quad = inner_product(f, apply_A(spec, f));
    CHECK(quad.real() >= -1e-12 * sq_norm(f));
}

TEST_CASE("DiagonalOperatorSpec rejects negative symbols") {
    auto g = make_grid({8, 8}, {4.0, 4.0});
    CHECK_THROWS(DiagonalOperatorSpec::from_function(g, [](double k2) { return k2 - 1.0; }));
}
