#include "sobograd/functionals.hpp"

#include <cmath>

namespace sobograd {

void GpeParams::validate() const {
    if (g < 0.0) throw std::invalid_argument("GpeParams: g must be >= 0");
    // |Omega| < 1 keeps the trap operator positive: its eigenvalues are
    // 2n + |l| + 1 - Omega*l >= 1 - |Omega| + 2n > 0 for either rotation sign.
    if (omega <= -1.0 || omega >= 1.0)
        throw std::invalid_argument("GpeParams: Omega must be in (-1,1)");
    if (lambda <= 0.0) throw std::invalid_argument("GpeParams: lambda must be > 0");
    if (n_target <= 0.0) throw std::invalid_argument("GpeParams: N_target must be > 0");
}

void OpticsParams::validate() const {
    if (kappa <= 0.0) throw std::invalid_argument("OpticsParams: kappa must be > 0");
}

namespace {

// <psi, -lap psi> via Parseval; exact pairing with the spectral Laplacian.
double spectral_kinetic(const ComplexField& f) {
    SpectralField F = forward_transform(f);
    const Grid& g = *f.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < F.coefficients.size(); ++i)
        s += g.k_squared(i) * std::norm(F.coefficients[i]);
    return s * g.volume();
}

double rotation_term(const ComplexField& psi, double omega) {
    const Complex lz = inner_product(psi, apply_Lz(psi));
    const double scale = std::max(1.0, std::abs(lz));
    if (std::abs(lz.imag()) > 1e-10 * scale)
        throw std::runtime_error("gpe_energy: <Lz> has a non-negligible imaginary part");
    return -omega * lz.real();
}

ComplexField density(const VectorField& U) {
    ComplexField rho(U.u.grid);
    for (std::size_t i = 0; i < rho.samples.size(); ++i)
        rho.samples[i] = std::norm(U.u.samples[i]) + std::norm(U.w.samples[i]);
    return rho;
}

}  // namespace

double gpe_energy(const ComplexField& psi, const GpeParams& p) {
    check_finite(psi, "gpe_energy");
    const ComplexField v = potential_field(p.potential, psi.grid);
    double local = 0.0;
    for (std::size_t i = 0; i < psi.samples.size(); ++i) {
        const double d = std::norm(psi.samples[i]);
        local += v.samples[i].real() * d + 0.5 * p.g * d * d;
    }
    double e = 0.5 * spectral_kinetic(psi) + local * psi.grid->cell_volume();
    if (p.omega != 0.0) e += rotation_term(psi, p.omega);
    return e;
}

ComplexField gpe_apply_H(const ComplexField& psi, const GpeParams& p) {
    check_finite(psi, "gpe_apply_H");
    ComplexField out = laplacian(psi);
    scale(out, -0.5);
    const ComplexField v = potential_field(p.potential, psi.grid);
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] += (v.samples[i].real() + p.g * std::norm(psi.samples[i])) * psi.samples[i];
    if (p.omega != 0.0) {
        ComplexField lz = apply_Lz(psi);
        axpy(out, Complex(-p.omega, 0.0), lz);
    }
    return out;
}

ComplexField gpe_gradient(const ComplexField& psi, const GpeParams& p) {
    return gpe_apply_H(psi, p);
}

double free_energy(const ComplexField& psi, const GpeParams& p) {
    const double n = sq_norm(psi);
    return gpe_energy(psi, p) + 0.5 * (n - p.lambda) * (n - p.lambda);
}

ComplexField free_energy_gradient(const ComplexField& psi, const GpeParams& p) {
    ComplexField out = gpe_gradient(psi, p);
    const double n = sq_norm(psi);
    axpy(out, Complex(n - p.lambda, 0.0), psi);
    return out;
}

double optics_energy(const VectorField& U, const OpticsParams& p) {
    check_finite(U.u, "optics_energy");
    check_finite(U.w, "optics_energy");
    double e = spectral_kinetic(U.u) + spectral_kinetic(U.w);
    const ComplexField rho = density(U);
    double g_term = 0.0;
    for (const Complex& r : rho.samples)
        g_term += std::log1p(p.kappa * r.real()) / p.kappa;
    return e + g_term * U.u.grid->cell_volume();
}

double optics_free_energy(const VectorField& U, const OpticsParams& p) {
    const double nu = sq_norm(U.u), nw = sq_norm(U.w);
    return optics_energy(U, p) + 0.5 * (nu - p.lambda_u) * (nu - p.lambda_u) +
           0.5 * (nw - p.lambda_w) * (nw - p.lambda_w);
}

VectorField optics_free_energy_gradient(const VectorField& U, const OpticsParams& p) {
    const ComplexField isat = saturable_I(density(U), p.kappa);
    const double nu = sq_norm(U.u), nw = sq_norm(U.w);

    ComplexField gu = laplacian(U.u);
    scale(gu, -1.0);
    for (std::size_t i = 0; i < gu.samples.size(); ++i)
        gu.samples[i] += (isat.samples[i].real() + nu - p.lambda_u) * U.u.samples[i];

    ComplexField gw = laplacian(U.w);
    scale(gw, -1.0);
    for (std::size_t i = 0; i < gw.samples.size(); ++i)
        gw.samples[i] += (isat.samples[i].real() + nw - p.lambda_w) * U.w.samples[i];

    return VectorField(std::move(gu), std::move(gw));
}

VectorField error_residual(const VectorField& U, const OpticsParams& p) {
    const ComplexField isat = saturable_I(density(U), p.kappa);
    ComplexField fu = laplacian(U.u);
    scale(fu, -1.0);
    for (std::size_t i = 0; i < fu.samples.size(); ++i)
        fu.samples[i] += (isat.samples[i].real() - p.mu_u) * U.u.samples[i];
    ComplexField fw = laplacian(U.w);
    scale(fw, -1.0);
    for (std::size_t i = 0; i < fw.samples.size(); ++i)
        fw.samples[i] += (isat.samples[i].real() - p.mu_w) * U.w.samples[i];
    return VectorField(std::move(fu), std::move(fw));
}

double error_functional(const VectorField& U, const OpticsParams& p) {
    const VectorField f = error_residual(U, p);
    return sq_norm(f.u) + sq_norm(f.w);
}

VectorField error_gradient(const VectorField& U, const OpticsParams& p) {
    const ComplexField rho = density(U);
    const ComplexField isat = saturable_I(rho, p.kappa);
    const VectorField f = error_residual(U, p);

    // S = U^dag f + f^dag U, pointwise real.
    std::vector<double> s(rho.samples.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = 2.0 * (std::conj(U.u.samples[i]) * f.u.samples[i] +
                      std::conj(U.w.samples[i]) * f.w.samples[i])
                         .real();

    ComplexField gu = laplacian(f.u);
    scale(gu, -1.0);
    ComplexField gw = laplacian(f.w);
    scale(gw, -1.0);
    for (std::size_t i = 0; i < gu.samples.size(); ++i) {
        const double ival = isat.samples[i].real();
        const double iprime = -p.kappa * ival * ival;  // dI/drho
        gu.samples[i] += (ival - p.mu_u) * f.u.samples[i] + iprime * s[i] * U.u.samples[i];
        gw.samples[i] += (ival - p.mu_w) * f.w.samples[i] + iprime * s[i] * U.w.samples[i];
    }
    return VectorField(std::move(gu), std::move(gw));
}

}  // namespace sobograd
