#pragma once

#include "sobograd/operators.hpp"

namespace sobograd {

/// Parameters of the rotating Gross-Pitaevskii functional
/// E = int 0.5|grad psi|^2 + V|psi|^2 + (g/2)|psi|^4 - Omega conj(psi) Lz psi.
struct GpeParams {
    double g = 0.0;            // nonlinearity, >= 0
    double omega = 0.0;        // trap rotation rate, (-1,1)
    PotentialSpec potential;   // defaults to V = |x|^2 / 2
    double lambda = 3.0;       // free-energy Lagrange parameter
    double n_target = 1.0;     // norm constraint for imaginary-time runs

    void validate() const;
};

/// Two-component saturable optics system.
struct OpticsParams {
    double kappa = 1.0;
    double mu_u = 0.0, mu_w = 0.0;      // fixed eigenvalues, excited-state mode
    double lambda_u = 1.0, lambda_w = 1.0;  // free-energy mode

    void validate() const;
};

struct VectorField {
    ComplexField u;
    ComplexField w;

    VectorField() = default;
    VectorField(ComplexField u_, ComplexField w_) : u(std::move(u_)), w(std::move(w_)) {
        if (!u.grid->same_layout(*w.grid))
            throw std::invalid_argument("VectorField: components must share a grid");
    }
};

double gpe_energy(const ComplexField& psi, const GpeParams& p);

/// L2 gradient [-0.5 lap + V + g|psi|^2 - Omega Lz] psi.
ComplexField gpe_gradient(const ComplexField& psi, const GpeParams& p);

/// Unconstrained Hamiltonian application; shared by gpe_gradient and the
/// eigenvalue estimate.
ComplexField gpe_apply_H(const ComplexField& psi, const GpeParams& p);

double free_energy(const ComplexField& psi, const GpeParams& p);
ComplexField free_energy_gradient(const ComplexField& psi, const GpeParams& p);

double optics_energy(const VectorField& U, const OpticsParams& p);
double optics_free_energy(const VectorField& U, const OpticsParams& p);
VectorField optics_free_energy_gradient(const VectorField& U, const OpticsParams& p);

/// Residual operator f(U) = [-lap - M + I(|U|^2)] U, componentwise in mu.
VectorField error_residual(const VectorField& U, const OpticsParams& p);
double error_functional(const VectorField& U, const OpticsParams& p);
VectorField error_gradient(const VectorField& U, const OpticsParams& p);

}  // namespace sobograd
