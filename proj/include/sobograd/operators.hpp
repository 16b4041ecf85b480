#pragma once

#include <functional>

#include "sobograd/grid.hpp"

namespace sobograd {

/// Trap potential: harmonic V(x) = 0.5*omega_sq*|x|^2 (coordinates from the
/// domain center) or user-supplied samples.
struct PotentialSpec {
    enum class Kind { harmonic, custom } kind = Kind::harmonic;
    double omega_sq = 1.0;
    ComplexField custom;

    static PotentialSpec harmonic(double omega_sq = 1.0) {
        PotentialSpec s;
        s.kind = Kind::harmonic;
        s.omega_sq = omega_sq;
        return s;
    }
    static PotentialSpec custom_samples(ComplexField v) {
        PotentialSpec s;
        s.kind = Kind::custom;
        s.custom = std::move(v);
        return s;
    }
};

/// Diagonal-in-Fourier nonnegative operator, sigma(k) sampled on the grid's
/// wavenumber lattice.
struct DiagonalOperatorSpec {
    GridPtr grid;
    std::vector<double> symbol;  // one value per flat FFT index

    static DiagonalOperatorSpec from_function(const GridPtr& g,
                                              const std::function<double(double k_sq)>& sigma);
};

ComplexField potential_field(const PotentialSpec& spec, const GridPtr& grid);

/// Angular momentum L_z with eigenvalue +l on exp(i*l*theta) modes, so that
/// -Omega*L_z lowers the energy of a positively wound vortex.
ComplexField apply_Lz(const ComplexField& f);

/// Saturable response I(rho) = 1/(1 + kappa*rho), applied pointwise.
ComplexField saturable_I(const ComplexField& rho, double kappa);

ComplexField apply_A(const DiagonalOperatorSpec& spec, const ComplexField& f);

}  // namespace sobograd
