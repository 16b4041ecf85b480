#pragma once

#include <cstdint>

#include "sobograd/functionals.hpp"

namespace sobograd {

/// Central difference [F(psi + h d) - F(psi - h d)] / (2h); the independent
/// check that an analytic gradient g satisfies 2 Re<d, g> for all directions.
/// Falls back to Richardson extrapolation when the h / 2h ratio test detects
/// cancellation.
double fd_directional_derivative(const std::function<double(const ComplexField&)>& functional,
                                 const ComplexField& psi, const ComplexField& direction,
                                 double h = 1e-5);
double fd_directional_derivative(const std::function<double(const VectorField&)>& functional,
                                 const VectorField& psi, const VectorField& direction,
                                 double h = 1e-5);

struct DenseMinimizeOptions {
    double tol = 1e-10;     // per-cycle improvement threshold
    int max_cycles = 2000;
    int restarts = 3;
    std::uint64_t seed = 42;
    double init_amplitude = 0.5;
};

/// Derivative-free coordinate-descent minimization over all real/imaginary
/// sample coordinates, with random restarts.  Brute-force oracle for tiny
/// grids; shares nothing with the analytic gradient implementations.
ComplexField dense_minimize(const std::function<double(const ComplexField&)>& functional,
                            const GridPtr& grid, const DenseMinimizeOptions& opt = {});

}  // namespace sobograd
