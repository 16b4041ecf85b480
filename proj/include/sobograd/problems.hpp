#pragma once

#include <array>

#include "sobograd/descent.hpp"

namespace sobograd {

/// Canonical initial states (all normalized to unit L2 norm per component).
struct SeedSpec {
    enum class Kind { gaussian, centered_vortex, offset_vortex, hermite_pair, custom };
    Kind kind = Kind::gaussian;
    double width = 1.0;
    std::array<double, 2> offset{1.0, 1.0};
    // Hermite mode indices per axis, for each component of a pair seed.
    std::array<int, 2> modes_u{0, 0};
    std::array<int, 2> modes_w{0, 0};
    std::vector<ComplexField> custom;
};

ComplexField make_seed(const SeedSpec& spec, const GridPtr& grid);
VectorField make_pair_seed(const SeedSpec& spec, const GridPtr& grid);

enum class SolitonFamily { vortex, dipole, custom };

/// u: winding-one vortex (or x-dipole), w: nodeless Gaussian; amplitudes set
/// the initial per-component norms.
VectorField excited_seed(SolitonFamily family, const GridPtr& grid, double norm_u,
                         double norm_w);

enum class GpeCase { A, B, C };
enum class GpeMethod { it, its, fe, fes };

GpeMethod parse_gpe_method(const std::string& name);
std::string gpe_method_name(GpeMethod m);

struct GpeCaseSetup {
    GpeParams params;
    ComplexField seed;
};

/// Benchmark cases: A (Omega=0, Gaussian), B (Omega=0.6, centered vortex),
/// C (Omega=0.6, offset vortex); g=100, N=1, harmonic trap.
GpeCaseSetup make_gpe_case(GpeCase c, const GridPtr& grid);

ConvergenceReport solve_gpe_ground(const GpeParams& p, const ComplexField& seed,
                                   GpeMethod method, DescentConfig cfg);

ConvergenceReport solve_optics_ground(const OpticsParams& p, const VectorField& seed,
                                      DescentConfig cfg);

/// Error-functional descent at fixed (mu_u, mu_w); converged iff the residual
/// functional reaches cfg.target_value.  Stalls with F above tolerance are
/// flagged as accidental trapping.
ConvergenceReport solve_excited(const OpticsParams& p, const VectorField& seed,
                                DescentConfig cfg);

/// Normalized 2D harmonic-trap eigenstate r^|l| L_n^|l|(r^2) e^{il theta} e^{-r^2/2}
/// with eigenvalue 2n + |l| + 1 - Omega*l.
std::pair<ComplexField, double> trap_eigenstate(int n, int l, double omega,
                                                const GridPtr& grid);

struct BoundsCheck {
    double omega_norm_sq = 0.0;  // <psi, A_Omega psi>
    double n = 0.0;
    double mu_min = 1.0;
    bool positive_ok = false;     // 0 < ||psi||_Omega^2
    bool energy_bound_ok = false; // ||psi||_Omega^2 <= lambda * N
    bool norm_bound_ok = false;   // N <= lambda - mu_min
    bool all_ok() const { return positive_ok && energy_bound_ok && norm_bound_ok; }
};

BoundsCheck verify_minimizer_bounds(const ComplexField& psi, const GpeParams& p,
                                    double mu_min = 1.0);

/// <Lz>/N diagnostic for vortex content.
double angular_momentum_per_particle(const ComplexField& psi);

}  // namespace sobograd
