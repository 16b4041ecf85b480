#pragma once

#include "sobograd/problems.hpp"

namespace sobograd {

/// Coarse-to-fine solve schedule over nested grids with shared lengths.
struct RefinePlan {
    std::vector<std::vector<int>> stage_dims;   // strictly increasing, >= 2 stages
    std::vector<double> stage_targets;           // error-functional stop value per stage
    std::vector<double> lengths;

    void validate() const;
};

/// Converge the excited-state problem on each grid in turn, Fourier-
/// interpolating the previous stage's state (norms re-projected) as the next
/// warm start.  Aborts on the first non-convergent stage.
std::vector<ConvergenceReport> two_grid_solve(const OpticsParams& p, const VectorField& seed,
                                              const RefinePlan& plan, DescentConfig cfg);

}  // namespace sobograd
