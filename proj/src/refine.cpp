#include "sobograd/refine.hpp"

namespace sobograd {

void RefinePlan::validate() const {
    if (stage_dims.size() < 2) throw std::invalid_argument("RefinePlan: need >= 2 stages");
    if (stage_targets.size() != stage_dims.size())
        throw std::invalid_argument("RefinePlan: one target per stage required");
    if (lengths.empty()) throw std::invalid_argument("RefinePlan: lengths required");
    for (std::size_t s = 0; s + 1 < stage_dims.size(); ++s) {
        if (stage_dims[s].size() != lengths.size() ||
            stage_dims[s + 1].size() != lengths.size())
            throw std::invalid_argument("RefinePlan: rank mismatch");
        for (std::size_t ax = 0; ax < lengths.size(); ++ax)
            if (stage_dims[s + 1][ax] <= stage_dims[s][ax])
                throw std::invalid_argument("RefinePlan: dims must be strictly increasing");
    }
}

std::vector<ConvergenceReport> two_grid_solve(const OpticsParams& p, const VectorField& seed,
                                              const RefinePlan& plan, DescentConfig cfg) {
    plan.validate();
    if (!seed.u.grid->dims().empty() && seed.u.grid->dims() != plan.stage_dims.front())
        throw std::invalid_argument("two_grid_solve: seed must live on the coarsest grid");

    std::vector<ConvergenceReport> reports;
    VectorField state = seed;
    for (std::size_t s = 0; s < plan.stage_dims.size(); ++s) {
        cfg.target_value = plan.stage_targets[s];
        ConvergenceReport rep = solve_excited(p, state, cfg);
        const bool ok = rep.converged;
        ComplexField u = rep.final_state[0], w = rep.final_state[1];
        reports.push_back(std::move(rep));
        if (!ok) break;
        if (s + 1 < plan.stage_dims.size()) {
            const double nu = sq_norm(u), nw = sq_norm(w);
            u = fourier_interpolate(u, plan.stage_dims[s + 1]);
            w = fourier_interpolate(w, plan.stage_dims[s + 1]);
            // Constraint exactness is re-imposed after interpolation.
            state = VectorField(nu > 0.0 ? renormalize(u, nu) : u,
                                nw > 0.0 ? renormalize(w, nw) : w);
        }
    }
    return reports;
}

}  // namespace sobograd
