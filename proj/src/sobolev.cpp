#include "sobograd/sobolev.hpp"

namespace sobograd {

Preconditioner Preconditioner::build(PreconditionerKind kind, const GridPtr& grid,
                                     const DiagonalOperatorSpec* spec) {
    Preconditioner p;
    p.kind_ = kind;
    p.grid_ = grid;
    p.multipliers_.resize(grid->size());
    switch (kind) {
        case PreconditionerKind::identity:
            for (double& m : p.multipliers_) m = 1.0;
            break;
        case PreconditionerKind::sobolev:
            for (std::size_t i = 0; i < p.multipliers_.size(); ++i)
                p.multipliers_[i] = 1.0 / (1.0 + grid->k_squared(i));
            break;
        case PreconditionerKind::generalized:
            if (!spec || !spec->grid || !spec->grid->same_layout(*grid))
                throw std::invalid_argument("build_preconditioner: generalized kind needs a matching spec");
            for (std::size_t i = 0; i < p.multipliers_.size(); ++i) {
                if (spec->symbol[i] < 0.0)
                    throw std::invalid_argument("build_preconditioner: sigma(k) must be >= 0");
                p.multipliers_[i] = 1.0 / (1.0 + spec->symbol[i]);
            }
            break;
    }
    return p;
}

ComplexField Preconditioner::apply(const ComplexField& g) const {
    if (!grid_->same_layout(*g.grid))
        throw std::invalid_argument("precondition: grid mismatch");
    if (kind_ == PreconditionerKind::identity) return g;
    SpectralField F = forward_transform(g);
    for (std::size_t i = 0; i < F.coefficients.size(); ++i)
        F.coefficients[i] *= multipliers_[i];
    return inverse_transform(F);
}

Preconditioner build_preconditioner(PreconditionerKind kind, const GridPtr& grid,
                                    const DiagonalOperatorSpec* spec) {
    return Preconditioner::build(kind, grid, spec);
}

ComplexField precondition(const Preconditioner& p, const ComplexField& g) {
    return p.apply(g);
}

}  // namespace sobograd
