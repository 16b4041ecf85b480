#pragma once

#include "sobograd/operators.hpp"

namespace sobograd {

enum class PreconditionerKind { identity, sobolev, generalized };

/// Spectral preconditioner with a cached multiplier table m(k):
/// 1 (identity), 1/(1+|k|^2) (Sobolev), or 1/(1+sigma(k)) (generalized).
class Preconditioner {
public:
    static Preconditioner build(PreconditionerKind kind, const GridPtr& grid,
                                const DiagonalOperatorSpec* spec = nullptr);

    PreconditionerKind kind() const { return kind_; }
    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& multipliers() const { return multipliers_; }

    ComplexField apply(const ComplexField& g) const;

private:
    PreconditionerKind kind_ = PreconditionerKind::identity;
    GridPtr grid_;
    std::vector<double> multipliers_;
};

Preconditioner build_preconditioner(PreconditionerKind kind, const GridPtr& grid,
                                    const DiagonalOperatorSpec* spec = nullptr);

ComplexField precondition(const Preconditioner& p, const ComplexField& g);

}  // namespace sobograd
