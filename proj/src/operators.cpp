#include "sobograd/operators.hpp"

#include <cmath>

namespace sobograd {

DiagonalOperatorSpec DiagonalOperatorSpec::from_function(
    const GridPtr& g, const std::function<double(double k_sq)>& sigma) {
    DiagonalOperatorSpec spec;
    spec.grid = g;
    spec.symbol.resize(g->size());
    for (std::size_t i = 0; i < spec.symbol.size(); ++i) {
        const double s = sigma(g->k_squared(i));
        if (s < 0.0) throw std::invalid_argument("DiagonalOperatorSpec: sigma(k) must be >= 0");
        spec.symbol[i] = s;
    }
    return spec;
}

ComplexField potential_field(const PotentialSpec& spec, const GridPtr& grid) {
    if (spec.kind == PotentialSpec::Kind::custom) {
        if (spec.custom.samples.size() != grid->size())
            throw std::invalid_argument("potential_field: custom samples do not match grid");
        return ComplexField(grid, spec.custom.samples);
    }
    ComplexField v(grid);
    const int r = grid->rank();
    std::vector<int> idx(r);
    for (std::size_t i = 0; i < v.samples.size(); ++i) {
        grid->decompose(i, idx.data());
        double r2 = 0.0;
        for (int ax = 0; ax < r; ++ax) {
            const double x = grid->centered_coord(ax, idx[ax]);
            r2 += x * x;
        }
        v.samples[i] = 0.5 * spec.omega_sq * r2;
    }
    return v;
}

ComplexField apply_Lz(const ComplexField& f) {
    const Grid& g = *f.grid;
    if (g.rank() != 2) throw std::invalid_argument("apply_Lz: rank-2 grid required");
    ComplexField d1 = partial_derivative(f, 0);
    ComplexField d2 = partial_derivative(f, 1);
    ComplexField out(f.grid);
    int idx[2];
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        g.decompose(i, idx);
        const double x1 = g.centered_coord(0, idx[0]);
        const double x2 = g.centered_coord(1, idx[1]);
        // -i (x1 d2 - x2 d1): eigenvalue +l on exp(i l theta).
        out.samples[i] = Complex(0.0, -1.0) * (x1 * d2.samples[i] - x2 * d1.samples[i]);
    }
    return out;
}

ComplexField saturable_I(const ComplexField& rho, double kappa) {
    if (kappa <= 0.0) throw std::invalid_argument("saturable_I: kappa must be > 0");
    ComplexField out(rho.grid);
    for (std::size_t i = 0; i < rho.samples.size(); ++i) {
        const double r = rho.samples[i].real();
        if (r < -1e-14) throw std::invalid_argument("saturable_I: negative density");
        out.samples[i] = 1.0 / (1.0 + kappa * r);
    }
    return out;
}

ComplexField apply_A(const DiagonalOperatorSpec& spec, const ComplexField& f) {
    if (!spec.grid || !spec.grid->same_layout(*f.grid))
        throw std::invalid_argument("apply_A: spec/grid mismatch");
    SpectralField F = forward_transform(f);
    for (std::size_t i = 0; i < F.coefficients.size(); ++i)
        F.coefficients[i] *= spec.symbol[i];
    return inverse_transform(F);
}

}  // namespace sobograd
