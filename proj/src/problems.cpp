#include "sobograd/problems.hpp"

#include <cmath>
#include <numbers>

namespace sobograd {

namespace {

double hermite(int n, double x) {
    double h0 = 1.0, h1 = 2.0 * x;
    if (n == 0) return h0;
    if (n == 1) return h1;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

double laguerre(int n, int a, double x) {
    double l0 = 1.0, l1 = 1.0 + a - x;
    if (n == 0) return l0;
    if (n == 1) return l1;
    for (int k = 1; k < n; ++k) {
        const double l2 = ((2.0 * k + 1.0 + a - x) * l1 - (k + a) * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

ComplexField sample_2d(const GridPtr& grid,
                       const std::function<Complex(double, double)>& fn) {
    if (grid->rank() != 2) throw std::invalid_argument("seed: rank-2 grid required");
    ComplexField f(grid);
    int idx[2];
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        grid->decompose(i, idx);
        f.samples[i] = fn(grid->centered_coord(0, idx[0]), grid->centered_coord(1, idx[1]));
    }
    return f;
}

ComplexField hermite_mode(const GridPtr& grid, int nx, int ny, double width) {
    return renormalize(sample_2d(grid,
                                 [&](double x, double y) {
                                     const double s = 1.0 / width;
                                     return Complex(hermite(nx, x * s) * hermite(ny, y * s) *
                                                        std::exp(-0.5 * (x * x + y * y) * s * s),
                                                    0.0);
                                 }),
                       1.0);
}

}  // namespace

ComplexField make_seed(const SeedSpec& spec, const GridPtr& grid) {
    if (spec.width <= 0.0) throw std::invalid_argument("make_seed: width must be > 0");
    const double w2 = spec.width * spec.width;
    switch (spec.kind) {
        case SeedSpec::Kind::gaussian:
            return renormalize(
                sample_2d(grid,
                          [&](double x, double y) {
                              return Complex(std::exp(-(x * x + y * y) / w2), 0.0);
                          }),
                1.0);
        case SeedSpec::Kind::centered_vortex:
            // |x| e^{-|x|^2} (x1 + i x2)/|x|^2
            return renormalize(sample_2d(grid,
                                         [&](double x, double y) {
                                             const double r2 = x * x + y * y;
                                             if (r2 < 1e-24) return Complex(0.0, 0.0);
                                             const double r = std::sqrt(r2);
                                             return r * std::exp(-r2 / w2) * Complex(x, y) / r2;
                                         }),
                               1.0);
        case SeedSpec::Kind::offset_vortex: {
            // Literal published form, including the y1 in both components.
            const double y1 = spec.offset[0], y2 = spec.offset[1];
            return renormalize(
                sample_2d(grid,
                          [&](double x, double y) {
                              const double r2 = x * x + y * y;
                              const double d2 =
                                  (x - y1) * (x - y1) + (y - y2) * (y - y2);
                              if (d2 < 1e-24) return Complex(0.0, 0.0);
                              const double r = std::sqrt(r2);
                              return r * std::exp(-r2 / w2) * Complex(x - y1, y - y1) / d2;
                          }),
                1.0);
        }
        case SeedSpec::Kind::custom:
            if (spec.custom.size() != 1 || spec.custom[0].samples.size() != grid->size())
                throw std::invalid_argument("make_seed: custom seed does not match grid");
            return ComplexField(grid, spec.custom[0].samples);
        case SeedSpec::Kind::hermite_pair:
            throw std::invalid_argument("make_seed: hermite_pair yields a vector field");
    }
    throw std::invalid_argument("make_seed: unknown kind");
}

VectorField make_pair_seed(const SeedSpec& spec, const GridPtr& grid) {
    if (spec.kind == SeedSpec::Kind::custom) {
        if (spec.custom.size() != 2)
            throw std::invalid_argument("make_pair_seed: two components required");
        return VectorField(ComplexField(grid, spec.custom[0].samples),
                           ComplexField(grid, spec.custom[1].samples));
    }
    if (spec.kind != SeedSpec::Kind::hermite_pair)
        throw std::invalid_argument("make_pair_seed: hermite_pair or custom kind required");
    return VectorField(hermite_mode(grid, spec.modes_u[0], spec.modes_u[1], spec.width),
                       hermite_mode(grid, spec.modes_w[0], spec.modes_w[1], spec.width));
}

VectorField excited_seed(SolitonFamily family, const GridPtr& grid, double norm_u,
                         double norm_w) {
    ComplexField u;
    switch (family) {
        case SolitonFamily::vortex:
            u = sample_2d(grid, [](double x, double y) {
                return Complex(x, y) * std::exp(-0.5 * (x * x + y * y));
            });
            break;
        case SolitonFamily::dipole:
            u = sample_2d(grid, [](double x, double y) {
                return Complex(x * std::exp(-0.5 * (x * x + y * y)), 0.0);
            });
            break;
        case SolitonFamily::custom:
            throw std::invalid_argument("excited_seed: custom family needs a seed file");
    }
    ComplexField w = sample_2d(grid, [](double x, double y) {
        return Complex(std::exp(-0.5 * (x * x + y * y)), 0.0);
    });
    return VectorField(renormalize(u, norm_u), renormalize(w, norm_w));
}

GpeMethod parse_gpe_method(const std::string& name) {
    if (name == "it") return GpeMethod::it;
    if (name == "its") return GpeMethod::its;
    if (name == "fe") return GpeMethod::fe;
    if (name == "fes") return GpeMethod::fes;
    throw std::invalid_argument("unknown method '" + name + "' (expected it|its|fe|fes)");
}

std::string gpe_method_name(GpeMethod m) {
    switch (m) {
        case GpeMethod::it: return "it";
        case GpeMethod::its: return "its";
        case GpeMethod::fe: return "fe";
        case GpeMethod::fes: return "fes";
    }
    return "?";
}

GpeCaseSetup make_gpe_case(GpeCase c, const GridPtr& grid) {
    GpeCaseSetup s;
    s.params.g = 100.0;
    s.params.potential = PotentialSpec::harmonic(1.0);
    s.params.n_target = 1.0;
    // lambda chosen so the free-energy minimum sits near N = 1:
    // mu_TF = sqrt(g N / pi), lambda = N + mu.
    s.params.lambda = 1.0 + std::sqrt(100.0 / std::numbers::pi);

    SeedSpec seed;
    switch (c) {
        case GpeCase::A:
            s.params.omega = 0.0;
            seed.kind = SeedSpec::Kind::gaussian;
            break;
        // Rotating cases at |Omega| = 0.6. apply_Lz has eigenvalue +l on a
        // winding-l vortex (see trap_eigenstate), so the sign of omega picks
        // which circulation the term -Omega<L_z> rewards.
        //
        // Case B rotates with the seeded winding-+1 vortex (omega = +0.6):
        // the centered vortex is then a genuine minimum, every descent
        // method converges onto it, and the final state keeps <L_z>/N = +1.
        //
        // Case C rotates against it (omega = -0.6; the conjugate-symmetric
        // view E_W(psi) = E_{-W}(conj psi) of the same physics): the seeded
        // offset vortex is now penalized, so the descent must escape its
        // basin — by expelling the vortex toward the vortex-free state or by
        // trading it for the rotation-favored anti-vortex — which is what
        // makes this the expensive benchmark case. A counter-rotating
        // centered vortex would be protected only by symmetry, and rounding
        // noise eventually breaks it, so case B cannot use this orientation.
        case GpeCase::B:
            s.params.omega = 0.6;
            seed.kind = SeedSpec::Kind::centered_vortex;
            break;
        case GpeCase::C:
            s.params.omega = -0.6;
            seed.kind = SeedSpec::Kind::offset_vortex;
            seed.offset = {1.0, 1.0};
            break;
    }
    s.seed = make_seed(seed, grid);
    return s;
}

ConvergenceReport solve_gpe_ground(const GpeParams& p, const ComplexField& seed,
                                   GpeMethod method, DescentConfig cfg) {
    p.validate();
    const bool sobolev = (method == GpeMethod::its || method == GpeMethod::fes);
    cfg.preconditioner =
        sobolev ? PreconditionerKind::sobolev : PreconditionerKind::identity;
    const Preconditioner prec = build_preconditioner(cfg.preconditioner, seed.grid);

    auto apply_h = [p](const ComplexField& psi) { return gpe_apply_H(psi, p); };
    auto mu_fn = [apply_h](const ComplexField& psi) {
        return eigenvalue_estimate(psi, apply_h);
    };

    if (method == GpeMethod::it || method == GpeMethod::its) {
        cfg.method = Method::imaginary_time;
        auto grad = [p](const ComplexField& psi) { return gpe_gradient(psi, p); };
        auto energy = [p](const ComplexField& psi) { return gpe_energy(psi, p); };
        return imaginary_time_run(seed, grad, p.n_target, prec, cfg, energy, mu_fn);
    }
    cfg.method = Method::steepest_descent;
    std::function<double(const ComplexField&)> f = [p](const ComplexField& psi) {
        return free_energy(psi, p);
    };
    std::function<ComplexField(const ComplexField&)> g = [p](const ComplexField& psi) {
        return free_energy_gradient(psi, p);
    };
    return steepest_descent_run<ComplexField>(seed, f, g, prec, cfg, mu_fn);
}

ConvergenceReport solve_optics_ground(const OpticsParams& p, const VectorField& seed,
                                      DescentConfig cfg) {
    p.validate();
    if (p.lambda_u <= 0.0 || p.lambda_w <= 0.0)
        throw std::invalid_argument("solve_optics_ground: lambda_u, lambda_w must be > 0");
    const Preconditioner prec = build_preconditioner(cfg.preconditioner, seed.u.grid);
    std::function<double(const VectorField&)> f = [p](const VectorField& U) {
        return optics_free_energy(U, p);
    };
    std::function<VectorField(const VectorField&)> g = [p](const VectorField& U) {
        return optics_free_energy_gradient(U, p);
    };
    return steepest_descent_run<VectorField>(seed, f, g, prec, cfg);
}

ConvergenceReport solve_excited(const OpticsParams& p, const VectorField& seed,
                                DescentConfig cfg) {
    p.validate();
    if (std::isnan(cfg.target_value)) cfg.target_value = 1e-12;
    // The error functional squares the elliptic operator, so the matching
    // Sobolev metric is H^2: m(k) = 1/(1+|k|^2)^2 = 1/(1 + (2|k|^2+|k|^4)).
    // The H^1 multiplier only cancels one power of |k|^2 and leaves the
    // descent grid-dependent and slow.
    Preconditioner prec;
    if (cfg.preconditioner == PreconditionerKind::sobolev) {
        const auto spec = DiagonalOperatorSpec::from_function(
            seed.u.grid, [](double k2) { return 2.0 * k2 + k2 * k2; });
        prec = build_preconditioner(PreconditionerKind::generalized, seed.u.grid, &spec);
    } else {
        prec = build_preconditioner(cfg.preconditioner, seed.u.grid);
    }
    std::function<double(const VectorField&)> f = [p](const VectorField& U) {
        return error_functional(U, p);
    };
    std::function<VectorField(const VectorField&)> g = [p](const VectorField& U) {
        return error_gradient(U, p);
    };
    // Convergence is decided by the absolute target on F.  The relative
    // energy-stall guard is tuned for free-energy descent and misfires in the
    // ultraflat valleys of the error functional (drops of ~0.1% of F per
    // iteration near F ~ 1e-10 look like stagnation); disable it here.
    cfg.energy_tol = 1e-300;
    ConvergenceReport rep = steepest_descent_run<VectorField>(seed, f, g, prec, cfg);
    if (!rep.converged && !rep.trace.empty() && rep.trace.back().energy > cfg.target_value)
        rep.message = "trapped: F>tol (" + rep.message + ")";
    return rep;
}

std::pair<ComplexField, double> trap_eigenstate(int n, int l, double omega,
                                                const GridPtr& grid) {
    if (n < 0) throw std::invalid_argument("trap_eigenstate: n must be >= 0");
    const int la = std::abs(l);
    ComplexField psi = sample_2d(grid, [&](double x, double y) {
        const double r2 = x * x + y * y;
        const double radial = std::pow(std::sqrt(r2), la) * laguerre(n, la, r2) *
                              std::exp(-0.5 * r2);
        if (r2 < 1e-24) return Complex(la == 0 ? radial : 0.0, 0.0);
        const double theta = std::atan2(y, x);
        return radial * std::exp(Complex(0.0, l * theta));
    });
    psi = renormalize(psi, 1.0);

    // Boundary tail check: the mode must be resolved inside the box.
    double tail = 0.0;
    int idx[2];
    for (std::size_t i = 0; i < psi.samples.size(); ++i) {
        grid->decompose(i, idx);
        if (idx[0] == 0 || idx[1] == 0)
            tail = std::max(tail, std::abs(psi.samples[i]));
    }
    if (tail > 1e-8)
        throw std::runtime_error("trap_eigenstate: grid too small to resolve the mode");

    const double mu = 2.0 * n + la + 1.0 - omega * l;
    return {std::move(psi), mu};
}

BoundsCheck verify_minimizer_bounds(const ComplexField& psi, const GpeParams& p,
                                    double mu_min) {
    GpeParams linear = p;
    linear.g = 0.0;
    BoundsCheck b;
    b.mu_min = mu_min;
    b.n = sq_norm(psi);
    b.omega_norm_sq = b.n > 0.0 ? inner_product(psi, gpe_apply_H(psi, linear)).real() : 0.0;
    const double slack = 1e-9 * std::max(1.0, p.lambda * std::max(b.n, 1.0));
    b.positive_ok = b.omega_norm_sq > 0.0;
    b.energy_bound_ok = b.omega_norm_sq <= p.lambda * b.n + slack;
    b.norm_bound_ok = b.n <= p.lambda - mu_min + slack;
    return b;
}

double angular_momentum_per_particle(const ComplexField& psi) {
    const double n = sq_norm(psi);
    if (n <= 0.0) throw std::invalid_argument("angular_momentum_per_particle: zero field");
    return inner_product(psi, apply_Lz(psi)).real() / n;
}

}  // namespace sobograd
