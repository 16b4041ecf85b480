#include "sobograd/descent.hpp"

#include <algorithm>
#include <cmath>

namespace sobograd {

ComplexField renormalize(const ComplexField& f, double n_target) {
    if (n_target <= 0.0) throw std::invalid_argument("renormalize: N_target must be > 0");
    const double n = sq_norm(f);
    if (n <= 0.0) throw std::invalid_argument("renormalize: zero field");
    ComplexField out = f;
    scale(out, Complex(std::sqrt(n_target / n), 0.0));
    return out;
}

VectorField renormalize(const VectorField& U, double n_target_u, double n_target_w) {
    return VectorField(renormalize(U.u, n_target_u), renormalize(U.w, n_target_w));
}

double eigenvalue_estimate(const ComplexField& psi,
                           const std::function<ComplexField(const ComplexField&)>& apply_h) {
    const double n = sq_norm(psi);
    if (n <= 0.0) throw std::invalid_argument("eigenvalue_estimate: zero field");
    return inner_product(psi, apply_h(psi)).real() / n;
}

namespace detail {

double line_minimize(const std::function<double(double)>& phi, double phi0, double t0,
                     const LineSearchControl& ls, double* value) {
    int evals = 0;
    auto eval = [&](double t) {
        ++evals;
        return phi(t);
    };

    // Find any decrease, shrinking from the warm-start step.
    double t = std::max(t0, 1e-300);
    double ft = eval(t);
    while (ft >= phi0) {
        t /= ls.growth;
        if (t < 1e-16 || evals >= ls.max_evals) {
            *value = phi0;
            return -1.0;
        }
        ft = eval(t);
    }

    // Grow until the function turns upward: bracket [lo, hi] around the min.
    double lo = 0.0, mid = t, hi = t * ls.growth;
    double fmid = ft, fhi = eval(hi);
    while (fhi < fmid && evals < ls.max_evals) {
        lo = mid;
        mid = hi;
        fmid = fhi;
        hi *= ls.growth;
        fhi = eval(hi);
    }

    double best_t = mid, best_f = fmid;

    // Golden-section refinement.
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - (b - a) * invphi;
    double x2 = a + (b - a) * invphi;
    double f1 = eval(x1), f2 = eval(x2);
    while ((b - a) > ls.rel_width * b && evals < ls.max_evals) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * invphi;
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * invphi;
            f2 = eval(x2);
        }
    }
    if (f1 < best_f) best_t = x1, best_f = f1;
    if (f2 < best_f) best_t = x2, best_f = f2;

    // Parabolic polish through the two golden points and their midpoint;
    // exact for quadratic phi.
    if (evals + 2 <= ls.max_evals && x2 > x1) {
        const double pm = 0.5 * (x1 + x2);
        const double fm = eval(pm);
        const double num = (pm - x1) * (pm - x1) * (fm - f2) - (pm - x2) * (pm - x2) * (fm - f1);
        const double den = (pm - x1) * (fm - f2) - (pm - x2) * (fm - f1);
        if (fm < best_f) best_t = pm, best_f = fm;
        if (std::abs(den) > 0.0) {
            const double tv = pm - 0.5 * num / den;
            if (std::isfinite(tv) && tv > a && tv < b) {
                const double fv = eval(tv);
                if (fv < best_f) best_t = tv, best_f = fv;
            }
        }
    }

    *value = best_f;
    return (best_f < phi0) ? best_t : -1.0;
}

}  // namespace detail

namespace {

// Fehlberg 4(5) tableau.
constexpr double B21 = 1.0 / 4.0;
constexpr double B31 = 3.0 / 32.0, B32 = 9.0 / 32.0;
constexpr double B41 = 1932.0 / 2197.0, B42 = -7200.0 / 2197.0, B43 = 7296.0 / 2197.0;
constexpr double B51 = 439.0 / 216.0, B52 = -8.0, B53 = 3680.0 / 513.0, B54 = -845.0 / 4104.0;
constexpr double B61 = -8.0 / 27.0, B62 = 2.0, B63 = -3544.0 / 2565.0, B64 = 1859.0 / 4104.0,
                 B65 = -11.0 / 40.0;
constexpr double C51 = 16.0 / 135.0, C53 = 6656.0 / 12825.0, C54 = 28561.0 / 56430.0,
                 C55 = -9.0 / 50.0, C56 = 2.0 / 55.0;
constexpr double C41 = 25.0 / 216.0, C43 = 1408.0 / 2565.0, C44 = 2197.0 / 4104.0,
                 C45 = -1.0 / 5.0;

ComplexField combine(const ComplexField& y, double h,
                     std::initializer_list<std::pair<double, const ComplexField*>> terms) {
    ComplexField out = y;
    for (const auto& [c, k] : terms) axpy(out, Complex(h * c, 0.0), *k);
    return out;
}

}  // namespace

ConvergenceReport imaginary_time_run(
    const ComplexField& psi0,
    const std::function<ComplexField(const ComplexField&)>& gradient_fn, double n_target,
    const Preconditioner& p, const DescentConfig& cfg,
    const std::function<double(const ComplexField&)>& energy_fn,
    const std::function<double(const ComplexField&)>& mu_fn) {
    cfg.validate();
    if (n_target <= 0.0) throw std::invalid_argument("imaginary_time_run: N_target must be > 0");
    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t_start)
            .count();
    };

    ConvergenceReport rep;
    ComplexField nu = renormalize(psi0, n_target);
    // The preconditioner acts on the constraint-projected gradient: at a
    // stationary state grad E is parallel to nu, so the projected gradient
    // vanishes and the normalized flow has the correct fixed points (a raw
    // P grad E would be deflected off the sphere by the preconditioner).
    auto rhs = [&](const ComplexField& y) {
        ComplexField v = renormalize(y, n_target);
        ComplexField g = gradient_fn(v);
        const Complex mu_hat = inner_product(v, g) / n_target;
        axpy(g, -mu_hat, v);
        g = apply_preconditioner(p, g);
        scale(g, Complex(-1.0, 0.0));
        return g;
    };

    double h = cfg.rkf.initial_step;
    double tol = cfg.rkf.tol_start;
    double best_residual = std::numeric_limits<double>::infinity();
    int plateau = 0;

    for (long iter = 0; iter < cfg.max_iters; ++iter) {
        ComplexField k1 = rhs(nu);

        // Residual of the constrained flow: gradient minus its component
        // along nu (the norm constraint absorbs that direction).
        ComplexField proj = k1;
        const Complex c = inner_product(nu, k1) / n_target;
        axpy(proj, -c, nu);
        const double residual = std::sqrt(sq_norm(proj)) / std::sqrt(n_target);

        TraceRow row;
        row.iter = iter;
        row.energy = energy_fn(nu);
        row.residual = residual;
        row.norms = {sq_norm(nu)};
        row.mu = mu_fn ? mu_fn(nu) : 0.0;
        row.wall_ms = elapsed_ms();
        rep.trace.push_back(std::move(row));
        rep.iterations = iter;

        if (residual <= cfg.residual_tol) {
            rep.converged = true;
            rep.message = "residual below tolerance";
            break;
        }
        // The accepted-step residual settles near tol/h (error injection per
        // step balances the flow's contraction), and the equilibrium step h
        // depends on the flow's stiffness, so no fixed multiple of tol can
        // detect the plateau for every preconditioner.  Tighten whenever the
        // residual has stopped improving at the current tolerance.
        if (residual < 0.999 * best_residual) {
            best_residual = residual;
            plateau = 0;
        } else if (++plateau >= cfg.stagnation_window && tol > cfg.rkf.tol_floor) {
            tol = std::max(tol * 0.1, cfg.rkf.tol_floor);
            plateau = 0;
        }

        // One adaptive RKF45 step.
        bool accepted = false;
        for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
            ComplexField k2 = rhs(combine(nu, h, {{B21, &k1}}));
            ComplexField k3 = rhs(combine(nu, h, {{B31, &k1}, {B32, &k2}}));
            ComplexField k4 = rhs(combine(nu, h, {{B41, &k1}, {B42, &k2}, {B43, &k3}}));
            ComplexField k5 =
                rhs(combine(nu, h, {{B51, &k1}, {B52, &k2}, {B53, &k3}, {B54, &k4}}));
            ComplexField k6 = rhs(
                combine(nu, h, {{B61, &k1}, {B62, &k2}, {B63, &k3}, {B64, &k4}, {B65, &k5}}));

            ComplexField y5 =
                combine(nu, h, {{C51, &k1}, {C53, &k3}, {C54, &k4}, {C55, &k5}, {C56, &k6}});
            ComplexField y4 = combine(nu, h, {{C41, &k1}, {C43, &k3}, {C44, &k4}, {C45, &k5}});

            ComplexField diff = y5;
            axpy(diff, Complex(-1.0, 0.0), y4);
            const double err = std::sqrt(sq_norm(diff)) / std::max(std::sqrt(n_target), 1.0);

            // Keep the renormalization correction small per step.
            const double drift = std::abs(std::sqrt(sq_norm(y5) / n_target) - 1.0);

            if (err <= tol && drift <= 0.1) {
                nu = renormalize(y5, n_target);
                const double factor = (err > 0.0) ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
                h *= std::clamp(factor, 0.2, 5.0);
                accepted = true;
            } else {
                const double factor =
                    (err > tol && err > 0.0) ? 0.9 * std::pow(tol / err, 0.25) : 0.5;
                h *= std::clamp(factor, 0.1, 0.9);
                if (h < 1e-14) {
                    rep.message = "RKF step underflow";
                    rep.wall_time_s = elapsed_ms() / 1e3;
                    rep.final_state = {nu};
                    return rep;
                }
            }
        }
        if (!accepted) {
            rep.message = "RKF step control failed";
            break;
        }
        if (iter + 1 == cfg.max_iters) rep.message = "max_iters exceeded";
    }

    rep.wall_time_s = elapsed_ms() / 1e3;
    rep.final_state = {nu};
    return rep;
}

}  // namespace sobograd
