#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "sobograd/functionals.hpp"
#include "sobograd/sobolev.hpp"

namespace sobograd {

enum class Method { imaginary_time, steepest_descent };

struct RkfControl {
    double initial_step = 1e-2;
    double tol_start = 1e-4;
    double tol_floor = 1e-10;
};

struct LineSearchControl {
    double growth = 2.0;
    double rel_width = 1e-4;
    int max_evals = 50;
};

struct DescentConfig {
    Method method = Method::steepest_descent;
    PreconditionerKind preconditioner = PreconditionerKind::sobolev;
    double residual_tol = 1e-8;
    double energy_tol = 1e-12;
    long max_iters = 100000;
    RkfControl rkf;
    LineSearchControl line_search;
    int stagnation_window = 25;
    // Optional absolute stopping value for the objective (used by the
    // error-functional solvers, where zero is the known optimum).
    double target_value = std::numeric_limits<double>::quiet_NaN();

    void validate() const {
        if (residual_tol <= 0.0 || energy_tol <= 0.0)
            throw std::invalid_argument("DescentConfig: tolerances must be > 0");
        if (max_iters < 1) throw std::invalid_argument("DescentConfig: max_iters must be >= 1");
    }
};

struct TraceRow {
    long iter = 0;
    double energy = 0.0;
    double residual = 0.0;
    std::vector<double> norms;  // squared L2 norm per component
    double mu = 0.0;            // eigenvalue estimate (0 when not applicable)
    double wall_ms = 0.0;
};

struct ConvergenceReport {
    long iterations = 0;
    bool converged = false;
    bool saddle_flag = false;  // stalled with significant residual
    std::string message;
    std::vector<TraceRow> trace;
    double wall_time_s = 0.0;
    std::vector<ComplexField> final_state;
};

// ---- state arithmetic for the generic drivers -------------------------------

inline double sq_norm(const VectorField& U) { return sq_norm(U.u) + sq_norm(U.w); }
inline Complex inner_product(const VectorField& a, const VectorField& b) {
    return inner_product(a.u, b.u) + inner_product(a.w, b.w);
}
inline void axpy(VectorField& y, Complex a, const VectorField& x) {
    axpy(y.u, a, x.u);
    axpy(y.w, a, x.w);
}
inline void scale(VectorField& f, Complex a) {
    scale(f.u, a);
    scale(f.w, a);
}

inline ComplexField apply_preconditioner(const Preconditioner& p, const ComplexField& g) {
    return p.apply(g);
}
inline VectorField apply_preconditioner(const Preconditioner& p, const VectorField& g) {
    return VectorField(p.apply(g.u), p.apply(g.w));
}

inline std::vector<double> component_sq_norms(const ComplexField& f) { return {sq_norm(f)}; }
inline std::vector<double> component_sq_norms(const VectorField& U) {
    return {sq_norm(U.u), sq_norm(U.w)};
}

inline std::vector<ComplexField> to_components(const ComplexField& f) { return {f}; }
inline std::vector<ComplexField> to_components(const VectorField& U) { return {U.u, U.w}; }

// ---- operations -------------------------------------------------------------

/// Exact rescale so that the squared L2 norm equals n_target.
ComplexField renormalize(const ComplexField& f, double n_target);
VectorField renormalize(const VectorField& U, double n_target_u, double n_target_w);

/// Rayleigh quotient Re<psi, H psi>/<psi,psi> for the unconstrained operator.
double eigenvalue_estimate(const ComplexField& psi,
                           const std::function<ComplexField(const ComplexField&)>& apply_h);

/// Norm-projected continuous descent: adaptive RKF45 steps of
/// d(sigma)/dtau = -P grad E(nu), nu = renormalize(sigma), with exact
/// renormalization after every accepted step.
ConvergenceReport imaginary_time_run(
    const ComplexField& psi0,
    const std::function<ComplexField(const ComplexField&)>& gradient_fn, double n_target,
    const Preconditioner& p, const DescentConfig& cfg,
    const std::function<double(const ComplexField&)>& energy_fn,
    const std::function<double(const ComplexField&)>& mu_fn = {});

namespace detail {

// Bracket + golden section + parabolic polish of phi(t) = F(x - t*d), t > 0.
// Returns the best step found; *value receives phi at that step.  A
// nonpositive return signals failure to find any decrease.
double line_minimize(const std::function<double(double)>& phi, double phi0, double t0,
                     const LineSearchControl& ls, double* value);

}  // namespace detail

/// Discrete steepest descent x_{k+1} = x_k - t_k P grad F(x_k) with scalar
/// line minimization; monotone in F.
template <class State>
ConvergenceReport steepest_descent_run(
    const State& x0, const std::function<double(const State&)>& functional_fn,
    const std::function<State(const State&)>& gradient_fn, const Preconditioner& p,
    const DescentConfig& cfg, const std::function<double(const State&)>& mu_fn = {}) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t_start)
            .count();
    };

    ConvergenceReport rep;
    State x = x0;
    double f_val = functional_fn(x);
    double step = cfg.rkf.initial_step;
    int stall = 0;
    double stall_res = std::numeric_limits<double>::infinity();

    for (long k = 0; k < cfg.max_iters; ++k) {
        State g = gradient_fn(x);
        const double gn = std::sqrt(sq_norm(g));
        const double xn = std::sqrt(sq_norm(x));
        const double residual = gn / std::max(xn, 1e-300);

        TraceRow row;
        row.iter = k;
        row.energy = f_val;
        row.residual = residual;
        row.norms = component_sq_norms(x);
        row.mu = mu_fn ? mu_fn(x) : 0.0;
        row.wall_ms = elapsed_ms();
        rep.trace.push_back(std::move(row));
        rep.iterations = k;

        if (!std::isnan(cfg.target_value) && f_val <= cfg.target_value) {
            rep.converged = true;
            rep.message = "objective reached target value";
            break;
        }
        if (residual <= cfg.residual_tol) {
            rep.converged = true;
            rep.message = "residual below tolerance";
            break;
        }

        State d = apply_preconditioner(p, g);
        auto phi = [&](double t) {
            State trial = x;
            axpy(trial, Complex(-t, 0.0), d);
            return functional_fn(trial);
        };
        double f_new = f_val;
        const double t_best = detail::line_minimize(phi, f_val, step, cfg.line_search, &f_new);
        if (t_best <= 0.0) {
            rep.message = "line search found no decrease";
            break;
        }
        axpy(x, Complex(-t_best, 0.0), d);
        step = t_best;

        const double drop = f_val - f_new;
        f_val = f_new;
        // Trapping at a critical point shows up as both the energy and the
        // residual stalling; a slowly but steadily shrinking residual is
        // ordinary ill-conditioned convergence and must not trip the guard.
        if (drop < cfg.energy_tol * std::max(1.0, std::abs(f_val)) &&
            residual > 0.99 * stall_res) {
            if (++stall >= cfg.stagnation_window) {
                rep.saddle_flag = true;
                rep.message = "energy stagnated above residual tolerance (possible saddle)";
                break;
            }
        } else {
            stall = 0;
            stall_res = residual;
        }
        if (k + 1 == cfg.max_iters) rep.message = "max_iters exceeded";
    }

    rep.iterations = rep.trace.empty() ? 0 : rep.trace.back().iter;
    rep.wall_time_s = elapsed_ms() / 1e3;
    rep.final_state = to_components(x);
    return rep;
}

}  // namespace sobograd
