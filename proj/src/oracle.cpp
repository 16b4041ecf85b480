#include "sobograd/oracle.hpp"

#include <cmath>

#include "sobograd/descent.hpp"
#include <random>

namespace sobograd {

namespace {

template <class State>
double central_diff(const std::function<double(const State&)>& functional, const State& psi,
                    const State& direction, double h) {
    State plus = psi, minus = psi;
    axpy(plus, Complex(h, 0.0), direction);
    axpy(minus, Complex(-h, 0.0), direction);
    return (functional(plus) - functional(minus)) / (2.0 * h);
}

template <class State>
double fd_impl(const std::function<double(const State&)>& functional, const State& psi,
               const State& direction, double h) {
    if (h <= 0.0) throw std::invalid_argument("fd_directional_derivative: h must be > 0");
    const double d1 = central_diff(functional, psi, direction, h);
    const double d2 = central_diff(functional, psi, direction, 2.0 * h);
    const double scale = std::max({std::abs(d1), std::abs(d2), 1e-12});
    if (std::abs(d1 - d2) > 0.1 * scale) {
        // Cancellation suspected: Richardson-extrapolate the h, 2h pair.
        return (4.0 * d1 - d2) / 3.0;
    }
    return d1;
}

// Derivative-free 1-D minimization around x0 (both directions), golden section
// after bracketing.  Returns the minimizing abscissa.
double minimize_1d(const std::function<double(double)>& f, double x0, double f0,
                   double step) {
    double dir = 0.0, x1 = 0.0, f1 = 0.0;
    double s = step;
    for (int k = 0; k < 24 && dir == 0.0; ++k) {
        const double fp = f(x0 + s), fm = f(x0 - s);
        if (fp < f0 && fp <= fm) {
            dir = 1.0;
            x1 = x0 + s;
            f1 = fp;
        } else if (fm < f0) {
            dir = -1.0;
            x1 = x0 - s;
            f1 = fm;
        } else {
            s *= 0.5;
        }
    }
    if (dir == 0.0) return x0;

    double a = x0, xm = x1, fm = f1;
    double b = x1 + dir * s;
    double fb = f(b);
    while (fb < fm) {
        a = xm;
        xm = b;
        fm = fb;
        s *= 2.0;
        b = xm + dir * s;
        fb = f(b);
    }
    if (a > b) std::swap(a, b);

    constexpr double invphi = 0.6180339887498949;
    double p = b - (b - a) * invphi;
    double q = a + (b - a) * invphi;
    double fp = f(p), fq = f(q);
    const double width_tol = 1e-9 * std::max(1.0, std::abs(b)) ;
    for (int k = 0; k < 80 && (b - a) > width_tol; ++k) {
        if (fp < fq) {
            b = q;
            q = p;
            fq = fp;
            p = b - (b - a) * invphi;
            fp = f(p);
        } else {
            a = p;
            p = q;
            fp = fq;
            q = a + (b - a) * invphi;
            fq = f(q);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double fd_directional_derivative(
    const std::function<double(const ComplexField&)>& functional, const ComplexField& psi,
    const ComplexField& direction, double h) {
    return fd_impl(functional, psi, direction, h);
}

double fd_directional_derivative(
    const std::function<double(const VectorField&)>& functional, const VectorField& psi,
    const VectorField& direction, double h) {
    return fd_impl(functional, psi, direction, h);
}

ComplexField dense_minimize(const std::function<double(const ComplexField&)>& functional,
                            const GridPtr& grid, const DenseMinimizeOptions& opt) {
    if (grid->size() > 64)
        throw std::invalid_argument("dense_minimize: grid larger than 8x8 unknowns");

    ComplexField best(grid);
    double best_val = functional(best);  // the trivial state is always a candidate

    for (int restart = 0; restart < opt.restarts; ++restart) {
        std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(restart) * 7919);
        std::normal_distribution<double> gauss(0.0, opt.init_amplitude);
        ComplexField x(grid);
        for (Complex& v : x.samples) v = Complex(gauss(rng), gauss(rng));

        double fx = functional(x);
        double step = 0.25;
        for (int cycle = 0; cycle < opt.max_cycles; ++cycle) {
            const double f_before = fx;
            for (std::size_t i = 0; i < x.samples.size(); ++i) {
                for (int part = 0; part < 2; ++part) {
                    const double c0 =
                        part == 0 ? x.samples[i].real() : x.samples[i].imag();
                    auto f1d = [&](double c) {
                        Complex v = x.samples[i];
                        if (part == 0)
                            v.real(c);
                        else
                            v.imag(c);
                        Complex saved = x.samples[i];
                        x.samples[i] = v;
                        const double r = functional(x);
                        x.samples[i] = saved;
                        return r;
                    };
                    const double c1 = minimize_1d(f1d, c0, fx, step);
                    if (c1 != c0) {
                        if (part == 0)
                            x.samples[i].real(c1);
                        else
                            x.samples[i].imag(c1);
                        fx = functional(x);
                    }
                }
            }
            const double improvement = f_before - fx;
            if (improvement < opt.tol) {
                if (step < 1e-6) break;
                step *= 0.1;  // refine the probing scale before giving up
            }
        }
        if (fx < best_val) {
            best_val = fx;
            best = x;
        }
    }
    return best;
}

}  // namespace sobograd
