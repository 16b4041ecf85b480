#include "sobograd/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace sobograd {

namespace {
// The FFTW planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

std::shared_ptr<const Grid> Grid::make(std::vector<int> dims,
                                       std::vector<double> lengths,
                                       std::vector<double> origins) {
    if (dims.empty()) throw std::invalid_argument("make_grid: empty dims");
    if (lengths.size() != dims.size())
        throw std::invalid_argument("make_grid: dims/lengths size mismatch");
    if (origins.empty()) {
        origins.resize(dims.size());
        for (std::size_t i = 0; i < dims.size(); ++i) origins[i] = -0.5 * lengths[i];
    }
    if (origins.size() != dims.size())
        throw std::invalid_argument("make_grid: dims/origins size mismatch");

    auto g = std::shared_ptr<Grid>(new Grid());
    g->dims_ = dims;
    g->lengths_ = lengths;
    g->origins_ = origins;
    g->total_ = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < 2) throw std::invalid_argument("make_grid: N_i must be >= 2");
        if (lengths[i] <= 0.0) throw std::invalid_argument("make_grid: L_i must be > 0");
        g->total_ *= static_cast<std::size_t>(dims[i]);
        g->volume_ *= lengths[i];
        g->spacings_.push_back(lengths[i] / dims[i]);
    }
    g->cell_volume_ = g->volume_ / static_cast<double>(g->total_);

    g->wavenumbers_.resize(dims.size());
    g->phase_.resize(dims.size());
    for (std::size_t ax = 0; ax < dims.size(); ++ax) {
        const int n = dims[ax];
        const int half = n / 2;
        const double base = 2.0 * std::numbers::pi / lengths[ax];
        auto& ks = g->wavenumbers_[ax];
        auto& ph = g->phase_[ax];
        ks.resize(n);
        ph.resize(n);
        for (int j = 0; j < n; ++j) {
            const int m = (j <= half) ? j : j - n;  // {0..M, -M+1..-1}
            ks[j] = base * m;
            ph[j] = std::exp(Complex(0.0, -ks[j] * origins[ax]));
        }
    }

    g->strides_.assign(dims.size(), 1);
    for (int ax = static_cast<int>(dims.size()) - 2; ax >= 0; --ax)
        g->strides_[ax] = g->strides_[ax + 1] * static_cast<std::size_t>(dims[ax + 1]);

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        std::vector<Complex> a(g->total_), b(g->total_);
        auto* in = reinterpret_cast<fftw_complex*>(a.data());
        auto* out = reinterpret_cast<fftw_complex*>(b.data());
        g->plan_fwd_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), in, out,
                                     FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        g->plan_inv_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), in, out,
                                     FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!g->plan_fwd_ || !g->plan_inv_) throw std::runtime_error("make_grid: FFTW planning failed");
    }
    return g;
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

double Grid::k_squared(std::size_t flat) const {
    double s = 0.0;
    for (int ax = 0; ax < rank(); ++ax) {
        const std::size_t n = (flat / strides_[ax]) % static_cast<std::size_t>(dims_[ax]);
        const double k = wavenumbers_[ax][n];
        s += k * k;
    }
    return s;
}

void Grid::decompose(std::size_t flat, int* idx) const {
    for (int ax = 0; ax < rank(); ++ax)
        idx[ax] = static_cast<int>((flat / strides_[ax]) % static_cast<std::size_t>(dims_[ax]));
}

bool Grid::same_layout(const Grid& other) const {
    return dims_ == other.dims_ && lengths_ == other.lengths_ && origins_ == other.origins_;
}

void Grid::fft_forward(const Complex* in, Complex* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Grid::fft_inverse(const Complex* in, Complex* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_inv_),
                     reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

GridPtr make_grid(std::vector<int> dims, std::vector<double> lengths,
                  std::vector<double> origins) {
    return Grid::make(std::move(dims), std::move(lengths), std::move(origins));
}

void check_finite(const ComplexField& f, const char* what) {
    for (const Complex& v : f.samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::runtime_error(std::string(what) + ": non-finite sample");
}

namespace {

// Multiply coefficient n by the product over axes of phase[ax][n_ax].
void apply_axis_phases(const Grid& g, std::vector<Complex>& c, bool conjugate) {
    const int r = g.rank();
    std::vector<int> idx(r);
    for (std::size_t i = 0; i < c.size(); ++i) {
        g.decompose(i, idx.data());
        Complex p(1.0, 0.0);
        for (int ax = 0; ax < r; ++ax) p *= g.origin_phase(ax)[idx[ax]];
        c[i] *= conjugate ? std::conj(p) : p;
    }
}

}  // namespace

SpectralField forward_transform(const ComplexField& f) {
    check_finite(f, "forward_transform");
    const Grid& g = *f.grid;
    SpectralField out{f.grid, std::vector<Complex>(g.size())};
    g.fft_forward(f.samples.data(), out.coefficients.data());
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (Complex& c : out.coefficients) c *= inv_n;
    apply_axis_phases(g, out.coefficients, false);
    return out;
}

ComplexField inverse_transform(const SpectralField& F) {
    const Grid& g = *F.grid;
    std::vector<Complex> c = F.coefficients;
    apply_axis_phases(g, c, true);
    ComplexField out(F.grid);
    g.fft_inverse(c.data(), out.samples.data());
    return out;
}

ComplexField laplacian(const ComplexField& f) {
    SpectralField F = forward_transform(f);
    const Grid& g = *f.grid;
    for (std::size_t i = 0; i < F.coefficients.size(); ++i)
        F.coefficients[i] *= -g.k_squared(i);
    return inverse_transform(F);
}

ComplexField partial_derivative(const ComplexField& f, int axis) {
    const Grid& g = *f.grid;
    if (axis < 0 || axis >= g.rank())
        throw std::invalid_argument("partial_derivative: axis out of range");
    SpectralField F = forward_transform(f);
    const auto& ks = g.wavenumbers(axis);
    const int n = g.dim(axis);
    const bool even = (n % 2 == 0);
    const int nyquist = n / 2;
    std::vector<int> idx(g.rank());
    for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
        g.decompose(i, idx.data());
        const int j = idx[axis];
        if (even && j == nyquist)
            F.coefficients[i] = 0.0;
        else
            F.coefficients[i] *= Complex(0.0, ks[j]);
    }
    return inverse_transform(F);
}

Complex integrate(const ComplexField& f) {
    Complex s(0.0, 0.0);
    for (const Complex& v : f.samples) s += v;
    return s * f.grid->cell_volume();
}

ComplexField fourier_interpolate(const ComplexField& f, std::vector<int> new_dims) {
    const Grid& g = *f.grid;
    if (static_cast<int>(new_dims.size()) != g.rank())
        throw std::invalid_argument("fourier_interpolate: rank mismatch");
    for (int ax = 0; ax < g.rank(); ++ax)
        if (new_dims[ax] < g.dim(ax))
            throw std::invalid_argument("fourier_interpolate: decimation not supported");

    std::vector<double> lengths, origins;
    for (int ax = 0; ax < g.rank(); ++ax) {
        lengths.push_back(g.length(ax));
        origins.push_back(g.origin(ax));
    }
    GridPtr fine = make_grid(new_dims, lengths, origins);

    SpectralField F = forward_transform(f);
    SpectralField G{fine, std::vector<Complex>(fine->size(), Complex(0.0, 0.0))};

    // Per-axis scatter: source slot j -> list of (target slot, weight).
    struct Slot { int target; double weight; };
    std::vector<std::vector<std::vector<Slot>>> scatter(g.rank());
    for (int ax = 0; ax < g.rank(); ++ax) {
        const int n = g.dim(ax);
        const int nn = new_dims[ax];
        const int half = n / 2;
        scatter[ax].resize(n);
        for (int j = 0; j < n; ++j) {
            const int m = (j <= half) ? j : j - n;
            if (n % 2 == 0 && j == half && nn > n) {
                scatter[ax][j] = {{half, 0.5}, {nn - half, 0.5}};
            } else {
                const int t = (m >= 0) ? m : m + nn;
                scatter[ax][j] = {{t, 1.0}};
            }
        }
    }

    std::vector<int> idx(g.rank());
    std::vector<std::size_t> fine_strides(g.rank(), 1);
    for (int ax = g.rank() - 2; ax >= 0; --ax)
        fine_strides[ax] = fine_strides[ax + 1] * static_cast<std::size_t>(new_dims[ax + 1]);

    for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
        if (F.coefficients[i] == Complex(0.0, 0.0)) continue;
        g.decompose(i, idx.data());
        // Expand the (at most 2^rank) target combinations recursively.
        struct Rec {
            const std::vector<std::vector<std::vector<Slot>>>& sc;
            const std::vector<std::size_t>& strides;
            std::vector<Complex>& out;
            const std::vector<int>& idx;
            int rank;
            void go(int ax, std::size_t off, Complex val) {
                if (ax == rank) {
                    out[off] += val;
                    return;
                }
                for (const Slot& s : sc[ax][idx[ax]])
                    go(ax + 1, off + s.target * strides[ax], val * s.weight);
            }
        } rec{scatter, fine_strides, G.coefficients, idx, g.rank()};
        rec.go(0, 0, F.coefficients[i]);
    }
    return inverse_transform(G);
}

Complex inner_product(const ComplexField& f, const ComplexField& g) {
    if (f.samples.size() != g.samples.size())
        throw std::invalid_argument("inner_product: size mismatch");
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        s += std::conj(f.samples[i]) * g.samples[i];
    return s * f.grid->cell_volume();
}

double sq_norm(const ComplexField& f) {
    double s = 0.0;
    for (const Complex& v : f.samples) s += std::norm(v);
    return s * f.grid->cell_volume();
}

double norm(const ComplexField& f) { return std::sqrt(sq_norm(f)); }

void axpy(ComplexField& y, Complex a, const ComplexField& x) {
    for (std::size_t i = 0; i < y.samples.size(); ++i) y.samples[i] += a * x.samples[i];
}

void scale(ComplexField& f, Complex a) {
    for (Complex& v : f.samples) v *= a;
}

}  // namespace sobograd
