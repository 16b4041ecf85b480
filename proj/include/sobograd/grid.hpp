#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

namespace sobograd {

using Complex = std::complex<double>;

/// Periodic rectangular sampling lattice with precomputed FFT-ordered
/// wavenumber tables.  Immutable after construction; shareable between
/// threads.  FFT plans are created once per grid and executed on
/// caller-owned buffers.
class Grid {
public:
    static std::shared_ptr<const Grid> make(std::vector<int> dims,
                                            std::vector<double> lengths,
                                            std::vector<double> origins = {});
    ~Grid();

    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int rank() const { return static_cast<int>(dims_.size()); }
    std::size_t size() const { return total_; }
    const std::vector<int>& dims() const { return dims_; }
    int dim(int axis) const { return dims_[axis]; }
    double length(int axis) const { return lengths_[axis]; }
    double origin(int axis) const { return origins_[axis]; }
    double spacing(int axis) const { return spacings_[axis]; }
    double volume() const { return volume_; }
    double cell_volume() const { return cell_volume_; }

    /// Wavenumber table for one axis, FFT order: k_n = 2*pi*m/L with
    /// m in {0,1,...,M,-M+1,...,-1}, M = floor(N/2).
    const std::vector<double>& wavenumbers(int axis) const { return wavenumbers_[axis]; }

    /// Coordinate measured from the domain center: x = n*h - L/2.
    double centered_coord(int axis, int index) const {
        return index * spacings_[axis] - 0.5 * lengths_[axis];
    }

    /// |k|^2 at a flat lattice index (FFT ordering).
    double k_squared(std::size_t flat) const;

    void decompose(std::size_t flat, int* idx) const;

    bool same_layout(const Grid& other) const;

    // Raw unnormalized c2c transforms (exp(-ikx) forward sign), out-of-place.
    void fft_forward(const Complex* in, Complex* out) const;
    void fft_inverse(const Complex* in, Complex* out) const;

    /// Per-axis phase exp(-i k_n a) accounting for the lattice origin.
    const std::vector<Complex>& origin_phase(int axis) const { return phase_[axis]; }

private:
    Grid() = default;

    std::vector<int> dims_;
    std::vector<double> lengths_;
    std::vector<double> origins_;
    std::vector<double> spacings_;
    std::vector<std::vector<double>> wavenumbers_;
    std::vector<std::vector<Complex>> phase_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
    double volume_ = 1.0;
    double cell_volume_ = 1.0;

    void* plan_fwd_ = nullptr;  // fftw_plan
    void* plan_inv_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Sampled complex function, one value per lattice point, row-major.
struct ComplexField {
    GridPtr grid;
    std::vector<Complex> samples;

    ComplexField() = default;
    explicit ComplexField(GridPtr g) : grid(std::move(g)), samples(grid->size()) {}
    ComplexField(GridPtr g, std::vector<Complex> s) : grid(std::move(g)), samples(std::move(s)) {
        if (samples.size() != grid->size()) throw std::invalid_argument("sample count does not match grid");
    }
};

/// Fourier coefficients in FFT ordering, convention f(x_m) = sum_n c_n exp(i k_n x_m).
struct SpectralField {
    GridPtr grid;
    std::vector<Complex> coefficients;
};

GridPtr make_grid(std::vector<int> dims, std::vector<double> lengths,
                  std::vector<double> origins = {});

SpectralField forward_transform(const ComplexField& f);
ComplexField inverse_transform(const SpectralField& F);

ComplexField laplacian(const ComplexField& f);

/// Spectral d/dx_axis; the unpaired Nyquist mode (even N) is zeroed so
/// derivatives of real fields stay real.
ComplexField partial_derivative(const ComplexField& f, int axis);

/// Lattice sum times cell volume (spectrally accurate periodic quadrature).
Complex integrate(const ComplexField& f);

/// Zero-padding interpolation onto a finer lattice with the same lengths.
/// Even-N Nyquist coefficients are split equally between the +k and -k slots.
ComplexField fourier_interpolate(const ComplexField& f, std::vector<int> new_dims);

// Field arithmetic used throughout the solvers.  All respect the lattice
// measure: <f,g> = cell_volume * sum conj(f)*g.
Complex inner_product(const ComplexField& f, const ComplexField& g);
double sq_norm(const ComplexField& f);
double norm(const ComplexField& f);
void axpy(ComplexField& y, Complex a, const ComplexField& x);
void scale(ComplexField& f, Complex a);
void check_finite(const ComplexField& f, const char* what);

}  // namespace sobograd
