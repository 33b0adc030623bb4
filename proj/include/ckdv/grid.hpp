#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace ckdv {

using Complex = std::complex<double>;

/// Half spectrum of a real field: modes m = 0 .. n/2 (FFTW r2c layout,
/// unnormalised).
using Spectrum = std::vector<Complex>;

/// Periodic, equispaced sampling of the time-like coordinate (t or tau).
///
/// Cheap to copy: all copies share the immutable node table and FFT plans.
class SpectralGrid {
public:
    /// Throws std::invalid_argument for odd n, n < 8, or length <= 0.
    SpectralGrid(std::size_t n, double length, double center = 0.0);

    std::size_t size() const { return n_; }
    double length() const { return length_; }
    double center() const { return center_; }
    double spacing() const { return length_ / static_cast<double>(n_); }

    std::span<const double> nodes() const;

    /// Full wavenumber layout 2*pi*m/L, m = 0, 1, .., n/2, -(n/2-1), .., -1.
    /// The Nyquist entry carries +pi*n/L.
    std::vector<double> wavenumbers() const;

    /// Wavenumber of half-spectrum mode m (0 <= m <= n/2).
    double wavenumber(std::size_t m) const { return dk_ * static_cast<double>(m); }
    std::size_t modes() const { return n_ / 2 + 1; }
    std::size_t nyquist() const { return n_ / 2; }
    double max_wavenumber() const { return dk_ * static_cast<double>(n_ / 2); }

    Spectrum forward(std::span<const double> values) const;
    /// Inverse transform including the 1/n normalisation.
    std::vector<double> inverse(const Spectrum& spectrum) const;

    bool operator==(const SpectralGrid& other) const;

    struct Plans;  // opaque FFT plan bundle

private:
    std::size_t n_;
    double length_;
    double center_;
    double dk_;
    std::shared_ptr<const std::vector<double>> nodes_;
    std::shared_ptr<const Plans> plans_;
};

SpectralGrid make_grid(std::size_t n, double length, double center = 0.0);

/// Real samples of a function on a SpectralGrid.
class RealField {
public:
    explicit RealField(SpectralGrid grid);
    RealField(SpectralGrid grid, std::vector<double> values);

    template <typename Fn>
    static RealField sample(const SpectralGrid& grid, Fn&& fn)
    {
        std::vector<double> v(grid.size());
        auto x = grid.nodes();
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(x[j]);
        return RealField(grid, std::move(v));
    }

    const SpectralGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }

    double mean() const;
    double sup_norm() const;
    /// sqrt(dx * sum f^2), the periodic L2 norm.
    double l2_norm() const;
    /// dx * sum f
    double integral() const;
    bool all_finite() const;

    RealField& operator+=(const RealField& o);
    RealField& operator-=(const RealField& o);
    RealField& operator*=(double c);

private:
    SpectralGrid grid_;
    std::vector<double> values_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(RealField a, double c);
RealField operator*(double c, RealField a);
/// Point-wise product.
RealField product(const RealField& a, const RealField& b);

/// L2 norm computed from Fourier coefficients (Parseval).
double spectral_l2_norm(const RealField& f);

/// Coefficients (ik)^order times those of f. Order 1..4. The Nyquist
/// mode is dropped for odd orders.
RealField spectral_derivative(const RealField& f, int order);

/// Zero-mean g with g' = f. Throws MeanValueError when |mean(f)| exceeds
/// mean_tol (default 1e-10 * sup|f|).
RealField spectral_antiderivative(const RealField& f, std::optional<double> mean_tol = {});

/// Fourier multiplier -k^2/(1+k^2), i.e. d^2/dt^2 (1 - d^2/dt^2)^{-1}.
RealField apply_b2(const RealField& f);

/// g(x) = f(x + shift), exact for band-limited f.
RealField spectral_shift(const RealField& f, double shift);

/// Same function on an n-point grid of equal length and center: zero
/// padding when refining, truncation (Nyquist dropped) when coarsening.
RealField spectral_resample(const RealField& f, std::size_t n);

/// Zero every mode with |m| > n/3 in a half spectrum.
void dealias_two_thirds(Spectrum& s);

/// omega^2 = k^2 / (1 - sigma k^2) for the 2D regularised Boussinesq
/// equation. Throws SingularDispersion where the denominator vanishes.
double dispersion_omega_squared(double k, int sigma);

} // namespace ckdv
