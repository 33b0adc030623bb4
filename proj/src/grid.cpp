#include "ckdv/grid.hpp"

#include "ckdv/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ckdv {

// FFTW planning is not thread safe; executing a plan on new arrays is.
struct SpectralGrid::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

std::shared_ptr<const SpectralGrid::Plans> plans_for(std::size_t n)
{
    static std::map<std::size_t, std::shared_ptr<const SpectralGrid::Plans>> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    const int ni = static_cast<int>(n);
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
    auto plans = std::make_shared<SpectralGrid::Plans>();
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans->r2c = fftw_plan_dft_r2c_1d(ni, real, cplx, flags);
    plans->c2r = fftw_plan_dft_c2r_1d(ni, cplx, real, flags);
    fftw_free(cplx);
    fftw_free(real);
    if (!plans->r2c || !plans->c2r) throw std::runtime_error("FFTW planning failed for n = " + std::to_string(n));
    cache.emplace(n, plans);
    return plans;
}

} // namespace

SpectralGrid::SpectralGrid(std::size_t n, double length, double center)
    : n_(n), length_(length), center_(center)
{
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("grid length must be positive");
    dk_ = 2.0 * std::numbers::pi / length;
    auto nodes = std::make_shared<std::vector<double>>(n);
    const double h = length / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) (*nodes)[j] = center - 0.5 * length + static_cast<double>(j) * h;
    nodes_ = std::move(nodes);
    plans_ = plans_for(n);
}

SpectralGrid make_grid(std::size_t n, double length, double center)
{
    return SpectralGrid(n, length, center);
}

std::span<const double> SpectralGrid::nodes() const { return *nodes_; }

std::vector<double> SpectralGrid::wavenumbers() const
{
    std::vector<double> k(n_);
    const auto half = static_cast<long>(n_ / 2);
    for (long m = 0; m < static_cast<long>(n_); ++m) {
        const long idx = m <= half ? m : m - static_cast<long>(n_);
        k[static_cast<std::size_t>(m)] = dk_ * static_cast<double>(idx);
    }
    return k;
}

Spectrum SpectralGrid::forward(std::span<const double> values) const
{
    if (values.size() != n_) throw std::invalid_argument("field size does not match grid");
    Spectrum out(modes());
    // r2c does not modify its input
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(values.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> SpectralGrid::inverse(const Spectrum& spectrum) const
{
    if (spectrum.size() != modes()) throw std::invalid_argument("spectrum size does not match grid");
    Spectrum scratch = spectrum;  // c2r destroys its input
    std::vector<double> out(n_);
    fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    const double inv = 1.0 / static_cast<double>(n_);
    for (double& x : out) x *= inv;
    return out;
}

bool SpectralGrid::operator==(const SpectralGrid& other) const
{
    return n_ == other.n_ && length_ == other.length_ && center_ == other.center_;
}

// ---------------------------------------------------------------------------

RealField::RealField(SpectralGrid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

RealField::RealField(SpectralGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (values_.size() != grid_.size()) throw std::invalid_argument("field size does not match grid");
}

double RealField::mean() const
{
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
}

double RealField::sup_norm() const
{
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double RealField::l2_norm() const
{
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s * grid_.spacing());
}

double RealField::integral() const { return mean() * grid_.length(); }

bool RealField::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

static void check_same_grid(const RealField& a, const RealField& b)
{
    if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

RealField& RealField::operator+=(const RealField& o)
{
    check_same_grid(*this, o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
}

RealField& RealField::operator-=(const RealField& o)
{
    check_same_grid(*this, o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
}

RealField& RealField::operator*=(double c)
{
    for (double& v : values_) v *= c;
    return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(RealField a, double c) { return a *= c; }
RealField operator*(double c, RealField a) { return a *= c; }

RealField product(const RealField& a, const RealField& b)
{
    check_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] * b[j];
    return RealField(a.grid(), std::move(v));
}

double spectral_l2_norm(const RealField& f)
{
    const auto& g = f.grid();
    const Spectrum s = g.forward(f.values());
    double sum = std::norm(s[0]) + std::norm(s[g.nyquist()]);
    for (std::size_t m = 1; m < g.nyquist(); ++m) sum += 2.0 * std::norm(s[m]);
    const double n = static_cast<double>(g.size());
    return std::sqrt(sum * g.length() / (n * n));
}

RealField spectral_derivative(const RealField& f, int order)
{
    if (order < 1 || order > 4) throw std::invalid_argument("derivative order must be in 1..4");
    const auto& g = f.grid();
    Spectrum s = g.forward(f.values());
    for (std::size_t m = 0; m < s.size(); ++m) s[m] *= std::pow(Complex(0.0, g.wavenumber(m)), order);
    if (order % 2 == 1) s[g.nyquist()] = 0.0;
    return RealField(g, g.inverse(s));
}

RealField spectral_antiderivative(const RealField& f, std::optional<double> mean_tol)
{
    const auto& g = f.grid();
    const double tol = mean_tol.value_or(1e-10 * f.sup_norm());
    const double mean = f.mean();
    if (std::abs(mean) > tol) {
        throw MeanValueError("antiderivative needs a zero-mean field, mean = " + std::to_string(mean) +
                             ", tolerance = " + std::to_string(tol));
    }
    Spectrum s = g.forward(f.values());
    s[0] = 0.0;
    s[g.nyquist()] = 0.0;
    for (std::size_t m = 1; m < g.nyquist(); ++m) s[m] /= Complex(0.0, g.wavenumber(m));
    return RealField(g, g.inverse(s));
}

RealField apply_b2(const RealField& f)
{
    const auto& g = f.grid();
    Spectrum s = g.forward(f.values());
    for (std::size_t m = 0; m < s.size(); ++m) {
        const double k2 = g.wavenumber(m) * g.wavenumber(m);
        s[m] *= -k2 / (1.0 + k2);
    }
    return RealField(g, g.inverse(s));
}

RealField spectral_shift(const RealField& f, double shift)
{
    const auto& g = f.grid();
    Spectrum s = g.forward(f.values());
    for (std::size_t m = 0; m < g.nyquist(); ++m) s[m] *= std::polar(1.0, g.wavenumber(m) * shift);
    s[g.nyquist()] *= std::cos(g.max_wavenumber() * shift);
    return RealField(g, g.inverse(s));
}

RealField spectral_resample(const RealField& f, std::size_t n)
{
    const auto& g = f.grid();
    const SpectralGrid out_grid = make_grid(n, g.length(), g.center());
    const Spectrum s = g.forward(f.values());
    Spectrum t(out_grid.modes(), Complex(0.0));
    const double scale = static_cast<double>(n) / static_cast<double>(g.size());
    const std::size_t common = std::min(g.nyquist(), out_grid.nyquist());
    for (std::size_t m = 0; m < common; ++m) t[m] = scale * s[m];
    // an old Nyquist cosine becomes an ordinary mode shared with its mirror
    if (n > g.size()) t[g.nyquist()] = 0.5 * scale * s[g.nyquist()];
    return RealField(out_grid, out_grid.inverse(t));
}

void dealias_two_thirds(Spectrum& s)
{
    const std::size_t n = 2 * (s.size() - 1);
    for (std::size_t m = n / 3 + 1; m < s.size(); ++m) s[m] = 0.0;
}

double dispersion_omega_squared(double k, int sigma)
{
    if (sigma != 1 && sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
    const double denom = 1.0 - static_cast<double>(sigma) * k * k;
    if (std::abs(denom) <= 1e-14) throw SingularDispersion("1 - sigma k^2 vanishes at k = " + std::to_string(k));
    return k * k / denom;
}

} // namespace ckdv
