#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Fornberg weights for the m-th derivative at 0 on nodes j*h, j = -p..p.
inline std::vector<double> central_weights(int m, int p)
{
    const int n = 2 * p + 1;
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = static_cast<double>(j - p);
    std::vector<std::vector<std::vector<double>>> c(
        m + 1, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
    c[0][0][0] = 1.0;
    double c1 = 1.0;
    for (int i = 1; i < n; ++i) {
        double c2 = 1.0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            for (int k = 0; k <= std::min(i, m); ++k) {
                const double prev = k > 0 ? c[k - 1][i - 1][j] : 0.0;
                c[k][i][j] = (x[i] * c[k][i - 1][j] - k * prev) / c3;
            }
        }
        for (int k = 0; k <= std::min(i, m); ++k) {
            const double prev = k > 0 ? c[k - 1][i - 1][i - 1] : 0.0;
            c[k][i][i] = c1 / c2 * (k * prev - x[i - 1] * c[k][i - 1][i - 1]);
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[m][n - 1][j];
    return w;
}

inline double finite_difference(const std::function<double(double)>& f, double x, int m, double h, int p = 5)
{
    const auto w = central_weights(m, p);
    double acc = 0.0;
    for (int j = -p; j <= p; ++j) acc += w[j + p] * f(x + j * h);
    return acc / std::pow(h, m);
}

// Maclaurin series of Ai, Ai', Bi, Bi' in long double.
struct SeriesAiry {
    long double ai, aip, bi, bip;
};

inline SeriesAiry maclaurin_airy(long double z, int terms = 120)
{
    const long double c1 = 1.0L / (std::pow(3.0L, 2.0L / 3.0L) * std::tgamma(2.0L / 3.0L));
    const long double c2 = 1.0L / (std::pow(3.0L, 1.0L / 3.0L) * std::tgamma(1.0L / 3.0L));
    // f = sum a_k z^k with 1 + z^3/6 + ..., g = z + z^4/12 + ...
    long double f = 0, fp = 0, g = 0, gp = 0;
    long double tf = 1.0L;  // coefficient of z^{3k}
    long double tg = 1.0L;  // coefficient of z^{3k+1}
    for (int k = 0; k < terms; ++k) {
        const int e = 3 * k;
        const long double zf = std::pow(z, static_cast<long double>(e));
        f += tf * zf;
        if (e > 0) fp += tf * e * std::pow(z, static_cast<long double>(e - 1));
        g += tg * zf * z;
        gp += tg * (e + 1) * zf;
        tf /= static_cast<long double>((e + 2) * (e + 3));
        tg /= static_cast<long double>((e + 3) * (e + 4));
    }
    const long double s3 = std::sqrt(3.0L);
    return {c1 * f - c2 * g, c1 * fp - c2 * gp, s3 * (c1 * f + c2 * g), s3 * (c1 * fp + c2 * gp)};
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace oracle
