#include "ckdv/airy.hpp"

#include "ckdv/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ckdv {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int table_min = -12;
constexpr int table_max = 12;
constexpr std::size_t table_size = table_max - table_min + 1;

struct Jet {
    double w;
    double dw;
};

// One step of the power series of w'' = z w about z0.
// (k)(k-1) a_k = z0 a_{k-2} + a_{k-3}
Jet taylor_step(double z0, Jet at, double h)
{
    double a_km3 = 0.0;
    double a_km2 = at.w;
    double a_km1 = at.dw;
    double hp = h;  // h^(k-1)
    double w = at.w + at.dw * h;
    double dw = at.dw;
    const double scale = std::abs(at.w) + std::abs(at.dw * h) + 1e-300;
    int small = 0;
    for (int k = 2; k < 200; ++k) {
        const double a_k = (z0 * a_km2 + a_km3) / (static_cast<double>(k) * static_cast<double>(k - 1));
        dw += static_cast<double>(k) * a_k * hp;
        hp *= h;
        const double term = a_k * hp;
        w += term;
        if (std::abs(term) < 1e-18 * scale) {
            if (++small >= 3) break;
        } else {
            small = 0;
        }
        a_km3 = a_km2;
        a_km2 = a_km1;
        a_km1 = a_k;
    }
    return {w, dw};
}

// u_k of the Airy asymptotic series; v_k = -(6k+1)/(6k-1) u_k.
struct AsymptoticCoefficients {
    static constexpr int count = 40;
    std::array<double, count> u{};
    std::array<double, count> v{};
    AsymptoticCoefficients()
    {
        u[0] = 1.0;
        v[0] = 1.0;
        for (int k = 1; k < count; ++k) {
            const double kk = k;
            u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216.0 * kk);
            v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
        }
    }
};

const AsymptoticCoefficients& coeffs()
{
    static const AsymptoticCoefficients c;
    return c;
}

// sum_k sign^k c_k zeta^-k over indices first, first+stride, ..., stopping at
// the smallest term (optimal truncation of a divergent series).
double asymptotic_sum(const std::array<double, AsymptoticCoefficients::count>& c, double zeta, int first,
                      int stride, bool alternate)
{
    double sum = 0.0;
    double last = std::numeric_limits<double>::infinity();
    const double inv = 1.0 / zeta;
    for (int idx = first, j = 0; idx < AsymptoticCoefficients::count; idx += stride, ++j) {
        double term = c[idx] * std::pow(inv, idx);
        if (alternate && (j % 2 == 1)) term = -term;
        if (std::abs(term) > std::abs(last)) break;
        sum += term;
        last = term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

AiryValues asymptotic_positive(double z, bool with_bi)
{
    const auto& c = coeffs();
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    const double q = std::sqrt(std::sqrt(z));
    const double su_alt = asymptotic_sum(c.u, zeta, 0, 1, true);
    const double sv_alt = asymptotic_sum(c.v, zeta, 0, 1, true);
    const double decay = std::exp(-zeta);
    AiryValues r;
    r.ai = decay / (2.0 * std::sqrt(pi) * q) * su_alt;
    r.ai_prime = -q * decay / (2.0 * std::sqrt(pi)) * sv_alt;
    if (with_bi) {
        const double grow = std::exp(zeta);
        r.bi = grow / (std::sqrt(pi) * q) * asymptotic_sum(c.u, zeta, 0, 1, false);
        r.bi_prime = q * grow / std::sqrt(pi) * asymptotic_sum(c.v, zeta, 0, 1, false);
    }
    return r;
}

AiryValues asymptotic_negative(double z)
{
    const auto& c = coeffs();
    const double x = -z;
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double q = std::sqrt(std::sqrt(x));
    const double s = std::sin(zeta);
    const double co = std::cos(zeta);
    // theta = zeta + pi/4
    const double sin_t = (s + co) / std::numbers::sqrt2;
    const double cos_t = (co - s) / std::numbers::sqrt2;
    const double pu = asymptotic_sum(c.u, zeta, 0, 2, true);
    const double qu = asymptotic_sum(c.u, zeta, 1, 2, true);
    const double pv = asymptotic_sum(c.v, zeta, 0, 2, true);
    const double qv = asymptotic_sum(c.v, zeta, 1, 2, true);
    const double a = 1.0 / (std::sqrt(pi) * q);
    const double b = q / std::sqrt(pi);
    AiryValues r;
    r.ai = a * (sin_t * pu - cos_t * qu);
    r.ai_prime = -b * (cos_t * pv + sin_t * qv);
    r.bi = a * (cos_t * pu + sin_t * qu);
    r.bi_prime = b * (sin_t * pv - cos_t * qv);
    return r;
}

struct AiryTable {
    std::array<AiryValues, table_size> at{};

    AiryTable()
    {
        // Maclaurin data at the origin.
        const double ai0 = 1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0));
        const double aip0 = -1.0 / (std::pow(3.0, 1.0 / 3.0) * std::tgamma(1.0 / 3.0));
        const double bi0 = 1.0 / (std::pow(3.0, 1.0 / 6.0) * std::tgamma(2.0 / 3.0));
        const double bip0 = std::pow(3.0, 1.0 / 6.0) / std::tgamma(1.0 / 3.0);
        node(0) = {ai0, aip0, bi0, bip0};

        constexpr int substeps = 4;
        constexpr double h = 1.0 / substeps;

        // Towards -infinity both solutions oscillate: march from the origin.
        Jet ai{ai0, aip0};
        Jet bi{bi0, bip0};
        double z = 0.0;
        for (int nd = -1; nd >= table_min; --nd) {
            for (int s = 0; s < substeps; ++s) {
                ai = taylor_step(z, ai, -h);
                bi = taylor_step(z, bi, -h);
                z -= h;
            }
            node(nd) = {ai.w, ai.dw, bi.w, bi.dw};
        }

        // Bi is dominant for z > 0: forward marching is stable.
        bi = {bi0, bip0};
        z = 0.0;
        for (int nd = 1; nd <= table_max; ++nd) {
            for (int s = 0; s < substeps; ++s) {
                bi = taylor_step(z, bi, h);
                z += h;
            }
            node(nd).bi = bi.w;
            node(nd).bi_prime = bi.dw;
        }

        // Ai is recessive for z > 0: start from the asymptotic series and
        // march backwards.
        const AiryValues far = asymptotic_positive(table_max, false);
        ai = {far.ai, far.ai_prime};
        node(table_max).ai = ai.w;
        node(table_max).ai_prime = ai.dw;
        z = table_max;
        for (int nd = table_max - 1; nd >= 1; --nd) {
            for (int s = 0; s < substeps; ++s) {
                ai = taylor_step(z, ai, -h);
                z -= h;
            }
            node(nd).ai = ai.w;
            node(nd).ai_prime = ai.dw;
        }
    }

    AiryValues& node(int z) { return at[static_cast<std::size_t>(z - table_min)]; }
    const AiryValues& node(int z) const { return at[static_cast<std::size_t>(z - table_min)]; }
};

const AiryTable& table()
{
    static const AiryTable t;
    return t;
}

AiryValues from_table(double z, bool with_bi)
{
    const int nd = std::clamp(static_cast<int>(std::lround(z)), table_min, table_max);
    const double h = z - nd;
    const AiryValues& base = table().node(nd);
    AiryValues r;
    const Jet a = taylor_step(nd, {base.ai, base.ai_prime}, h);
    r.ai = a.w;
    r.ai_prime = a.dw;
    if (with_bi) {
        const Jet b = taylor_step(nd, {base.bi, base.bi_prime}, h);
        r.bi = b.w;
        r.bi_prime = b.dw;
    }
    return r;
}

struct Products {
    double p;   // wa wb
    double p1;  // (wa wb)'
    double p2;  // (wa wb)''
    double p3;  // (wa wb)'''
    double q;   // wa' wb' - z wa wb, with q' = -p
};

Products pair_products(double z, double wa, double dwa, double wb, double dwb)
{
    Products r;
    r.p = wa * wb;
    r.p1 = dwa * wb + wa * dwb;
    r.p2 = 2.0 * dwa * dwb + 2.0 * z * r.p;
    r.p3 = 4.0 * z * r.p1 + 2.0 * r.p;
    r.q = dwa * dwb - z * r.p;
    return r;
}

void accumulate(ProfileJet& jet, double c, const Products& pr)
{
    jet.f += c * pr.q;
    jet.d1 -= c * pr.p;
    jet.d2 -= c * pr.p1;
    jet.d3 -= c * pr.p2;
    jet.d4 -= c * pr.p3;
}

} // namespace

AiryValues airy_asymptotic(double z)
{
    if (z > 0.0) return asymptotic_positive(z, true);
    if (z < 0.0) return asymptotic_negative(z);
    throw std::invalid_argument("asymptotic Airy expansion is not defined at z = 0");
}

AiryValues airy_eval(double z)
{
    if (!std::isfinite(z)) throw std::invalid_argument("airy_eval: non-finite argument");
    if (z > airy_bi_limit) throw OverflowGuard("Bi(z) guarded beyond z = 30, got z = " + std::to_string(z));
    if (std::abs(z) <= airy_asymptotic_switch) return from_table(z, true);
    return z > 0.0 ? asymptotic_positive(z, true) : asymptotic_negative(z);
}

AiPair airy_ai(double z)
{
    if (!std::isfinite(z)) throw std::invalid_argument("airy_ai: non-finite argument");
    AiryValues v;
    if (std::abs(z) <= airy_asymptotic_switch) {
        v = from_table(z, false);
    } else if (z > 0.0) {
        v = asymptotic_positive(z, false);
    } else {
        v = asymptotic_negative(z);
    }
    return {v.ai, v.ai_prime};
}

double SolitonSpec::gamma() const
{
    return static_cast<double>(branch) * 2.0 * std::sqrt(alpha * beta);
}

void SolitonSpec::validate() const
{
    if (!(alpha * beta >= 0.0)) throw std::invalid_argument("soliton spec needs alpha * beta >= 0");
    if (!(offset > 0.0)) throw std::invalid_argument("soliton offset must be positive");
    if (branch != 1 && branch != -1) throw std::invalid_argument("soliton branch must be +1 or -1");
}

AiryQuadratic SolitonSpec::coefficients() const
{
    validate();
    return {alpha, beta, gamma(), 0.0};
}

ProfileJet profile_jet(double z, const AiryQuadratic& q)
{
    ProfileJet jet;
    jet.f = q.constant;
    if (q.beta == 0.0 && q.gamma == 0.0) {
        if (q.alpha == 0.0) return jet;
        const AiPair a = airy_ai(z);
        accumulate(jet, q.alpha, pair_products(z, a.ai, a.ai_prime, a.ai, a.ai_prime));
        return jet;
    }
    const AiryValues v = airy_eval(z);
    if (q.alpha != 0.0) accumulate(jet, q.alpha, pair_products(z, v.ai, v.ai_prime, v.ai, v.ai_prime));
    if (q.beta != 0.0) accumulate(jet, q.beta, pair_products(z, v.bi, v.bi_prime, v.bi, v.bi_prime));
    if (q.gamma != 0.0) accumulate(jet, q.gamma, pair_products(z, v.ai, v.ai_prime, v.bi, v.bi_prime));
    return jet;
}

double capital_g(double z, const SolitonSpec& spec)
{
    return -profile_jet(z, spec.coefficients()).d1;
}

double capital_f(double z, const SolitonSpec& spec)
{
    return profile_jet(z, spec.coefficients()).f;
}

double capital_f_quadrature(double z, const SolitonSpec& spec, double tol)
{
    spec.validate();
    if (!spec.canonical()) throw std::invalid_argument("quadrature form of F needs beta = 0");
    if (spec.alpha == 0.0) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    auto ai2 = [](double x) {
        const double a = airy_ai(x).ai;
        return a * a;
    };
    const double upper = std::max(8.0, z + 4.0);
    // int_b^inf Ai^2 ~ exp(-4/3 b^{3/2}) / (8 pi b)
    double total = std::exp(-4.0 / 3.0 * upper * std::sqrt(upper)) / (8.0 * pi * upper);
    // unit panels keep the oscillatory part well resolved
    for (double a = z; a < upper; a += 1.0) {
        const double b = std::min(a + 1.0, upper);
        total += gauss_kronrod<double, 15>::integrate(ai2, a, b, 15, tol);
    }
    return spec.alpha * total;
}

double compatibility_residual(double z, double alpha, double beta, double gamma)
{
    const ProfileJet j = profile_jet(z, {alpha, beta, gamma, 0.0});
    return j.d2 * j.d2 - 4.0 * z * j.d1 * j.d1 + 4.0 * j.f * j.d1;
}

} // namespace ckdv
