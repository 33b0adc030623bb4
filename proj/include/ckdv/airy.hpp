#pragma once

namespace ckdv {

struct AiryValues {
    double ai = 0.0;
    double ai_prime = 0.0;
    double bi = 0.0;
    double bi_prime = 0.0;
};

/// |z| beyond which the asymptotic expansions are used. Inside, values come
/// from a table at integer nodes (built once from the Maclaurin data at
/// z = 0 by Taylor continuation of w'' = z w) plus one local Taylor step.
inline constexpr double airy_asymptotic_switch = 12.5;

/// Largest z for which Bi is evaluated.
inline constexpr double airy_bi_limit = 30.0;

/// Ai, Ai', Bi, Bi' at real z. Throws OverflowGuard for z > 30.
AiryValues airy_eval(double z);

struct AiPair {
    double ai = 0.0;
    double ai_prime = 0.0;
};

/// Ai and Ai' for any real z (underflows to zero for very large z).
AiPair airy_ai(double z);

/// Leading-order asymptotic forms, exposed for overlap checks.
AiryValues airy_asymptotic(double z);

/// Coefficients of G(z) = alpha Ai^2 + beta Bi^2 + gamma Ai Bi and of the
/// matching F with F' = -G and integration constant C.
struct AiryQuadratic {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double constant = 0.0;
};

/// Parameters of the self-similar solitary wave f = offset + F(z)/s.
struct SolitonSpec {
    double alpha = 0.0;
    double beta = 0.0;
    int branch = 1;
    double offset = 1.0;

    /// branch * 2 sqrt(alpha beta)
    double gamma() const;
    /// Throws std::invalid_argument if alpha*beta < 0, offset <= 0 or
    /// branch is not +-1.
    void validate() const;
    /// alpha >= 0 and beta == 0: the sign-definite family.
    bool canonical() const { return beta == 0.0 && alpha >= 0.0; }
    AiryQuadratic coefficients() const;
};

/// F and its first four derivatives at one point.
struct ProfileJet {
    double f = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    double d4 = 0.0;
};

/// F, F', .., F'''' in closed form through Airy products. Terms with a
/// zero coefficient are skipped, so the Ai-only family works for any z.
ProfileJet profile_jet(double z, const AiryQuadratic& q);

double capital_g(double z, const SolitonSpec& spec);
double capital_f(double z, const SolitonSpec& spec);

/// alpha * integral_z^inf Ai^2 by adaptive Gauss-Kronrod quadrature on
/// [z, 8] plus the asymptotic tail beyond 8. Canonical specs only.
double capital_f_quadrature(double z, const SolitonSpec& spec, double tol = 1e-12);

/// [F'']^2 - 4 z [F']^2 + 4 F F' for the three-parameter F with C = 0.
/// Analytically equal to (gamma^2 - 4 alpha beta) / pi^2 for every z.
double compatibility_residual(double z, double alpha, double beta, double gamma);

} // namespace ckdv
