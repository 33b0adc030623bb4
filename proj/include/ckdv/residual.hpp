#pragma once

// Residual of the long-wave ansatz in the Boussinesq equation, its
// t-antiderivative, and the energy functional used to monitor the error.

#include "ckdv/boussinesq.hpp"
#include "ckdv/ckdv.hpp"
#include "ckdv/grid.hpp"

#include <optional>
#include <vector>

namespace ckdv {

/// dA/drho and d^2A/drho^2 of a cKdV solution, both obtained from the
/// equation (one rho-derivative traded for three tau-derivatives).
struct RhoDerivatives {
    RealField a_rho;
    RealField a_rhorho;
};

RhoDerivatives ckdv_rho_derivatives(const RealField& A, double rho);

/// The residual holds products of up to five copies of A, so A is first
/// zero-padded to this many times its grid size.
inline constexpr std::size_t residual_oversample = 4;

/// Res(eps^2 A(eps^3 r, eps (t - r))) at rho = state.rho, sampled on the
/// refined t-grid in the co-moving coordinate t - r (so eps t_j = tau_j).
/// Orders eps^4 and eps^6 are cancelled analytically; the remaining terms
/// are evaluated one by one, including the N(v) contributions.
RealField residual_field(const CkdvState& state, double eps);

/// Zero-mean d_t^{-1} Res on the same grid. Every term except the
/// -(4 rho^2)^{-1} A piece of R_1 is a tau-derivative and is integrated by
/// dropping that derivative. Throws MeanValueError if A has nonzero mean.
RealField antiderivative_residual(const CkdvState& state, double eps);

struct ResidualReport {
    double eps = 0.0;
    double res_l2 = 0.0;      ///< max over the trajectory of ||Res||_{L2(dt)}
    double res_sup = 0.0;
    double antires_l2 = 0.0;  ///< max of ||d_t^{-1} Res||_{L2(dt)}
    double rho_at_sup = 0.0;
    // the same L2 norms measured in tau (= sqrt(eps) times the t-norms)
    double res_l2_tau = 0.0;
    double antires_l2_tau = 0.0;
};

ResidualReport residual_report(const std::vector<CkdvState>& trajectory, double eps);

struct EnergyReport {
    double e0 = 0.0;
    double e1 = 0.0;
    double e = 0.0;
    double beta_exp = 3.5;
};

/// E0 and E1 of the error R with dR/dr = Rr, weighted by the ansatz
/// amplitude A_field (all on the same t-grid). Integrals are periodic
/// trapezoidal sums. Throws MeanValueError unless R and Rr have zero mean.
EnergyReport energy(const RealField& R, const RealField& Rr, const RealField& A_field, double eps,
                    std::optional<double> mean_tol = {});

/// E0/2 <= E <= 3 E0/2
bool energy_equivalent(const EnergyReport& e);
/// E0/2 <= E1 <= 3 E0/2, the literal reading of the bound
bool energy_equivalent_e1(const EnergyReport& e);

struct EnergySample {
    double r = 0.0;
    EnergyReport energy;
};

struct GronwallReport {
    double eps = 0.0;
    std::vector<EnergySample> trace;
    double max_e = 0.0;
    double min_ratio = 0.0;  ///< min E/E0 over samples with E0 > 0
    double max_ratio = 0.0;
    bool equivalent = true;     ///< E0/2 <= E <= 3 E0/2 at every sample
    bool equivalent_e1 = true;  ///< same for E1
    /// Smallest C with E(r) <= (exp(2 C eps^3 (r - r0)) - 1)/2 at every
    /// sample, i.e. the constant of the Gronwall bound for E(r0) = 0.
    double growth_rate = 0.0;
    double bound = 0.0;
    bool bounded = true;  ///< max_e <= bound
};

/// Running energy along a Boussinesq run, usable as an observer.
class EnergyMonitor {
public:
    explicit EnergyMonitor(AnsatzConfig cfg, double bound = 1000.0);
    void operator()(const BoussinesqState& state);
    GronwallReport report() const;

private:
    AnsatzConfig cfg_;
    double bound_;
    std::vector<EnergySample> trace_;
};

/// Energy of R = eps^{-7/2}(v - eps^2 A) along a trajectory, with the
/// fitted growth constant and the check max E <= bound.
GronwallReport gronwall_growth_check(const std::vector<BoussinesqState>& trajectory, const AnsatzConfig& cfg,
                                     double bound = 1000.0);

} // namespace ckdv
