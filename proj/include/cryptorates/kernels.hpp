#pragma once

#include <complex>
#include <variant>

#include <Eigen/Core>

#include "cryptorates/factors.hpp"

namespace cryptorates {

/// Reciprocal-Bessel(3) kernel pi_t = 1 / |X_t - center|, center on the unit
/// sphere so that pi_0 = 1.
struct Bessel3Params {
    Eigen::Vector3d center{0.0, 0.0, 1.0};

    explicit Bessel3Params(const Eigen::Vector3d& c = {0.0, 0.0, 1.0});
};

/// Bessel(n) kernel pi_t = |X_t - center|^(2-n), n >= 3, |center| = 1.
/// n = 4 gives the closed-form bond model; n >= 5 is priced by Monte Carlo
/// only.
struct BesselNParams {
    int order = 4;
    Eigen::VectorXd center;

    BesselNParams(int n, const Eigen::VectorXd& c);

    /// Canonical unit center (0, ..., 0, 1).
    static BesselNParams canonical(int n);
};

/// Complexified Bessel(3) kernel: the center is complex, the kernel is the
/// (strictly positive) real part of 1 / sqrt(sum (X_t - center)^2).
/// Construction enforces the normalization pi_0 = 1, i.e. Re(1/omega_0) = 1
/// within 1e-10. center_im must be nonzero; use Bessel3Params otherwise.
struct ComplexBessel3Params {
    Eigen::Vector3d center_re;
    Eigen::Vector3d center_im;

    ComplexBessel3Params(const Eigen::Vector3d& re, const Eigen::Vector3d& im);

    /// Scale `re_direction` so that the normalization constraint holds for
    /// the given imaginary part (solved by bisection on the scale).
    static ComplexBessel3Params normalized(const Eigen::Vector3d& re_direction,
                                           const Eigen::Vector3d& im);
};

/// Lognormal sovereign (dollar) kernel
/// pi_t = pi_0 exp(-r t - lambda B_t - lambda^2 t / 2), driven by its own
/// one-dimensional Brownian motion.
struct SovereignGbmParams {
    double short_rate = 0.0;
    double risk_premium = 0.0;
    double initial_kernel = 1.0;
};

using KernelModel = std::variant<Bessel3Params, BesselNParams, ComplexBessel3Params>;

/// Number of Gaussian driver components the model expects in a FactorState.
int model_dimension(const KernelModel& model);

/// State at time 0 (the drivers start at 0, so offsets = -center).
FactorState initial_state(const KernelModel& model);

/// Principal square root of a complex number via the explicit real/imaginary
/// split; the imaginary-part sign follows the sign of Im(z), and a real
/// nonnegative input returns its real root.
std::complex<double> principal_sqrt(std::complex<double> z);

/// Complexified kernel value 1 / sqrt(sum (offsets_j - i delta_j)^2) with the
/// principal branch. The kernel proper is the real part.
std::complex<double> complex_kernel(const ComplexBessel3Params& params,
                                    const Eigen::Vector3d& offsets);

/// Kernel value pi at the given state. Strictly positive away from the
/// singular set; states within 1e-12 of it are rejected.
double kernel_value(const KernelModel& model, const FactorState& state);

/// Natural numeraire xi_t = |offsets| (real Bessel models only). For the
/// third-order kernel xi = 1/pi; for the fourth-order kernel pi = xi^-2.
double natural_numeraire(const KernelModel& model, const FactorState& state);

/// Diffusion coefficient of d pi_t = -(n-2) sigma_t pi_t^{(n-1)/(n-2)} dW_t
/// (the drift vanishes identically). Real Bessel models only.
double sde_diffusion(const KernelModel& model, const FactorState& state, double sigma_t);

/// Market price of risk: sigma_t pi_t for the third-order kernel,
/// 2 sigma_t / xi_t for the fourth-order one.
double market_price_of_risk(const KernelModel& model, const FactorState& state, double sigma_t);

/// Sovereign kernel value pi_0 exp(-r t - lambda b - lambda^2 t / 2).
double sovereign_kernel_value(const SovereignGbmParams& params, double brownian_value, double t);

}  // namespace cryptorates
