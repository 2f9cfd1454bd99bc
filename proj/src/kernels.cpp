#include "cryptorates/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "cryptorates/errors.hpp"

namespace cryptorates {

namespace {

constexpr double kSingularTol = 1e-12;
constexpr double kUnitNormTol = 1e-12;

void check_dimension(const KernelModel& model, const FactorState& state) {
    if (state.offsets.size() != model_dimension(model)) {
        throw std::domain_error("kernel: state dimension does not match model");
    }
}

double radius_checked(const FactorState& state) {
    const double r = state.offsets.norm();
    if (r < kSingularTol) throw SingularStateError("kernel: state at the singular center");
    return r;
}

std::complex<double> omega_squared(const ComplexBessel3Params& p, const Eigen::Vector3d& offsets) {
    const double xi2 = offsets.squaredNorm();
    const double d2 = p.center_im.squaredNorm();
    const double dot = offsets.dot(p.center_im);
    return {xi2 - d2, -2.0 * dot};
}

}  // namespace

Bessel3Params::Bessel3Params(const Eigen::Vector3d& c) : center(c) {
    if (std::abs(center.squaredNorm() - 1.0) > kUnitNormTol) {
        throw std::domain_error("Bessel3Params: center must lie on the unit sphere");
    }
}

BesselNParams::BesselNParams(int n, const Eigen::VectorXd& c) : order(n), center(c) {
    if (n < 3) throw std::domain_error("BesselNParams: order must be >= 3");
    if (center.size() != n) throw std::domain_error("BesselNParams: center dimension must equal the order");
    if (std::abs(center.squaredNorm() - 1.0) > kUnitNormTol) {
        throw std::domain_error("BesselNParams: center must lie on the unit sphere");
    }
}

BesselNParams BesselNParams::canonical(int n) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    c[n - 1] = 1.0;
    return BesselNParams(n, c);
}

ComplexBessel3Params::ComplexBessel3Params(const Eigen::Vector3d& re, const Eigen::Vector3d& im)
    : center_re(re), center_im(im) {
    if (im.norm() == 0.0) {
        throw std::domain_error("ComplexBessel3Params: zero imaginary part; use Bessel3Params");
    }
    const std::complex<double> k = complex_kernel(*this, -center_re);
    if (std::abs(k.real() - 1.0) > 1e-10) {
        throw std::domain_error("ComplexBessel3Params: normalization pi_0 = 1 violated");
    }
}

ComplexBessel3Params ComplexBessel3Params::normalized(const Eigen::Vector3d& re_direction,
                                                      const Eigen::Vector3d& im) {
    if (re_direction.norm() == 0.0) {
        throw std::domain_error("ComplexBessel3Params: zero real direction");
    }
    const Eigen::Vector3d dir = re_direction.normalized();
    auto residual = [&](double scale) {
        // Re(pi_0) - 1 at center_re = scale * dir; offsets at time 0 are
        // -center_re, so omega_0^2 = scale^2 - |im|^2 + 2 i scale (dir . im).
        const std::complex<double> w2{scale * scale - im.squaredNorm(),
                                      2.0 * scale * dir.dot(im)};
        return (1.0 / principal_sqrt(w2)).real() - 1.0;
    };
    // Re(pi_0) decreases in the scale near 1; bracket and bisect.
    double lo = 0.3, hi = 3.0;
    double flo = residual(lo);
    const double fhi = residual(hi);
    if (flo * fhi > 0.0) throw std::domain_error("ComplexBessel3Params: cannot normalize this configuration");
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return ComplexBessel3Params(0.5 * (lo + hi) * dir, im);
}

int model_dimension(const KernelModel& model) {
    return std::visit(
        [](const auto& p) -> int {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BesselNParams>) return p.order;
            return 3;
        },
        model);
}

FactorState initial_state(const KernelModel& model) {
    return std::visit(
        [](const auto& p) -> FactorState {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Bessel3Params>) {
                return {0.0, -p.center};
            } else if constexpr (std::is_same_v<T, BesselNParams>) {
                return {0.0, -p.center};
            } else {
                return {0.0, -p.center_re};
            }
        },
        model);
}

std::complex<double> principal_sqrt(std::complex<double> z) {
    const double a = z.real();
    const double b = z.imag();
    if (b == 0.0) {
        if (a >= 0.0) return {std::sqrt(a), 0.0};
        return {0.0, std::sqrt(-a)};
    }
    const double mod = std::hypot(a, b);
    const double re = std::sqrt(0.5 * (mod + a));
    const double im = std::copysign(std::sqrt(0.5 * (mod - a)), b);
    return {re, im};
}

std::complex<double> complex_kernel(const ComplexBessel3Params& params,
                                    const Eigen::Vector3d& offsets) {
    const std::complex<double> w2 = omega_squared(params, offsets);
    if (std::abs(w2) < kSingularTol) {
        throw SingularStateError("complex kernel: state on the ring singularity");
    }
    return 1.0 / principal_sqrt(w2);
}

double kernel_value(const KernelModel& model, const FactorState& state) {
    check_dimension(model, state);
    return std::visit(
        [&state](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Bessel3Params>) {
                return 1.0 / radius_checked(state);
            } else if constexpr (std::is_same_v<T, BesselNParams>) {
                return std::pow(radius_checked(state), 2.0 - p.order);
            } else {
                const double v = complex_kernel(p, state.offsets).real();
                if (v <= 0.0) {
                    throw SingularStateError("complex kernel: state on the branch disk");
                }
                return v;
            }
        },
        model);
}

double natural_numeraire(const KernelModel& model, const FactorState& state) {
    if (std::holds_alternative<ComplexBessel3Params>(model)) {
        throw UnsupportedModelError("natural_numeraire: not defined for the complexified kernel");
    }
    check_dimension(model, state);
    return radius_checked(state);
}

double sde_diffusion(const KernelModel& model, const FactorState& state, double sigma_t) {
    if (std::holds_alternative<ComplexBessel3Params>(model)) {
        throw UnsupportedModelError("sde_diffusion: complexified kernel dynamics are not available");
    }
    const int n = model_dimension(model);
    const double pi = kernel_value(model, state);
    return -(n - 2) * sigma_t * std::pow(pi, (n - 1.0) / (n - 2.0));
}

double market_price_of_risk(const KernelModel& model, const FactorState& state, double sigma_t) {
    const int n = model_dimension(model);
    if (std::holds_alternative<ComplexBessel3Params>(model) || n > 4) {
        throw UnsupportedModelError("market_price_of_risk: available for orders 3 and 4 only");
    }
    if (n == 3) return sigma_t * kernel_value(model, state);
    return 2.0 * sigma_t / natural_numeraire(model, state);
}

double sovereign_kernel_value(const SovereignGbmParams& params, double brownian_value, double t) {
    if (t < 0.0) throw std::domain_error("sovereign_kernel_value: negative time");
    const double lambda = params.risk_premium;
    return params.initial_kernel *
           std::exp(-params.short_rate * t - lambda * brownian_value - 0.5 * lambda * lambda * t);
}

}  // namespace cryptorates
