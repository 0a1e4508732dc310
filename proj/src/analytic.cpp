#include "solitonchain/analytic.hpp"

#include "solitonchain/entanglement.hpp"
#include "solitonchain/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace solitonchain::analytic {

double effective_eta(double big_delta, double delta) {
    if(!std::isfinite(delta) || !std::isfinite(big_delta) || !(delta > 0.0) || !(delta < big_delta))
        throw ParameterError("effective_eta: need 0 < delta < big_delta");
    // eta = sqrt(a - sqrt(b)) / 2 with a = D^2 + 3d^2, b = D^4 + 6D^2 d^2 + d^4.
    // a^2 - b = 8 d^4, so a - sqrt(b) = 8 d^4 / (a + sqrt(b)) without cancellation.
    const double d2 = delta * delta, D2 = big_delta * big_delta;
    const double a  = D2 + 3.0 * d2;
    const double sb = std::sqrt(D2 * D2 + 6.0 * D2 * d2 + d2 * d2);
    return delta * delta * std::sqrt(2.0 / (a + sb));
}

double mirroring_time(double eta) {
    if(!std::isfinite(eta) || !(eta > 0.0)) throw ParameterError("mirroring_time: eta must be > 0, got " + std::to_string(eta));
    return std::numbers::pi / (std::numbers::sqrt2 * eta);
}

TrimerEigensystem trimer_eigensystem(double eta) {
    if(!std::isfinite(eta) || !(eta > 0.0)) throw ParameterError("trimer_eigensystem: eta must be > 0");
    const double e = std::numbers::sqrt2 * eta, r2 = std::numbers::sqrt2;
    return {{-e, 0.0, e},
            {Eigen::Vector3d(-0.5, r2 / 2.0, -0.5), Eigen::Vector3d(1.0 / r2, 0.0, -1.0 / r2), Eigen::Vector3d(0.5, r2 / 2.0, 0.5)}};
}

Eigen::Matrix4cd trimer_rho_ac(double eta, double t) {
    if(!std::isfinite(eta) || !(eta > 0.0)) throw ParameterError("trimer_rho_ac: eta must be > 0");
    const double c = std::cos(std::numbers::sqrt2 * eta * t);
    const double s = std::sin(std::numbers::sqrt2 * eta * t);
    // Unnormalized components: B empty (alpha) and B occupied (beta).
    const Eigen::Vector4cd alpha(0.5, 0.5 * c, 0.5 * c, 0.5 * c);
    const cplx             pre = cplx(0.0, -s / std::numbers::sqrt2);
    const Eigen::Vector4cd beta(pre, 0.5 * pre, 0.5 * pre, 0.0);
    return alpha * alpha.adjoint() + beta * beta.adjoint();
}

double analytic_eof_profile(double eta, double t) {
    if(!std::isfinite(eta) || !(eta > 0.0)) throw ParameterError("analytic_eof_profile: eta must be > 0");
    const double c = std::cos(std::numbers::sqrt2 * eta * t);
    const double s = std::sin(std::numbers::sqrt2 * eta * t);
    const cplx   pre = cplx(0.0, -s / std::numbers::sqrt2);
    TwoQubitDensity::Factor w(4, 2);
    w.col(0) << 0.5, 0.5 * c, 0.5 * c, 0.5 * c;
    w.col(1) << pre, 0.5 * pre, 0.5 * pre, 0.0;
    return eof(TwoQubitDensity::from_factor(w));
}

std::array<double, 3> noisy_trimer_eigenvalues(double eta, double d, double e) {
    const double r = std::sqrt(2.0 * eta * eta + 2.0 * eta * d + 2.0 * eta * e + d * d + e * e);
    return {-r, 0.0, r};
}

} // namespace solitonchain::analytic
