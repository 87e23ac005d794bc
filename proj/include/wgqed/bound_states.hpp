/**
 * bound_states.hpp - bound and quasibound states of the b channel.
 *
 * Poles of the single-channel T matrix solve
 *
 *     x = -i gamma_b v1 / sqrt(v1^2 + 4 v2 x),     x = E - w0,
 *
 * which squares to the real cubic 4 v2 x^3 + v1^2 x^2 + gamma_b^2 v1^2 = 0.
 * Exactly one real root lies below the b band edge -v1^2/(4 v2) and solves the
 * unsquared equation on the evanescent branch: the bound state. The remaining
 * conjugate pair are the quasibound states.
 *
 * Two independent routes are provided: the Cardano-type closed form and a
 * companion-matrix root solve of the squared cubic.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "self_energy.hpp"
#include "waveguide_model.hpp"

namespace wgqed {

struct BoundStateSet {
    double E_bound = 0.0;
    double delta_F = 0.0;                  ///< E_bound - w0
    std::array<cplx, 2> quasibound{};      ///< positive imaginary part first
    double residual = 0.0;                 ///< unsquared pole equation at E_bound
    double delta_max_F = 0.0;              ///< b band edge -v1^2/(4 v2)
    double binding_depth = 0.0;            ///< delta_max_F - delta_F, kept separately for accuracy
    bool is_limit = false;                 ///< gamma_b = 0: no isolated bound state
};

namespace detail {

inline void check_b_inputs(double vb1, double vb2, double omega0) {
    if (!(vb1 > 0.0)) throw std::invalid_argument("bound states: v_b1 must be positive");
    if (!(vb2 > 0.0)) throw std::invalid_argument("bound states: v_b2 must be positive");
    if (!std::isfinite(omega0)) throw std::invalid_argument("bound states: omega0 must be finite");
}

// |x + gamma v1 / sqrt(|v1^2 + 4 v2 x|)| with |arg| = 4 v2 eps supplied directly.
inline double pole_residual(double x, double eps, double vb1, double vb2, double gamma) {
    return std::abs(x + gamma * vb1 / std::sqrt(4.0 * vb2 * eps));
}

inline void order_pair(std::array<cplx, 2>& p) {
    if (p[0].imag() < p[1].imag()) std::swap(p[0], p[1]);
}

}  // namespace detail

/// Bound state (real) and quasibound pair (complex) from the closed-form
/// cubic solution with the real cube root u_b = cbrt(l_b).
[[nodiscard]] inline BoundStateSet bound_state_closed_form(double vb1, double vb2, double gamma_b,
                                                           double omega0) {
    detail::check_b_inputs(vb1, vb2, omega0);
    const double delta_max = -vb1 * vb1 / (4.0 * vb2);
    if (gamma_b == 0.0)
        throw std::domain_error("bound_state_closed_form: no isolated bound state; limit is Delta_max^F = " +
                                std::to_string(delta_max));
    if (!(gamma_b > 0.0)) throw std::invalid_argument("bound_state_closed_form: gamma_b must be positive");

    const double s2 = vb1 * vb1;
    const double s4 = s2 * s2;
    const double s6 = s4 * s2;
    const double g2v = vb2 * vb2 * gamma_b * gamma_b;
    const double root = s2 * vb2 * gamma_b * std::sqrt(s4 + 108.0 * g2v);
    // l = -v1^6 - b + 12 sqrt3 root cancels at both ends of the coupling range.
    // With a = 12 sqrt3 root:  a - b = 432 v1^8 v2^2 g^2 / (a + b)  and
    // l = -v1^6 (a - b) / (a + b), every term of one sign.
    const double a = 12.0 * std::sqrt(3.0) * root;
    const double b = 216.0 * s2 * g2v;
    const double l_shift = 432.0 * s4 * s4 * g2v / (a + b);  // l + v1^6
    const double l = -s6 * l_shift / (a + b);
    const double u = std::cbrt(l);

    const double quad = u * u - u * s2 + s4;  // positive since u < 0
    const double u_shift = l_shift / quad;    // u + v1^2
    BoundStateSet out;
    out.delta_max_F = delta_max;
    out.delta_F = quad / (12.0 * u * vb2);
    out.E_bound = omega0 + out.delta_F;
    out.binding_depth = -u_shift * u_shift / (12.0 * u * vb2);

    // Quasibound pair [(-1 +- i sqrt3) u - 2 v1^2 + (-1 -+ i sqrt3) v1^4 / u] / (24 v2),
    // real part -(u + v1^2)^2 / u and imaginary part sqrt3 (u - v1^2)(u + v1^2) / u.
    const double re = -u_shift * u_shift / (24.0 * u * vb2);
    const double im = std::sqrt(3.0) * (u - s2) * u_shift / (24.0 * u * vb2);
    out.quasibound = {cplx(omega0 + re, im), cplx(omega0 + re, -im)};
    detail::order_pair(out.quasibound);

    out.residual = detail::pole_residual(out.delta_F, out.binding_depth, vb1, vb2, gamma_b);
    return out;
}

/// Roots of 4 v2 x^3 + v1^2 x^2 + gamma^2 v1^2 = 0, as complex numbers.
[[nodiscard]] inline std::array<cplx, 3> squared_pole_cubic_roots(double vb1, double vb2, double gamma_b) {
    const double c2 = vb1 * vb1 / (4.0 * vb2);
    const double c0 = gamma_b * gamma_b * vb1 * vb1 / (4.0 * vb2);
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(0, 0) = -c2;
    companion(0, 1) = 0.0;
    companion(0, 2) = -c0;
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solve failed");
    const auto ev = solver.eigenvalues();
    return {ev(0), ev(1), ev(2)};
}

/// Bound-state set from the companion-matrix roots of the squared cubic, with
/// every real candidate validated against the unsquared pole equation.
[[nodiscard]] inline BoundStateSet bound_state_numeric(double vb1, double vb2, double gamma_b, double omega0) {
    detail::check_b_inputs(vb1, vb2, omega0);
    if (!(gamma_b >= 0.0)) throw std::invalid_argument("bound_state_numeric: gamma_b must be non-negative");
    const double edge = vb1 * vb1 / (4.0 * vb2);

    BoundStateSet out;
    out.delta_max_F = -edge;
    if (gamma_b == 0.0) {
        // x^2 (4 v2 x + v1^2) = 0: the pole sits on the band edge.
        out.is_limit = true;
        out.delta_F = -edge;
        out.E_bound = omega0 - edge;
        out.quasibound = {cplx(omega0, 0.0), cplx(omega0, 0.0)};
        return out;
    }

    auto roots = squared_pole_cubic_roots(vb1, vb2, gamma_b);
    std::sort(roots.begin(), roots.end(), [](cplx p, cplx q) { return std::abs(p.imag()) < std::abs(q.imag()); });

    const double target = gamma_b * gamma_b * vb1 * vb1;
    bool found = false;
    for (std::size_t i = 0; i < roots.size() && !found; ++i) {
        const cplx cand = roots[i];
        if (std::abs(cand.imag()) > 1e-9 * std::max(1.0, std::abs(cand))) continue;
        if (!(cand.real() < 0.0)) continue;

        // Refine the depth below the edge on 4 v2 eps (a + eps)^2 = gamma^2 v1^2,
        // which has a single positive root and no cancellation.
        double eps = -edge - cand.real();
        if (!(eps > 0.0)) eps = target / (4.0 * vb2 * edge * edge);
        for (int it = 0; it < 100; ++it) {
            const double ae = edge + eps;
            const double h = 4.0 * vb2 * eps * ae * ae - target;
            const double dh = 4.0 * vb2 * ae * (ae + 2.0 * eps);
            double next = eps - h / dh;
            if (!(next > 0.0)) next = 0.5 * eps;
            const bool done = std::abs(next - eps) <= 1e-16 * eps;
            eps = next;
            if (done) break;
        }
        const double x = -edge - eps;
        const double res = detail::pole_residual(x, eps, vb1, vb2, gamma_b);
        // Squaring artifacts do not sit on the evanescent-branch solution.
        if (std::abs(cand.real() - x) > 1e-6 * std::max(1.0, std::abs(x))) continue;
        if (res > 1e-8 * std::max(1.0, std::abs(x))) continue;

        out.binding_depth = eps;
        out.delta_F = x;
        out.E_bound = omega0 + x;
        out.residual = res;
        std::array<cplx, 2> rest{};
        std::size_t k = 0;
        for (std::size_t j = 0; j < roots.size(); ++j)
            if (j != i) rest[k++] = roots[j] + omega0;
        detail::order_pair(rest);
        out.quasibound = rest;
        found = true;
    }
    if (!found) throw std::runtime_error("bound_state_numeric: no bound state found");
    return out;
}

/// Linear-dispersion b channel (v2 = 0): the only pole is w0 - i|gamma_b|.
[[nodiscard]] inline cplx linear_bound_state(double gamma_b, double omega0) {
    return {omega0, -std::abs(gamma_b)};
}

/// Feshbach detuning of the a channel: the b-channel bound-state energy
/// measured from w0.
[[nodiscard]] inline double feshbach_detuning(const ChannelPair& pair) {
    if (!(pair.gamma_b > 0.0)) throw std::domain_error("feshbach_detuning: requires gamma_b > 0");
    return bound_state_closed_form(std::abs(pair.b.v1()), pair.b.v2(), pair.gamma_b, pair.omega0()).delta_F;
}

/// 1 / t_{k'k}(w) = (w - w0 - Sigma_b(w)) / |g2|^2, continued below the band
/// edge through the evanescent branch of Sigma_b.
[[nodiscard]] inline cplx b_mode_inverse_t_matrix(const QuadraticDispersion& disp_b, double gamma_b,
                                                  double omega) {
    if (!(gamma_b > 0.0)) throw std::invalid_argument("b_mode_t_matrix: gamma_b must be positive");
    const double v1 = std::abs(disp_b.v1());
    const double g2 = gamma_b * v1 / (2.0 * std::numbers::pi);
    const double detuning = omega - disp_b.omega0();
    return (cplx(detuning, 0.0) - sigma_at_detuning(disp_b, gamma_b, detuning).value) / g2;
}

/// Single-channel T-matrix element |g2|^2 / (w + i0 - w0 - Sigma_b(w)) for a
/// propagating b-mode photon.
[[nodiscard]] inline cplx b_mode_t_matrix(const QuadraticDispersion& disp_b, double gamma_b, double omega) {
    if (!(omega > disp_b.omega_min()))
        throw std::domain_error("b_mode_t_matrix: no propagating b input at or below omega_b^min");
    return 1.0 / b_mode_inverse_t_matrix(disp_b, gamma_b, omega);
}

}  // namespace wgqed
