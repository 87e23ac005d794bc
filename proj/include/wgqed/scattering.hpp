/**
 * scattering.hpp - single-photon reflection, transmission and channel loss.
 *
 * A photon enters the a channel from the left. With both channels coupled,
 *
 *   r(D) = -i gamma_a v_a1 / sqrt(v_a1^2 + 4 v_a2 D)
 *          / (D - Sigma_a(D) - Sigma_b(D)),          t = 1 + r,
 *
 * R = |r|^2, T = |t|^2 and the remainder 1 - R - T is the probability of
 * leaving through the b channel. The linear-dispersion comparison model is
 * r1 = -i gamma_a / (D + i (gamma_a + gamma_b)).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bound_states.hpp"
#include "self_energy.hpp"
#include "waveguide_model.hpp"

namespace wgqed {

enum class LimitFlag {
    none = 0,
    cutoff_resonance = 1,  ///< D = D_min: returned as the analytic limit r = -1
    b_branch_point = 2,    ///< D = D_max^F: Sigma_b diverges, limit r = 0
    below_band = 3,        ///< no propagating a-channel input; values are NaN
};

struct ScatteringPoint {
    double k = 0.0;        ///< wave-vector deviation ("+" branch when the input was a detuning)
    double detuning = 0.0;
    cplx r;
    cplx t;
    double R = 0.0;
    double T = 0.0;
    double P_loss = 0.0;
    LimitFlag limit = LimitFlag::none;
};

struct ResonanceSet {
    std::vector<double> k_res;                     ///< single-photon resonances (gamma_b = 0 only)
    double k_C = 0.0;                              ///< cutoff-frequency resonance (band vertex)
    double delta_min = 0.0;
    double delta_max_F = 0.0;
    std::optional<double> delta_F;                 ///< Feshbach detuning (gamma_b > 0)
    std::optional<std::pair<double, double>> k_F;  ///< present when delta_F lies inside the a band
    bool feshbach_outside_a_band = false;
};

namespace detail {

// Width below which the b branch point is treated as reached.
inline constexpr double branch_window = 1e-12;

inline ScatteringPoint finish(ScatteringPoint p) {
    p.t = 1.0 + p.r;
    p.R = std::norm(p.r);
    p.T = std::norm(p.t);
    p.P_loss = 1.0 - p.R - p.T;
    return p;
}

// inv_sqrt_a = 1 / sqrt(v_a1^2 + 4 v_a2 D), supplied by the caller so the
// k-form can use its own prefactor |2 v_a2 k + |v_a1||^-1.
inline ScatteringPoint reflect(const ChannelPair& pair, double detuning, double inv_sqrt_a, ScatteringPoint p) {
    p.detuning = detuning;
    const double va1 = std::abs(pair.a.v1());
    const double width_a = pair.gamma_a * va1 * inv_sqrt_a;  // -Sigma_a = i width_a

    if (pair.gamma_b > 0.0 && std::abs(detuning - pair.b.detuning_min()) < branch_window) {
        p.r = 0.0;
        p.limit = LimitFlag::b_branch_point;
        return finish(p);
    }
    cplx sigma_b = 0.0;
    if (pair.gamma_b > 0.0) sigma_b = sigma_at_detuning(pair.b, pair.gamma_b, detuning).value;
    p.r = cplx(0.0, -width_a) / (cplx(detuning, width_a) - sigma_b);
    return finish(p);
}

inline ScatteringPoint cutoff_limit(double k, double detuning) {
    ScatteringPoint p;
    p.k = k;
    p.detuning = detuning;
    p.r = -1.0;
    p.limit = LimitFlag::cutoff_resonance;
    return finish(p);
}

}  // namespace detail

/// Quadratic two-channel observables at a-channel detuning D >= D_min.
[[nodiscard]] inline ScatteringPoint scatter_quadratic(const ChannelPair& pair, double detuning) {
    const double va1 = std::abs(pair.a.v1());
    const double arg = va1 * va1 + 4.0 * pair.a.v2() * detuning;
    // A few ulps of slack so that D_min itself, however it was rounded, maps to the limit.
    if (arg < -1e-14 * va1 * va1) throw std::domain_error("scatter_quadratic: below a-channel band minimum");
    if (arg <= 0.0) return detail::cutoff_limit(-va1 / (2.0 * pair.a.v2()), detuning);
    const double k = (-va1 + std::sqrt(arg)) / (2.0 * pair.a.v2());
    ScatteringPoint p;
    p.k = k;
    return detail::reflect(pair, detuning, 1.0 / std::sqrt(arg), p);
}

/// Same observables parameterized by the wave-vector deviation k.
[[nodiscard]] inline ScatteringPoint scatter_quadratic_by_k(const ChannelPair& pair, double k) {
    const double va1 = std::abs(pair.a.v1());
    const double va2 = pair.a.v2();
    const double detuning = k * (va1 + va2 * k);
    const double slope = std::abs(2.0 * va2 * k + va1);
    if (slope == 0.0) return detail::cutoff_limit(k, detuning);
    ScatteringPoint p;
    p.k = k;
    return detail::reflect(pair, detuning, 1.0 / slope, p);
}

/// Linear-dispersion comparison model.
[[nodiscard]] inline ScatteringPoint scatter_linear(double gamma_a, double gamma_b, double detuning) {
    if (!(gamma_a > 0.0)) throw std::invalid_argument("scatter_linear: gamma_a must be positive");
    if (!(gamma_b >= 0.0)) throw std::invalid_argument("scatter_linear: gamma_b must be non-negative");
    ScatteringPoint p;
    p.detuning = detuning;
    p.r = cplx(0.0, -gamma_a) / cplx(detuning, gamma_a + gamma_b);
    p.t = cplx(detuning, gamma_b) / cplx(detuning, gamma_a + gamma_b);
    const double den = detuning * detuning + (gamma_a + gamma_b) * (gamma_a + gamma_b);
    p.R = gamma_a * gamma_a / den;
    p.T = (detuning * detuning + gamma_b * gamma_b) / den;
    p.P_loss = 2.0 * gamma_a * gamma_b / den;
    return p;
}

/// Linear model with D1 = v_a1 k.
[[nodiscard]] inline ScatteringPoint scatter_linear_by_k(double gamma_a, double gamma_b, double va1, double k) {
    ScatteringPoint p = scatter_linear(gamma_a, gamma_b, va1 * k);
    p.k = k;
    return p;
}

[[nodiscard]] inline ResonanceSet find_resonances(const ChannelPair& pair) {
    ResonanceSet out;
    const double va1 = std::abs(pair.a.v1());
    const double va2 = pair.a.v2();
    out.k_C = -va1 / (2.0 * va2);
    out.delta_min = pair.a.detuning_min();
    out.delta_max_F = pair.b.detuning_min();
    if (pair.gamma_b == 0.0) {
        out.k_res = {0.0, -va1 / va2};
        return out;
    }
    const double df = feshbach_detuning(pair);
    out.delta_F = df;
    if (df >= out.delta_min) {
        const QuadraticDispersion right(pair.a.omega0(), va1, va2);
        out.k_F = k_of_detuning(right, df);
    } else {
        out.feshbach_outside_a_band = true;
    }
    return out;
}

enum class Channel { a, b };

/// Excited-state amplitude beta of the scattering state. Channel::a is the
/// two-channel amplitude g1 / (D - Sigma_a - Sigma_b); Channel::b is the
/// single-b-mode amplitude g2 / (D - Sigma_b) for a b-mode input at w0 + D.
[[nodiscard]] inline cplx excitation_amplitude(const ChannelPair& pair, double detuning, Channel ch = Channel::a) {
    if (ch == Channel::a) {
        const double va1 = std::abs(pair.a.v1());
        const double arg = va1 * va1 + 4.0 * pair.a.v2() * detuning;
        if (arg <= 0.0) throw std::domain_error("excitation_amplitude: below a-channel band minimum");
        const double g1 = coupling_of_rate(pair.gamma_a, va1);
        cplx den = cplx(detuning, 0.0) - sigma_at_detuning(pair.a, pair.gamma_a, detuning).value;
        if (pair.gamma_b > 0.0) den -= sigma_at_detuning(pair.b, pair.gamma_b, detuning).value;
        return g1 / den;
    }
    if (!(pair.gamma_b > 0.0))
        throw std::domain_error("excitation_amplitude: b channel uncoupled (pole on the real axis)");
    const double vb1 = std::abs(pair.b.v1());
    const double arg = vb1 * vb1 + 4.0 * pair.b.v2() * detuning;
    if (arg <= 0.0) throw std::domain_error("excitation_amplitude: below b-channel band minimum");
    const double g2 = coupling_of_rate(pair.gamma_b, vb1);
    return g2 / (cplx(detuning, 0.0) - sigma_at_detuning(pair.b, pair.gamma_b, detuning).value);
}

/// f = (D - D_F + q)^2 / ((D - D_F)^2 + d^2)
[[nodiscard]] inline double fano_profile(double detuning, double delta_F, double q, double d) {
    if (d == 0.0) throw std::invalid_argument("fano_profile: width d must be non-zero");
    const double x = detuning - delta_F;
    return (x + q) * (x + q) / (x * x + d * d);
}

/// Half-width of the transmission dip at the Feshbach resonance, linearized
/// about D_F: width_a(D_F) / (1 - dSigma_b/dD(D_F)).
[[nodiscard]] inline double feshbach_linewidth(const ChannelPair& pair) {
    const auto bs = bound_state_closed_form(std::abs(pair.b.v1()), pair.b.v2(), pair.gamma_b, pair.omega0());
    const double va1 = std::abs(pair.a.v1());
    const double arg_a = va1 * va1 + 4.0 * pair.a.v2() * bs.delta_F;
    if (!(arg_a > 0.0)) throw std::domain_error("feshbach_linewidth: Feshbach point outside the a band");
    const double width_a = pair.gamma_a * va1 / std::sqrt(arg_a);
    const double abs_arg_b = 4.0 * pair.b.v2() * bs.binding_depth;
    const double dsigma = -2.0 * pair.gamma_b * std::abs(pair.b.v1()) * pair.b.v2() / (abs_arg_b * std::sqrt(abs_arg_b));
    return width_a / (1.0 - dsigma);
}

/// gamma_b at which feshbach_linewidth equals `width`, by bisection on
/// [lo, hi]. The linewidth grows monotonically with gamma_b there.
[[nodiscard]] inline double gamma_b_for_linewidth(const ChannelPair& pair, double width, double lo = 1e-4,
                                                  double hi = 0.5) {
    auto f = [&](double gb) { return feshbach_linewidth(pair.with_gamma_b(gb)) - width; };
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo * fhi > 0.0) throw std::domain_error("gamma_b_for_linewidth: width not bracketed");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Evaluates scatter_quadratic over a detuning grid; points below the band
/// come back flagged instead of throwing.
[[nodiscard]] inline std::vector<ScatteringPoint> scatter_quadratic_batch(const ChannelPair& pair,
                                                                         std::span<const double> detunings) {
    std::vector<ScatteringPoint> out;
    out.reserve(detunings.size());
    for (double d : detunings) {
        const double va1 = pair.a.v1();
        if (va1 * va1 + 4.0 * pair.a.v2() * d < -1e-14 * va1 * va1) {
            ScatteringPoint p;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            p.k = nan;
            p.detuning = d;
            p.r = p.t = cplx(nan, nan);
            p.R = p.T = p.P_loss = nan;
            p.limit = LimitFlag::below_band;
            out.push_back(p);
        } else {
            out.push_back(scatter_quadratic(pair, d));
        }
    }
    return out;
}

}  // namespace wgqed
