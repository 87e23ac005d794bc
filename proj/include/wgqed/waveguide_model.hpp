/**
 * waveguide_model.hpp - rectangular waveguide geometry and channel dispersion.
 *
 * Two transverse-electric modes of a rectangular waveguide (inner size
 * L_x by L_y) act as scattering channels for a two-level emitter:
 *
 *   a channel : TE_01   (lowest mode, the transport channel)
 *   b channel : TE_11   (closest higher mode)
 *
 * Exact dispersion   w(k) = c * sqrt(k_cut^2 + k^2)
 * Quadratic model    w(p) = w0 + v1 p + v2 p^2,   p = k - k0,  w(k0) = w0
 *
 * Everything downstream of this header works with the quadratic model and
 * treats the wave-vector argument as the deviation p from the on-shell k0.
 */

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace wgqed {

using cplx = std::complex<double>;

namespace si {
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
}  // namespace si

struct WaveguideGeometry {
    double Lx;
    double Ly;
    double c = 1.0;

    WaveguideGeometry(double lx, double ly, double speed = 1.0) : Lx(lx), Ly(ly), c(speed) {
        if (!(lx > 0.0) || !(ly > 0.0) || !(speed > 0.0))
            throw std::invalid_argument("WaveguideGeometry: L_x, L_y and c must be positive");
    }
};

struct ModeIndex {
    int m = 0;
    int n = 0;
};

inline constexpr ModeIndex te01{0, 1};  ///< a channel
inline constexpr ModeIndex te11{1, 1};  ///< b channel

/// Emitter transition frequency, position in the cross-section and dipole
/// matrix element components.
struct AtomParams {
    double omega0;
    double x0;
    double y0;
    double dx;
    double dy = 0.0;
};

/// Second-order expansion of one channel's dispersion around the atomic
/// frequency. omega_min is the bottom of the parabola.
class QuadraticDispersion {
public:
    QuadraticDispersion() = default;

    QuadraticDispersion(double omega0, double v1, double v2) : omega0_(omega0), v1_(v1), v2_(v2) {
        if (!(v2 > 0.0)) throw std::invalid_argument("QuadraticDispersion: v2 must be positive");
        if (!std::isfinite(omega0) || !std::isfinite(v1))
            throw std::invalid_argument("QuadraticDispersion: non-finite coefficient");
        omega_min_ = omega0 - v1 * v1 / (4.0 * v2);
    }

    /// Checked constructor for a redundantly stored band minimum.
    QuadraticDispersion(double omega0, double v1, double v2, double omega_min)
        : QuadraticDispersion(omega0, v1, v2) {
        const double scale = std::abs(omega0) + v1 * v1 / (4.0 * v2);
        if (std::abs(omega_min - omega_min_) > 1e-12 * scale)
            throw std::invalid_argument("QuadraticDispersion: omega_min != omega0 - v1^2/(4 v2)");
    }

    [[nodiscard]] double omega0() const { return omega0_; }
    [[nodiscard]] double v1() const { return v1_; }
    [[nodiscard]] double v2() const { return v2_; }
    [[nodiscard]] double omega_min() const { return omega_min_; }

    /// Band minimum measured from omega0, -v1^2/(4 v2).
    [[nodiscard]] double detuning_min() const { return -v1_ * v1_ / (4.0 * v2_); }
    /// Vertex of the parabola, -v1/(2 v2).
    [[nodiscard]] double k_vertex() const { return -v1_ / (2.0 * v2_); }

    /// omega0 + v1 p + v2 p^2
    [[nodiscard]] double frequency(double p) const { return omega0_ + p * (v1_ + v2_ * p); }

private:
    double omega0_ = 0.0;
    double v1_ = 0.0;
    double v2_ = 1.0;
    double omega_min_ = 0.0;
};

/// a and b channels sharing one emitter, with the Markov decay rates
/// gamma = 2 pi |g|^2 / v1 into each.
struct ChannelPair {
    QuadraticDispersion a;
    QuadraticDispersion b;
    double gamma_a;
    double gamma_b;

    ChannelPair(QuadraticDispersion ach, QuadraticDispersion bch, double ga, double gb)
        : a(ach), b(bch), gamma_a(ga), gamma_b(gb) {
        if (!(ga > 0.0)) throw std::invalid_argument("ChannelPair: gamma_a must be positive");
        if (!(gb >= 0.0)) throw std::invalid_argument("ChannelPair: gamma_b must be non-negative");
        if (a.omega0() != b.omega0())
            throw std::invalid_argument("ChannelPair: channels expanded around different omega0");
    }

    [[nodiscard]] double omega0() const { return a.omega0(); }

    [[nodiscard]] ChannelPair with_gamma_b(double gb) const { return {a, b, gamma_a, gb}; }
};

// ---------------------------------------------------------------------------
// Exact geometry
// ---------------------------------------------------------------------------

[[nodiscard]] inline double cutoff_wavenumber(const WaveguideGeometry& geom, ModeIndex mode) {
    const double kx = mode.m * std::numbers::pi / geom.Lx;
    const double ky = mode.n * std::numbers::pi / geom.Ly;
    return std::hypot(kx, ky);
}

[[nodiscard]] inline double cutoff_frequency(const WaveguideGeometry& geom, ModeIndex mode) {
    return geom.c * cutoff_wavenumber(geom, mode);
}

[[nodiscard]] inline double exact_dispersion(const WaveguideGeometry& geom, ModeIndex mode, double k) {
    return geom.c * std::hypot(cutoff_wavenumber(geom, mode), k);
}

/// Transverse factors of the TE_mn electric field with the per-photon
/// amplitude and the e^{ikz} phase stripped off.
struct ModeProfile {
    cplx x;
    cplx y;
};

[[nodiscard]] inline ModeProfile mode_profile(const WaveguideGeometry& geom, ModeIndex mode, double x,
                                              double y) {
    if (x < 0.0 || x > geom.Lx || y < 0.0 || y > geom.Ly)
        throw std::invalid_argument("mode_profile: point outside the waveguide cross-section");
    if (mode.m < 0 || mode.n < 0) throw std::invalid_argument("mode_profile: negative mode index");
    const double kcut = cutoff_wavenumber(geom, mode);
    if (kcut == 0.0) return {};  // TE_00 carries no transverse field

    const double pi = std::numbers::pi;
    const double ax = mode.m * pi / geom.Lx;
    const double ay = mode.n * pi / geom.Ly;
    const double ex = 2.0 * mode.n * pi / (kcut * geom.Ly) * std::cos(ax * x) * std::sin(ay * y);
    const double ey = 2.0 * mode.m * pi / (kcut * geom.Lx) * std::sin(ax * x) * std::cos(ay * y);
    return {cplx(0.0, -ex), cplx(0.0, ey)};
}

/// e^{ikz}, the longitudinal phase factored out of mode_profile.
[[nodiscard]] inline cplx longitudinal_phase(double k, double z) { return std::polar(1.0, k * z); }

/// Exact dipole coupling g_{m,n,k} = -d . u_{m,n,k}(r0) at z = 0, in SI units.
/// The quantization volume L_x L_y 2 pi / |k| is singular at k = 0.
[[nodiscard]] inline cplx coupling_strength(const WaveguideGeometry& geom, const AtomParams& atom,
                                            ModeIndex mode, double k) {
    if (k == 0.0)
        throw std::invalid_argument("coupling_strength: k = 0 (quantization volume diverges)");
    const ModeProfile prof = mode_profile(geom, mode, atom.x0, atom.y0);
    const double omega = exact_dispersion(geom, mode, k);
    const double volume = geom.Lx * geom.Ly * 2.0 * std::numbers::pi / std::abs(k);
    const double field = std::sqrt(si::hbar * omega / (2.0 * si::vacuum_permittivity * volume));
    return -(atom.dx * field * prof.x + atom.dy * field * prof.y);
}

// ---------------------------------------------------------------------------
// Quadratic expansion
// ---------------------------------------------------------------------------

/// Expands the exact dispersion of `mode` around the k0 where it equals
/// omega0; direction picks the sign of k0.
[[nodiscard]] inline QuadraticDispersion quadratic_expand(const WaveguideGeometry& geom, double omega0,
                                                          ModeIndex mode, int direction = +1) {
    const double wc = cutoff_frequency(geom, mode);
    if (!(omega0 > wc)) throw std::domain_error("quadratic_expand: channel closed at omega0");
    const double c2 = geom.c * geom.c;
    // c k0 = sqrt(w0^2 - wc^2); written as a product to avoid cancellation.
    const double ck0 = std::sqrt((omega0 - wc) * (omega0 + wc));
    const double sign = direction < 0 ? -1.0 : 1.0;
    const double v1 = sign * geom.c * ck0 / omega0;
    const double v2 = c2 * wc * wc / (2.0 * omega0 * omega0 * omega0);
    return {omega0, v1, v2};
}

/// Channel coefficients parameterized by (omega0, delta, v_a1), with
/// delta = sqrt(omega0^2 - (c pi / L)^2) for a square guide and v_a1 taken as
/// a free number. `alt_va2` selects the alternative v_a2 expression
/// (w0 v1^2 / 2 delta^2 - v1 / 2 w0) instead of the Taylor one
/// (w0 v1^2 / 2 delta^2 - v1^2 / 2 w0); they agree at v_a1 = 1.
struct DeltaForm {
    double omega0 = 1.0;
    double delta = 0.8;
    double va1 = 1.0;
    bool alt_va2 = false;
};

[[nodiscard]] inline std::pair<QuadraticDispersion, QuadraticDispersion> channels_from_delta(
    const DeltaForm& f) {
    if (!(f.omega0 > 0.0)) throw std::invalid_argument("channels_from_delta: omega0 must be positive");
    if (!(f.delta > 0.0) || !(f.delta < f.omega0))
        throw std::invalid_argument("channels_from_delta: need 0 < delta < omega0");
    if (!(2.0 * f.delta * f.delta > f.omega0 * f.omega0))
        throw std::domain_error("channels_from_delta: b channel closed (2 delta^2 <= omega0^2)");
    if (!(f.va1 > 0.0)) throw std::invalid_argument("channels_from_delta: va1 must be positive");

    const double w0 = f.omega0;
    const double d2 = f.delta * f.delta;
    const double first = w0 * f.va1 * f.va1 / (2.0 * d2);
    const double va2 = f.alt_va2 ? first - f.va1 / (2.0 * w0) : first - f.va1 * f.va1 / (2.0 * w0);
    const double vb1 = f.va1 * std::sqrt(2.0 * d2 - w0 * w0) / f.delta;
    return {QuadraticDispersion(w0, f.va1, va2), QuadraticDispersion(w0, vb1, 2.0 * va2)};
}

/// Delta(p) = v1 p + v2 p^2
[[nodiscard]] inline double detuning_of_k(const QuadraticDispersion& disp, double k) {
    return k * (disp.v1() + disp.v2() * k);
}

/// Both real solutions of v1 p + v2 p^2 = Delta, "+" root first.
[[nodiscard]] inline std::pair<double, double> k_of_detuning(const QuadraticDispersion& disp,
                                                             double detuning) {
    const double v1 = disp.v1();
    const double v2 = disp.v2();
    const double disc = v1 * v1 + 4.0 * v2 * detuning;
    if (disc < 0.0) throw std::domain_error("k_of_detuning: below band minimum");
    const double s = std::sqrt(disc);
    // Stable pairing: the larger-magnitude root from the non-cancelling sum,
    // the other one through the product p+ p- = -Delta / v2.
    const double big = (v1 >= 0.0) ? (-v1 - s) / (2.0 * v2) : (-v1 + s) / (2.0 * v2);
    const double small = (big != 0.0) ? -detuning / (v2 * big) : 0.0;
    if (v1 >= 0.0) return {small, big};
    return {big, small};
}

/// Transverse size below which the b mode can be dropped (a-mode influence
/// at least 100x that of the b mode): L_c = c (sqrt2 - 1) pi / omega0.
[[nodiscard]] inline double critical_size(double omega0, double c = si::speed_of_light) {
    if (!(omega0 > 0.0)) throw std::invalid_argument("critical_size: omega0 must be positive");
    return c * (std::numbers::sqrt2 - 1.0) * std::numbers::pi / omega0;
}

}  // namespace wgqed
