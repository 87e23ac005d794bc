/**
 * self_energy.hpp - Markov self-energy of the emitter in one quadratic channel.
 *
 *   Sigma(E) = -i gamma v1 / sqrt(v1^2 + 4 v2 (E - w0))
 *
 * with the square root taken on the retarded side (+i0). Above the band
 * minimum Sigma is pure imaginary (decay into the channel); below it the root
 * becomes i sqrt|arg| and Sigma is real and negative (a pure level shift).
 */

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "waveguide_model.hpp"

namespace wgqed {

enum class Branch { propagating, evanescent, at_branch_point };

struct SelfEnergyValue {
    cplx value;
    Branch branch;
};

/// gamma = 2 pi |g|^2 / v1
[[nodiscard]] inline double decay_rate(double g, double v1) {
    if (!(v1 > 0.0)) throw std::invalid_argument("decay_rate: v1 must be positive");
    return 2.0 * std::numbers::pi * g * g / v1;
}

/// |g| = sqrt(gamma v1 / 2 pi), the inverse of decay_rate.
[[nodiscard]] inline double coupling_of_rate(double gamma, double v1) {
    if (!(v1 > 0.0)) throw std::invalid_argument("coupling_of_rate: v1 must be positive");
    if (!(gamma >= 0.0)) throw std::invalid_argument("coupling_of_rate: gamma must be non-negative");
    return std::sqrt(gamma * v1 / (2.0 * std::numbers::pi));
}

/// Self-energy at detuning E - w0 from the channel's expansion point.
[[nodiscard]] inline SelfEnergyValue sigma_at_detuning(const QuadraticDispersion& disp, double gamma,
                                                       double detuning) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("sigma: gamma must be non-negative");
    const double v1 = std::abs(disp.v1());
    const double arg = v1 * v1 + 4.0 * disp.v2() * detuning;
    if (arg == 0.0) throw std::domain_error("sigma: branch point: self-energy diverges");
    if (arg > 0.0) return {cplx(0.0, -gamma * v1 / std::sqrt(arg)), Branch::propagating};
    return {cplx(-gamma * v1 / std::sqrt(-arg), 0.0), Branch::evanescent};
}

[[nodiscard]] inline SelfEnergyValue sigma(const QuadraticDispersion& disp, double gamma, double E) {
    return sigma_at_detuning(disp, gamma, E - disp.omega0());
}

/// Closed form continued to complex detuning (principal root). Agrees with
/// sigma_at_detuning in the limit Im z -> 0+.
[[nodiscard]] inline cplx sigma_continued(const QuadraticDispersion& disp, double gamma, cplx detuning) {
    const double v1 = std::abs(disp.v1());
    return cplx(0.0, -gamma * v1) / std::sqrt(v1 * v1 + 4.0 * disp.v2() * detuning);
}

struct OracleOptions {
    double eta0 = 1e-2;      ///< largest regulator, in units of omega0
    int eta_levels = 3;      ///< eta0, eta0/10, eta0/100, ...
    double k_cutoff = 0.0;   ///< inner/outer panel split; 0 picks a default
    double tolerance = 1e-3; ///< relative agreement required between extrapolants
    unsigned max_depth = 12;
    double quad_tol = 1e-10;
};

/// Numerically integrates |g|^2 / (E + i eta - w(p)) over the full parabola
/// w(p) = w0 + v1 p + v2 p^2 with constant g, then extrapolates eta -> 0.
/// Independent of the closed form; used to check it.
[[nodiscard]] inline cplx sigma_integral_oracle(const QuadraticDispersion& disp, double gamma, double E,
                                                const OracleOptions& opt = {}) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("sigma_integral_oracle: gamma must be non-negative");
    if (!(opt.eta0 > 0.0) || opt.eta_levels < 2)
        throw std::invalid_argument("sigma_integral_oracle: need eta0 > 0 and at least two eta levels");
    if (gamma == 0.0) return {0.0, 0.0};

    using boost::math::quadrature::gauss_kronrod;
    const double v1 = disp.v1();
    const double v2 = disp.v2();
    const double g2 = gamma * std::abs(v1) / (2.0 * std::numbers::pi);
    const double detuning = E - disp.omega0();
    const double scale = std::abs(disp.omega0()) > 0.0 ? std::abs(disp.omega0()) : 1.0;

    // Panel breakpoints at the on-shell momenta (or the vertex below the band).
    std::vector<double> cuts;
    const double disc = v1 * v1 + 4.0 * v2 * detuning;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        cuts = {(-v1 - s) / (2.0 * v2), (-v1 + s) / (2.0 * v2)};
    } else {
        cuts = {-v1 / (2.0 * v2)};
    }
    double k_split = opt.k_cutoff;
    if (!(k_split > 0.0))
        k_split = 50.0 * (std::sqrt(std::abs(detuning) / v2) + std::abs(v1) / v2);
    for (double cpt : cuts) k_split = std::max(k_split, 2.0 * std::abs(cpt) + 1.0);

    // Around each pole the Lorentzian has width eta/|slope|; panels are graded
    // geometrically from that width outwards so every panel is smooth on its own scale.
    auto edges_for = [&](double eta) {
        std::vector<double> e = {-k_split, k_split};
        e.insert(e.end(), cuts.begin(), cuts.end());
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            const double p0 = cuts[i];
            const double slope = std::abs(v1 + 2.0 * v2 * p0);
            double reach = k_split - std::abs(p0);
            if (cuts.size() == 2) reach = std::min(reach, 0.5 * std::abs(cuts[1] - cuts[0]));
            // At the vertex the width scales as sqrt(eta / v2).
            double w = slope > 0.0 ? eta / slope : std::sqrt(eta / v2);
            for (; w < reach; w *= 4.0) {
                e.push_back(p0 - w);
                e.push_back(p0 + w);
            }
        }
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        return e;
    };

    auto integrate_at = [&](double eta) {
        auto re = [&](double p) {
            const double d = detuning - p * (v1 + v2 * p);
            return g2 * d / (d * d + eta * eta);
        };
        auto im = [&](double p) {
            const double d = detuning - p * (v1 + v2 * p);
            return -g2 * eta / (d * d + eta * eta);
        };
        const auto edges = edges_for(eta);
        const double inf = std::numeric_limits<double>::infinity();
        double sre = gauss_kronrod<double, 61>::integrate(re, -inf, edges.front(), opt.max_depth, opt.quad_tol) +
                     gauss_kronrod<double, 61>::integrate(re, edges.back(), inf, opt.max_depth, opt.quad_tol);
        double sim = gauss_kronrod<double, 61>::integrate(im, -inf, edges.front(), opt.max_depth, opt.quad_tol) +
                     gauss_kronrod<double, 61>::integrate(im, edges.back(), inf, opt.max_depth, opt.quad_tol);
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            sre += gauss_kronrod<double, 61>::integrate(re, edges[i], edges[i + 1], opt.max_depth, opt.quad_tol);
            sim += gauss_kronrod<double, 61>::integrate(im, edges[i], edges[i + 1], opt.max_depth, opt.quad_tol);
        }
        return cplx(sre, sim);
    };

    std::vector<cplx> samples;
    double eta = opt.eta0 * scale;
    for (int j = 0; j < opt.eta_levels; ++j, eta /= 10.0) samples.push_back(integrate_at(eta));

    // Richardson tableau for an error series in powers of eta, ratio 10.
    std::vector<cplx> level = samples;
    std::vector<cplx> first_order;
    double factor = 10.0;
    while (level.size() > 1) {
        std::vector<cplx> next;
        for (std::size_t j = 0; j + 1 < level.size(); ++j)
            next.push_back((factor * level[j + 1] - level[j]) / (factor - 1.0));
        if (first_order.empty()) first_order = next;
        level = std::move(next);
        factor *= 10.0;
    }
    const cplx best = level.front();

    const cplx a = samples[samples.size() - 2];
    const cplx b = samples.back();
    const cplx last_step = first_order.size() >= 2 ? first_order[first_order.size() - 1] - first_order[first_order.size() - 2]
                                                   : b - a;
    if (std::abs(last_step) > 10.0 * opt.tolerance * std::abs(best))
        throw std::runtime_error("sigma_integral_oracle: eta extrapolation did not converge");
    return best;
}

}  // namespace wgqed
