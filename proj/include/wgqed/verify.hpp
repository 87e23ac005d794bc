/**
 * verify.hpp - named invariant checks with measured worst-case deviations.
 *
 * Each check evaluates one structural identity or oracle agreement for the
 * channel pair described by a parameter set and reports the worst deviation
 * seen against its threshold.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bound_states.hpp"
#include "scattering.hpp"
#include "self_energy.hpp"
#include "sweep.hpp"
#include "waveguide_model.hpp"

namespace wgqed {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    [[nodiscard]] bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

/// Central-difference first derivative and half second derivative of the
/// exact dispersion at the on-shell k0, for comparison with quadratic_expand.
struct FiniteDifferenceTaylor {
    double v1;
    double v2;
};

[[nodiscard]] inline FiniteDifferenceTaylor taylor_by_finite_difference(const WaveguideGeometry& geom, double omega0,
                                                                        ModeIndex mode, int direction = +1) {
    const double kc = cutoff_wavenumber(geom, mode);
    const double k0 = (direction < 0 ? -1.0 : 1.0) * std::sqrt(omega0 * omega0 / (geom.c * geom.c) - kc * kc);
    const double h = 1e-3 * std::hypot(kc, k0);
    auto w = [&](double k) { return exact_dispersion(geom, mode, k); };
    // Five-point stencils.
    const double d1 = (-w(k0 + 2 * h) + 8 * w(k0 + h) - 8 * w(k0 - h) + w(k0 - 2 * h)) / (12 * h);
    const double d2 = (-w(k0 + 2 * h) + 16 * w(k0 + h) - 30 * w(k0) + 16 * w(k0 - h) - w(k0 - 2 * h)) / (12 * h * h);
    return {d1, 0.5 * d2};
}

namespace detail {

inline CheckResult make_check(std::string name, double measured, double threshold, bool below = true,
                              std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.threshold = threshold;
    c.passed = below ? (measured < threshold) : (measured >= threshold);
    c.detail = std::move(detail);
    return c;
}

inline double rel_err(cplx got, cplx want) {
    const double den = std::abs(want);
    return den == 0.0 ? std::abs(got) : std::abs(got - want) / den;
}

}  // namespace detail

/// Relative error of the closed-form self-energy against the integral
/// oracle on `count` energies spanning [omega_min - 0.5 w0, omega0 + 0.5 w0],
/// skipping +-0.05 w0 around the branch point.
[[nodiscard]] inline double sigma_oracle_worst(const QuadraticDispersion& disp, double gamma, int count = 20) {
    const double w0 = disp.omega0();
    const double lo = disp.omega_min() - 0.5 * w0;
    const double hi = w0 + 0.5 * w0;
    double worst = 0.0;
    int taken = 0;
    for (int i = 0; taken < count && i < 4 * count; ++i) {
        const double E = lo + (hi - lo) * (i + 0.5) / (2 * count);
        if (std::abs(E - disp.omega_min()) < 0.05 * w0) continue;
        const cplx closed = sigma(disp, gamma, E).value;
        const cplx oracle = sigma_integral_oracle(disp, gamma, E);
        worst = std::max(worst, detail::rel_err(oracle, closed));
        ++taken;
    }
    return worst;
}

struct RootComparison {
    double roots = 0.0;     ///< max distance between matched closed/numeric roots
    double residual = 0.0;  ///< max unsquared pole residual over both routes
    double vieta = 0.0;     ///< max Vieta deviation (sum and product)
    double conjugacy = 0.0;
};

/// Closed form vs companion matrix on one parameter set.
[[nodiscard]] inline RootComparison compare_bound_state_routes(double vb1, double vb2, double gamma_b, double omega0) {
    const auto cf = bound_state_closed_form(vb1, vb2, gamma_b, omega0);
    const auto nm = bound_state_numeric(vb1, vb2, gamma_b, omega0);
    RootComparison out;
    std::vector<cplx> a = {cplx(cf.E_bound, 0.0), cf.quasibound[0], cf.quasibound[1]};
    std::vector<cplx> b = {cplx(nm.E_bound, 0.0), nm.quasibound[0], nm.quasibound[1]};
    // Match as multisets: try every permutation of b.
    std::vector<int> idx = {0, 1, 2};
    double best = 1e300;
    do {
        double m = 0.0;
        for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(a[i] - b[idx[i]]));
        best = std::min(best, m);
    } while (std::next_permutation(idx.begin(), idx.end()));
    out.roots = best;
    out.residual = std::max(cf.residual, nm.residual);

    const cplx x0(cf.delta_F, 0.0);
    const cplx x1 = cf.quasibound[0] - omega0;
    const cplx x2 = cf.quasibound[1] - omega0;
    const double want_sum = -vb1 * vb1 / (4.0 * vb2);
    const double want_prod = -gamma_b * gamma_b * vb1 * vb1 / (4.0 * vb2);
    out.vieta = std::max(std::abs(x0 + x1 + x2 - want_sum), std::abs(x0 * x1 * x2 - want_prod));
    out.conjugacy = std::abs(std::conj(cf.quasibound[0]) - cf.quasibound[1]);
    return out;
}

/// Runs every invariant suite for the channel pair described by `params`.
[[nodiscard]] inline VerifyReport verify(const std::map<std::string, double>& params) {
    VerifyReport rep;
    const ChannelPair pair = channels_from_parameters(params);
    const ChannelPair coupled = pair.gamma_b > 0.0 ? pair : pair.with_gamma_b(0.05);
    const double dmin = pair.a.detuning_min();
    const double dmaxF = pair.b.detuning_min();
    std::mt19937_64 rng(20130415);

    // Unitarity of the two-port below the b band edge.
    {
        double worst = 0.0;
        const double hi = std::max(dmin, dmaxF - 1e-9);
        for (double x : linspace(dmin, hi, 2001)) {
            const auto p = scatter_quadratic(pair, x);
            worst = std::max({worst, std::abs(p.R + p.T - 1.0), std::abs(p.P_loss)});
        }
        rep.checks.push_back(detail::make_check("unitarity_below_threshold", worst, 1e-12, true, "max |R+T-1|, |P_loss|"));
    }
    // Loss non-negative and t = 1 + r over [D_min, 10 w0].
    {
        double min_loss = 1.0;
        double t_err = 0.0;
        for (double x : linspace(dmin, 10.0 * pair.omega0(), 5001)) {
            const auto p = scatter_quadratic(pair, x);
            min_loss = std::min(min_loss, p.P_loss);
            t_err = std::max(t_err, std::abs(p.t - (1.0 + p.r)));
        }
        rep.checks.push_back(detail::make_check("loss_nonnegative", min_loss, -1e-12, false, "min P_loss"));
        rep.checks.push_back(detail::make_check("t_equals_one_plus_r", t_err, 1e-300, true, "max |t-(1+r)|"));
    }
    // k-form vs detuning-form.
    {
        std::uniform_real_distribution<double> dist(3.0 * pair.a.k_vertex(), -pair.a.k_vertex());
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double k = dist(rng);
            const auto pk = scatter_quadratic_by_k(pair, k);
            const auto pd = scatter_quadratic(pair, detuning_of_k(pair.a, k));
            // Recovering k from D loses digits near the vertex; scale by the conditioning.
            const double va1 = std::abs(pair.a.v1());
            const double slope = 2.0 * pair.a.v2() * k + va1;
            const double cond = std::max(1.0, va1 * va1 / (slope * slope));
            worst = std::max({worst, std::abs(pk.r - pd.r) / cond, std::abs(pk.T - pd.T) / cond});
        }
        rep.checks.push_back(detail::make_check("k_form_consistency", worst, 1e-12, true,
                                                "1000 random k, both branches, scaled by v1^2/(2 v2 k + v1)^2"));
    }
    // Quadratic equals linear at D = 0.
    {
        const auto q = scatter_quadratic(pair, 0.0);
        const auto l = scatter_linear(pair.gamma_a, pair.gamma_b, 0.0);
        const double dev = std::max({std::abs(q.r - l.r), std::abs(q.T - l.T), std::abs(q.P_loss - l.P_loss)});
        rep.checks.push_back(detail::make_check("quadratic_linear_at_zero", dev, 1e-12));
    }
    // Complete reflections.
    {
        double worst = 0.0;
        if (pair.gamma_b > 0.0) {
            const auto rs = find_resonances(pair);
            if (rs.delta_F && !rs.feshbach_outside_a_band) worst = std::abs(scatter_quadratic(pair, *rs.delta_F).t);
        } else {
            worst = std::max(std::abs(scatter_quadratic(pair, 0.0).t),
                             std::abs(scatter_quadratic_by_k(pair, -std::abs(pair.a.v1()) / pair.a.v2()).t));
        }
        worst = std::max(worst, std::abs(scatter_quadratic(pair, dmin).t));
        rep.checks.push_back(detail::make_check("complete_reflection", worst, 1e-9, true,
                                                pair.gamma_b > 0.0 ? "|t| at D_F and D_min" : "|t| at k_res and D_min"));
    }
    // Self-energy closed form vs numerical integral.
    {
        const double worst = std::max(sigma_oracle_worst(pair.a, pair.gamma_a), sigma_oracle_worst(coupled.b, coupled.gamma_b));
        rep.checks.push_back(detail::make_check("sigma_oracle", worst, 1e-3, true, "20 energies per channel"));
    }
    // Bound states.
    {
        const auto cmp = compare_bound_state_routes(std::abs(coupled.b.v1()), coupled.b.v2(), coupled.gamma_b, coupled.omega0());
        rep.checks.push_back(detail::make_check("bound_state_residual", cmp.residual, 1e-10));
        rep.checks.push_back(detail::make_check("closed_vs_numeric_roots", cmp.roots, 1e-8));
        rep.checks.push_back(detail::make_check("vieta_identities", cmp.vieta, 1e-10));
        rep.checks.push_back(detail::make_check("quasibound_conjugacy", cmp.conjugacy, 1e-10));
    }
    // Taylor coefficients vs finite differences on square guides.
    {
        std::uniform_real_distribution<double> size(0.5, 2.0);
        std::uniform_real_distribution<double> above(1.05, 3.0);
        double worst = 0.0;
        double worst_ratio = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double L = size(rng);
            const WaveguideGeometry geom(L, L, 1.0);
            const double w0 = above(rng) * cutoff_frequency(geom, te11);
            for (ModeIndex mode : {te01, te11}) {
                const auto exp = quadratic_expand(geom, w0, mode);
                const auto fd = taylor_by_finite_difference(geom, w0, mode);
                worst = std::max({worst, std::abs(fd.v1 - exp.v1()) / std::abs(exp.v1()),
                                  std::abs(fd.v2 - exp.v2()) / std::abs(exp.v2())});
            }
            const double va2 = quadratic_expand(geom, w0, te01).v2();
            const double vb2 = quadratic_expand(geom, w0, te11).v2();
            worst_ratio = std::max(worst_ratio, std::abs(vb2 - 2.0 * va2) / (2.0 * va2));
        }
        rep.checks.push_back(detail::make_check("taylor_vs_finite_difference", worst, 1e-6, true, "20 square geometries"));
        rep.checks.push_back(detail::make_check("vb2_equals_2va2", worst_ratio, 1e-12));
    }
    return rep;
}

}  // namespace wgqed
