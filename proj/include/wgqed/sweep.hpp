/**
 * sweep.hpp - parameter configurations, grid sweeps and named presets.
 *
 * A SweepConfig names a model (linear or quadratic), an axis (k, detuning or
 * gamma_b) with an evenly spaced grid, and a flat set of named parameters:
 *
 *   omega0, va1, va2, vb1, vb2, delta, gamma_a, gamma_b,
 *   detuning   (fixed detuning for a gamma_b axis)
 *   alt_va2    (0/1, alternative v_a2 expression in the delta form)
 *   q, d       (Fano comparison)
 *
 * Unset channel coefficients fall back to the delta form with
 * omega0 = 1, delta = 0.8, va1 = 1, gamma_a = 0.01, gamma_b = 0.
 */

#pragma once

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bound_states.hpp"
#include "scattering.hpp"
#include "waveguide_model.hpp"

namespace wgqed {

enum class Model { linear, quadratic };
enum class Axis { k, detuning, gamma_b };
enum class Study { scan, fano };
enum class Format { csv, json };

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct SweepConfig {
    Model model = Model::quadratic;
    Axis axis = Axis::k;
    Study study = Study::scan;
    double start = -4.5;
    double stop = 0.6;
    int count = 2000;
    std::map<std::string, double> parameters;
    std::vector<std::string> outputs;  ///< empty selects every available column
    Format format = Format::csv;
};

struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::pair<std::string, std::string>> parameters;  ///< echo, in emission order
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, double>> annotations;
};

/// Row-wise equality treating NaN == NaN.
[[nodiscard]] inline bool same_result(const SweepResult& a, const SweepResult& b) {
    if (a.columns != b.columns || a.parameters != b.parameters || a.rows.size() != b.rows.size() ||
        a.annotations.size() != b.annotations.size())
        return false;
    auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i].size() != b.rows[i].size()) return false;
        for (std::size_t j = 0; j < a.rows[i].size(); ++j)
            if (!same(a.rows[i][j], b.rows[i][j])) return false;
    }
    for (std::size_t i = 0; i < a.annotations.size(); ++i)
        if (a.annotations[i].first != b.annotations[i].first || !same(a.annotations[i].second, b.annotations[i].second))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

inline const char* to_string(Model m) { return m == Model::linear ? "linear" : "quadratic"; }
inline const char* to_string(Axis a) {
    switch (a) {
        case Axis::k: return "k";
        case Axis::detuning: return "detuning";
        case Axis::gamma_b: return "gamma_b";
    }
    return "?";
}
inline const char* to_string(Study s) { return s == Study::scan ? "scan" : "fano"; }
inline const char* to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

inline Model parse_model(const std::string& s) {
    if (s == "linear") return Model::linear;
    if (s == "quadratic") return Model::quadratic;
    throw ConfigError("model", "expected linear|quadratic, got '" + s + "'");
}
inline Axis parse_axis(const std::string& s) {
    if (s == "k") return Axis::k;
    if (s == "detuning") return Axis::detuning;
    if (s == "gamma_b") return Axis::gamma_b;
    throw ConfigError("axis", "expected k|detuning|gamma_b, got '" + s + "'");
}
inline Study parse_study(const std::string& s) {
    if (s == "scan") return Study::scan;
    if (s == "fano") return Study::fano;
    throw ConfigError("study", "expected scan|fano, got '" + s + "'");
}
inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ConfigError("format", "expected csv|json, got '" + s + "'");
}

/// Full-precision decimal text (17 significant digits).
[[nodiscard]] inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Every column a sweep can emit, in emission order.
inline const std::vector<std::string>& canonical_columns() {
    static const std::vector<std::string> cols = {"k",  "delta", "gamma_b", "re_r",    "im_r", "re_t", "im_t",
                                                  "R",  "T",     "P_loss",  "delta_F", "f",    "limit_flag"};
    return cols;
}

inline const std::vector<std::string>& known_parameters() {
    static const std::vector<std::string> keys = {"omega0", "va1",      "va2",          "vb1", "vb2", "delta",
                                                  "gamma_a", "gamma_b", "detuning",     "q",   "d",   "alt_va2"};
    return keys;
}

// ---------------------------------------------------------------------------
// Parameters -> channels
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<double> lookup(const std::map<std::string, double>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) return std::nullopt;
    return it->second;
}

inline double get_or(const std::map<std::string, double>& p, const std::string& key, double fallback) {
    return lookup(p, key).value_or(fallback);
}

}  // namespace detail

/// Builds the two channels from a flat parameter set. Explicit (va1, va2,
/// vb1[, vb2 = 2 va2]) take precedence over the delta form.
[[nodiscard]] inline ChannelPair channels_from_parameters(const std::map<std::string, double>& p) {
    using detail::get_or;
    using detail::lookup;
    const double omega0 = get_or(p, "omega0", 1.0);
    const double va1 = get_or(p, "va1", 1.0);
    const double gamma_a = get_or(p, "gamma_a", 0.01);
    const double gamma_b = get_or(p, "gamma_b", 0.0);
    if (!(omega0 > 0.0)) throw ConfigError("omega0", "must be positive");
    if (!(va1 > 0.0)) throw ConfigError("va1", "must be positive");
    if (!(gamma_a > 0.0)) throw ConfigError("gamma_a", "must be positive");
    if (!(gamma_b >= 0.0)) throw ConfigError("gamma_b", "must be non-negative");

    if (auto va2 = lookup(p, "va2")) {
        if (!(*va2 > 0.0)) throw ConfigError("va2", "must be positive");
        auto vb1 = lookup(p, "vb1");
        if (!vb1) throw ConfigError("vb1", "required when va2 is given explicitly");
        if (!(*vb1 > 0.0)) throw ConfigError("vb1", "must be positive");
        const double vb2 = get_or(p, "vb2", 2.0 * *va2);
        if (!(vb2 > 0.0)) throw ConfigError("vb2", "must be positive");
        return {QuadraticDispersion(omega0, va1, *va2), QuadraticDispersion(omega0, *vb1, vb2), gamma_a, gamma_b};
    }
    DeltaForm form;
    form.omega0 = omega0;
    form.delta = get_or(p, "delta", 0.8 * omega0);
    form.va1 = va1;
    form.alt_va2 = get_or(p, "alt_va2", 0.0) != 0.0;
    try {
        auto [a, b] = channels_from_delta(form);
        return {a, b, gamma_a, gamma_b};
    } catch (const std::exception& e) {
        throw ConfigError("delta", e.what());
    }
}

inline void validate(const SweepConfig& cfg) {
    if (cfg.count < 2) throw ConfigError("count", "must be at least 2");
    if (!std::isfinite(cfg.start)) throw ConfigError("start", "must be finite");
    if (!std::isfinite(cfg.stop)) throw ConfigError("stop", "must be finite");
    if (cfg.study == Study::scan && !(cfg.start < cfg.stop)) throw ConfigError("range", "start must be below stop");
    const auto& known = known_parameters();
    for (const auto& [key, value] : cfg.parameters) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(key, "unknown parameter");
        if (!std::isfinite(value)) throw ConfigError(key, "must be finite");
    }
    for (const auto& col : cfg.outputs) {
        const auto& cols = canonical_columns();
        if (std::find(cols.begin(), cols.end(), col) == cols.end()) throw ConfigError("outputs", "unknown column '" + col + "'");
    }
    if (cfg.axis == Axis::gamma_b && cfg.start < 0.0) throw ConfigError("start", "gamma_b axis must be non-negative");
    if (cfg.study == Study::fano) {
        if (cfg.model != Model::quadratic) throw ConfigError("model", "Fano comparison needs the quadratic model");
        if (!detail::lookup(cfg.parameters, "d") || detail::get_or(cfg.parameters, "d", 0.0) <= 0.0)
            throw ConfigError("d", "Fano comparison needs a positive width d");
    }
    if (cfg.model == Model::quadratic) (void)channels_from_parameters(cfg.parameters);
    else {
        if (!(detail::get_or(cfg.parameters, "gamma_a", 0.01) > 0.0)) throw ConfigError("gamma_a", "must be positive");
        if (!(detail::get_or(cfg.parameters, "gamma_b", 0.0) >= 0.0)) throw ConfigError("gamma_b", "must be non-negative");
    }
}

[[nodiscard]] inline std::vector<double> linspace(double start, double stop, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    const double step = (stop - start) / (count - 1);
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = start + i * step;
    out.back() = stop;
    return out;
}

// ---------------------------------------------------------------------------
// Transmission-zero locator
// ---------------------------------------------------------------------------

struct TransmissionZero {
    double k;
    double T;
};

/// Local minima of T on the grid, refined by Brent minimization on the
/// bracketing cells; those with T below `zero_tol` are reported.
template <class Eval>
[[nodiscard]] std::vector<TransmissionZero> locate_transmission_zeros(Eval&& eval_t, const std::vector<double>& grid,
                                                                     double zero_tol = 1e-9) {
    std::vector<double> T(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) T[i] = std::norm(eval_t(grid[i]));
    std::vector<TransmissionZero> out;
    auto trans = [&](double k) { return std::norm(eval_t(k)); };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const bool left = i == 0 || T[i] <= T[i - 1];
        const bool right = i + 1 == grid.size() || T[i] < T[i + 1];
        if (!left || !right) continue;
        const double lo = grid[i == 0 ? 0 : i - 1];
        const double hi = grid[i + 1 == grid.size() ? i : i + 1];
        std::uintmax_t iters = 500;
        auto best = boost::math::tools::brent_find_minima(trans, lo, hi, std::numeric_limits<double>::digits / 2, iters);
        if (T[i] < best.second) best = {grid[i], T[i]};
        if (best.second < zero_tol) {
            if (!out.empty() && std::abs(out.back().k - best.first) < 1e-9 * (1.0 + std::abs(best.first))) continue;
            out.push_back({best.first, best.second});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace detail {

inline void echo_config(const SweepConfig& cfg, SweepResult& res) {
    res.parameters.emplace_back("model", to_string(cfg.model));
    res.parameters.emplace_back("study", to_string(cfg.study));
    res.parameters.emplace_back("axis", to_string(cfg.axis));
    res.parameters.emplace_back("start", format_double(cfg.start));
    res.parameters.emplace_back("stop", format_double(cfg.stop));
    res.parameters.emplace_back("count", std::to_string(cfg.count));
    for (const auto& [key, value] : cfg.parameters) res.parameters.emplace_back(key, format_double(value));
}

inline std::vector<double> project(const ScatteringPoint& p, double gamma_b, double delta_F, double fano) {
    return {p.k,      p.detuning, gamma_b, p.r.real(), p.r.imag(), p.t.real(), p.t.imag(),
            p.R,      p.T,        p.P_loss, delta_F,   fano,       static_cast<double>(static_cast<int>(p.limit))};
}

/// Keeps `available` columns, further restricted to `wanted` when non-empty;
/// limit_flag is always kept.
inline void select_columns(SweepResult& res, const std::vector<std::string>& available,
                           const std::vector<std::string>& wanted) {
    const auto& all = canonical_columns();
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < all.size(); ++j) {
        const bool avail = std::find(available.begin(), available.end(), all[j]) != available.end();
        const bool chosen = wanted.empty() || all[j] == "limit_flag" ||
                            std::find(wanted.begin(), wanted.end(), all[j]) != wanted.end();
        if (avail && chosen) keep.push_back(j);
    }
    for (const auto& w : wanted)
        if (std::find(available.begin(), available.end(), w) == available.end())
            throw ConfigError("outputs", "column '" + w + "' not produced by this sweep");
    res.columns.clear();
    for (std::size_t j : keep) res.columns.push_back(all[j]);
    for (auto& row : res.rows) {
        std::vector<double> sel;
        sel.reserve(keep.size());
        for (std::size_t j : keep) sel.push_back(row[j]);
        row = std::move(sel);
    }
}

inline void annotate_if(SweepResult& res, const std::string& name, double value, bool on_axis, double lo, double hi) {
    if (!on_axis || (value >= lo && value <= hi)) res.annotations.emplace_back(name, value);
}

inline ScatteringPoint below_band_point(double k, double detuning) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ScatteringPoint p;
    p.k = k;
    p.detuning = detuning;
    p.r = p.t = cplx(nan, nan);
    p.R = p.T = p.P_loss = nan;
    p.limit = LimitFlag::below_band;
    return p;
}

}  // namespace detail

/// Transmission and Fano function on a window of half-width 5d around the
/// Feshbach detuning. Without an explicit gamma_b the coupling is chosen so
/// the dip's linewidth equals d.
[[nodiscard]] inline SweepResult run_fano_compare(const SweepConfig& cfg) {
    validate(cfg);
    auto params = cfg.parameters;
    const double q = detail::get_or(params, "q", 1e-4);
    const double d = detail::get_or(params, "d", 1e-3);
    ChannelPair pair = channels_from_parameters(params);
    if (!(pair.gamma_b > 0.0)) {
        pair = pair.with_gamma_b(gamma_b_for_linewidth(pair, d));
        params["gamma_b"] = pair.gamma_b;
    }
    const double df = feshbach_detuning(pair);

    SweepConfig echo = cfg;
    echo.parameters = params;
    echo.start = df - 5.0 * d;
    echo.stop = df + 5.0 * d;
    SweepResult res;
    detail::echo_config(echo, res);

    double worst = 0.0;
    for (double x : linspace(echo.start, echo.stop, cfg.count)) {
        const ScatteringPoint p = scatter_quadratic(pair, x);
        const double f = fano_profile(x, df, q, d);
        worst = std::max(worst, std::abs(p.T - f));
        res.rows.push_back(detail::project(p, pair.gamma_b, df, f));
    }
    res.annotations = {{"delta_F", df},
                       {"gamma_b", pair.gamma_b},
                       {"linewidth", feshbach_linewidth(pair)},
                       {"q", q},
                       {"d", d},
                       {"max_abs_T_minus_f", worst}};
    detail::select_columns(res, {"delta", "T", "f", "limit_flag"}, cfg.outputs);
    return res;
}

[[nodiscard]] inline SweepResult run_sweep(const SweepConfig& cfg) {
    validate(cfg);
    if (cfg.study == Study::fano) return run_fano_compare(cfg);

    SweepResult res;
    detail::echo_config(cfg, res);
    const auto grid = linspace(cfg.start, cfg.stop, cfg.count);
    const auto& p = cfg.parameters;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> available;

    if (cfg.model == Model::linear) {
        const double gamma_a = detail::get_or(p, "gamma_a", 0.01);
        const double gamma_b = detail::get_or(p, "gamma_b", 0.0);
        const double va1 = detail::get_or(p, "va1", 1.0);
        const double fixed = detail::get_or(p, "detuning", 0.0);
        for (double x : grid) {
            ScatteringPoint sp;
            double gb = gamma_b;
            switch (cfg.axis) {
                case Axis::k: sp = scatter_linear_by_k(gamma_a, gamma_b, va1, x); break;
                case Axis::detuning:
                    sp = scatter_linear(gamma_a, gamma_b, x);
                    sp.k = x / va1;
                    break;
                case Axis::gamma_b:
                    gb = x;
                    sp = scatter_linear(gamma_a, x, fixed);
                    sp.k = fixed / va1;
                    break;
            }
            res.rows.push_back(detail::project(sp, gb, nan, nan));
        }
        available = {"k", "delta", "gamma_b", "re_r", "im_r", "re_t", "im_t", "R", "T", "P_loss", "limit_flag"};
        const bool on_k = cfg.axis == Axis::k;
        const bool on_d = cfg.axis == Axis::detuning;
        if (on_k || on_d) detail::annotate_if(res, on_k ? "k_res" : "delta_res", 0.0, true, cfg.start, cfg.stop);
        detail::select_columns(res, available, cfg.outputs);
        return res;
    }

    const ChannelPair base = channels_from_parameters(p);
    if (cfg.axis == Axis::gamma_b) {
        const double fixed = detail::get_or(p, "detuning", 0.0);
        for (double gb : grid) {
            const ChannelPair pair = base.with_gamma_b(gb);
            const double df = gb > 0.0 ? feshbach_detuning(pair) : pair.b.detuning_min();
            ScatteringPoint sp = fixed < base.a.detuning_min() ? detail::below_band_point(nan, fixed)
                                                                : scatter_quadratic(pair, fixed);
            res.rows.push_back(detail::project(sp, gb, df, nan));
        }
        available = {"k", "delta", "gamma_b", "re_r", "im_r", "re_t", "im_t", "R", "T", "P_loss", "delta_F", "limit_flag"};
        res.annotations.emplace_back("delta_max_F", base.b.detuning_min());
        res.annotations.emplace_back("delta_min", base.a.detuning_min());
        detail::select_columns(res, available, cfg.outputs);
        return res;
    }

    const double va1 = std::abs(base.a.v1());
    for (double x : grid) {
        ScatteringPoint sp;
        if (cfg.axis == Axis::k) {
            sp = scatter_quadratic_by_k(base, x);
        } else if (va1 * va1 + 4.0 * base.a.v2() * x < -1e-14 * va1 * va1) {
            sp = detail::below_band_point(nan, x);
        } else {
            sp = scatter_quadratic(base, x);
        }
        res.rows.push_back(detail::project(sp, base.gamma_b, nan, nan));
    }
    available = {"k", "delta", "re_r", "im_r", "re_t", "im_t", "R", "T", "P_loss", "limit_flag"};

    const ResonanceSet rs = find_resonances(base);
    const bool on_k = cfg.axis == Axis::k;
    const bool on_d = cfg.axis == Axis::detuning;
    detail::annotate_if(res, "delta_min", rs.delta_min, on_d, cfg.start, cfg.stop);
    detail::annotate_if(res, "delta_max_F", rs.delta_max_F, on_d, cfg.start, cfg.stop);
    if (rs.delta_F) detail::annotate_if(res, "delta_F", *rs.delta_F, on_d, cfg.start, cfg.stop);
    detail::annotate_if(res, "k_C", rs.k_C, on_k, cfg.start, cfg.stop);
    if (rs.k_F) {
        detail::annotate_if(res, "k_F_plus", rs.k_F->first, on_k, cfg.start, cfg.stop);
        detail::annotate_if(res, "k_F_minus", rs.k_F->second, on_k, cfg.start, cfg.stop);
    }
    for (std::size_t i = 0; i < rs.k_res.size(); ++i)
        detail::annotate_if(res, "k_res_" + std::to_string(i + 1), rs.k_res[i], on_k, cfg.start, cfg.stop);
    detail::select_columns(res, available, cfg.outputs);
    return res;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// Parameters shared by every preset: gamma_a = 0.01, delta = 0.8,
/// va1 = 1, all in units of omega0 = 1.
[[nodiscard]] inline std::map<std::string, double> shared_parameters() {
    return {{"omega0", 1.0}, {"delta", 0.8}, {"va1", 1.0}, {"gamma_a", 0.01}};
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig2a", "fig2b", "fig3a", "fig3b", "fig3c",
                                                   "fig4a", "fig4b", "fig5",  "fig6a", "fig6b"};
    return names;
}

[[nodiscard]] inline SweepConfig preset(const std::string& name) {
    SweepConfig cfg;
    cfg.parameters = shared_parameters();
    if (name == "fig2a") {
        cfg.model = Model::linear;
        cfg.axis = Axis::detuning;
        cfg.start = -0.1;
        cfg.stop = 0.1;
        cfg.count = 2001;
        cfg.parameters["gamma_b"] = 0.01;
    } else if (name == "fig2b") {
        cfg.model = Model::linear;
        cfg.axis = Axis::gamma_b;
        cfg.start = 0.0;
        cfg.stop = 0.1;
        cfg.count = 1001;
        cfg.parameters["detuning"] = 0.0;
    } else if (name == "fig3a" || name == "fig3b" || name == "fig3c") {
        cfg.model = Model::quadratic;
        cfg.axis = Axis::k;
        cfg.start = -4.5;
        cfg.stop = 0.6;
        cfg.count = 2000;
        cfg.parameters["gamma_b"] = name == "fig3a" ? 0.0 : (name == "fig3b" ? 0.05 : 0.15);
    } else if (name == "fig4a" || name == "fig4b") {
        cfg.model = Model::quadratic;
        cfg.axis = Axis::detuning;
        cfg.parameters["gamma_b"] = 0.05;
        cfg.start = channels_from_parameters(cfg.parameters).a.detuning_min();
        cfg.stop = 0.5;
        cfg.count = 2000;
        cfg.outputs = name == "fig4a" ? std::vector<std::string>{"delta", "T"} : std::vector<std::string>{"delta", "P_loss"};
    } else if (name == "fig5") {
        cfg.model = Model::quadratic;
        cfg.axis = Axis::gamma_b;
        cfg.start = 0.005;
        cfg.stop = 0.2;
        cfg.count = 50;
        cfg.outputs = {"gamma_b", "delta_F"};
    } else if (name == "fig6a" || name == "fig6b") {
        cfg.model = Model::quadratic;
        cfg.axis = Axis::detuning;
        cfg.study = Study::fano;
        cfg.start = 0.0;
        cfg.stop = 0.0;
        cfg.count = 2001;
        cfg.parameters["q"] = 1e-4;
        cfg.parameters["d"] = name == "fig6a" ? 1e-3 : std::pow(10.0, -2.5);
    } else {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
    return cfg;
}

}  // namespace wgqed
