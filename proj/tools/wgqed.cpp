// wgqed - command-line front end for the waveguide scattering library.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <wgqed/wgqed.hpp>

namespace {

using namespace wgqed;

struct CommonOptions {
    std::string config;
    std::string preset_name;
    std::string format;
    std::string out;
    std::optional<int> points;
    std::vector<std::string> sets;
};

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--preset", o.preset_name, "named preset")->check(CLI::IsMember(preset_names()));
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "output file (default: standard output)");
    sub->add_option("--points", o.points, "grid size");
    sub->add_option("--set", o.sets, "parameter override key=value")->allow_extra_args(false);
}

// Preset, then config file, then --set and the remaining flags.
SweepConfig assemble(const CommonOptions& o, const std::string& fallback_preset = {}) {
    SweepConfig cfg;
    if (!o.preset_name.empty()) cfg = preset(o.preset_name);
    else if (!fallback_preset.empty()) cfg = preset(fallback_preset);
    if (!o.config.empty()) cfg = load_config_file(o.config, cfg);
    for (const auto& s : o.sets) apply_override(cfg, s);
    if (o.points) cfg.count = *o.points;
    if (!o.format.empty()) cfg.format = parse_format(o.format);
    return cfg;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("out", "cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

// Key/value records for the summary subcommands.
struct Record {
    std::string key;
    double value;
};

void write_records(std::ostream& os, const std::vector<Record>& recs, Format fmt) {
    if (fmt == Format::csv) {
        os << "name,value\n";
        for (const auto& r : recs) os << r.key << ',' << format_double(r.value) << '\n';
        return;
    }
    ojson j = ojson::object();
    for (const auto& r : recs) j[r.key] = detail::number_or_null(r.value);
    os << j.dump(2) << '\n';
}

int cmd_sweep(const CommonOptions& o, const std::string& fallback, Study study) {
    SweepConfig cfg = assemble(o, fallback);
    if (study == Study::fano) cfg.study = Study::fano;
    const SweepResult res = run_sweep(cfg);
    Output out(o.out);
    write_result(out.stream(), res, cfg.format);
    return 0;
}

int cmd_resonances(const CommonOptions& o) {
    const SweepConfig cfg = assemble(o);
    const ChannelPair pair = channels_from_parameters(cfg.parameters);
    const ResonanceSet rs = find_resonances(pair);
    std::vector<Record> recs = {{"delta_min", rs.delta_min}, {"delta_max_F", rs.delta_max_F}, {"k_C", rs.k_C}};
    for (std::size_t i = 0; i < rs.k_res.size(); ++i) recs.push_back({"k_res_" + std::to_string(i + 1), rs.k_res[i]});
    if (rs.delta_F) recs.push_back({"delta_F", *rs.delta_F});
    if (rs.k_F) {
        recs.push_back({"k_F_plus", rs.k_F->first});
        recs.push_back({"k_F_minus", rs.k_F->second});
    }
    if (rs.delta_F) recs.push_back({"feshbach_outside_a_band", rs.feshbach_outside_a_band ? 1.0 : 0.0});
    Output out(o.out);
    write_records(out.stream(), recs, cfg.format);
    return 0;
}

int cmd_bound_states(const CommonOptions& o) {
    const SweepConfig cfg = assemble(o);
    const ChannelPair pair = channels_from_parameters(cfg.parameters);
    if (!(pair.gamma_b > 0.0)) throw ConfigError("gamma_b", "bound states need a positive gamma_b");
    const double vb1 = std::abs(pair.b.v1());
    const auto cf = bound_state_closed_form(vb1, pair.b.v2(), pair.gamma_b, pair.omega0());
    const auto nm = bound_state_numeric(vb1, pair.b.v2(), pair.gamma_b, pair.omega0());
    const std::vector<Record> recs = {
        {"E_bound", cf.E_bound},
        {"delta_F", cf.delta_F},
        {"delta_max_F", cf.delta_max_F},
        {"binding_depth", cf.binding_depth},
        {"quasibound_1_re", cf.quasibound[0].real()},
        {"quasibound_1_im", cf.quasibound[0].imag()},
        {"quasibound_2_re", cf.quasibound[1].real()},
        {"quasibound_2_im", cf.quasibound[1].imag()},
        {"residual", cf.residual},
        {"numeric_E_bound", nm.E_bound},
        {"numeric_residual", nm.residual},
        {"linear_pole_re", linear_bound_state(pair.gamma_b, pair.omega0()).real()},
        {"linear_pole_im", linear_bound_state(pair.gamma_b, pair.omega0()).imag()},
    };
    Output out(o.out);
    write_records(out.stream(), recs, cfg.format);
    return 0;
}

int cmd_critical_size(const CommonOptions& o, const std::vector<double>& omegas) {
    const SweepConfig cfg = assemble(o);
    std::vector<double> list = omegas;
    if (auto it = cfg.parameters.find("omega0"); it != cfg.parameters.end()) list.push_back(it->second);
    if (list.empty()) list = {1e10, 2.21e15, 3.48e18};
    Output out(o.out);
    std::ostream& os = out.stream();
    if (cfg.format == Format::csv) {
        os << "omega0,L_c\n";
        for (double w : list) os << format_double(w) << ',' << format_double(critical_size(w)) << '\n';
    } else {
        ojson rows = ojson::array();
        for (double w : list) rows.push_back({{"omega0", w}, {"L_c", critical_size(w)}});
        os << rows.dump(2) << '\n';
    }
    return 0;
}

int cmd_verify(const CommonOptions& o) {
    const SweepConfig cfg = assemble(o);
    const VerifyReport rep = verify(cfg.parameters);
    Output out(o.out);
    std::ostream& os = out.stream();
    if (cfg.format == Format::csv) {
        os << "check,status,measured,threshold,detail\n";
        for (const auto& c : rep.checks)
            os << c.name << ',' << (c.passed ? "pass" : "fail") << ',' << format_double(c.measured) << ','
               << format_double(c.threshold) << ",\"" << c.detail << "\"\n";
    } else {
        ojson arr = ojson::array();
        for (const auto& c : rep.checks)
            arr.push_back({{"check", c.name},
                           {"status", c.passed ? "pass" : "fail"},
                           {"measured", c.measured},
                           {"threshold", c.threshold},
                           {"detail", c.detail}});
        os << ojson{{"passed", rep.all_passed()}, {"checks", arr}}.dump(2) << '\n';
    }
    return rep.all_passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-photon scattering in a two-mode rectangular waveguide"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::vector<double> omegas;
    auto* sweep = app.add_subcommand("sweep", "evaluate R, T and loss over a k, detuning or gamma_b grid");
    auto* res = app.add_subcommand("resonances", "locate cutoff, single-photon and Feshbach resonances");
    auto* bound = app.add_subcommand("bound-states", "bound and quasibound states of the b channel");
    auto* curve = app.add_subcommand("feshbach-curve", "Feshbach detuning as a function of gamma_b");
    auto* fano = app.add_subcommand("fano-compare", "transmission vs Fano function near the Feshbach dip");
    auto* crit = app.add_subcommand("critical-size", "critical waveguide size for given transition frequencies");
    auto* check = app.add_subcommand("verify", "run the invariant checks");
    for (auto* s : {sweep, res, bound, curve, fano, crit, check}) add_common(s, opts);
    crit->add_option("omega0", omegas, "transition angular frequencies in rad/s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*sweep) return cmd_sweep(opts, {}, Study::scan);
        if (*res) return cmd_resonances(opts);
        if (*bound) return cmd_bound_states(opts);
        if (*curve) return cmd_sweep(opts, "fig5", Study::scan);
        if (*fano) return cmd_sweep(opts, "fig6a", Study::fano);
        if (*crit) return cmd_critical_size(opts, omegas);
        if (*check) return cmd_verify(opts);
    } catch (const ConfigError& e) {
        std::cerr << "error: invalid input: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid input: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
