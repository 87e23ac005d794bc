#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include <wgqed/sweep.hpp>
#include <wgqed/sweep_io.hpp>

using namespace wgqed;

namespace {

std::string csv_of(const SweepResult& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

std::size_t column(const SweepResult& r, const std::string& name) {
    for (std::size_t j = 0; j < r.columns.size(); ++j)
        if (r.columns[j] == name) return j;
    throw std::out_of_range(name);
}

}  // namespace

TEST(Config, RejectsDegenerateRange) {
    SweepConfig cfg;
    cfg.start = cfg.stop = 0.1;
    try {
        validate(cfg);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "range");
    }
}

TEST(Config, NamesOffendingField) {
    SweepConfig cfg;
    cfg.count = 1;
    EXPECT_THROW(validate(cfg), ConfigError);
    cfg = SweepConfig{};
    cfg.parameters["gamma_a"] = std::nan("");
    try {
        validate(cfg);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "gamma_a");
    }
    cfg = SweepConfig{};
    cfg.parameters["va2"] = 0.3;
    try {
        validate(cfg);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "vb1");
    }
    cfg = SweepConfig{};
    cfg.outputs = {"nonsense"};
    EXPECT_THROW(validate(cfg), ConfigError);
    EXPECT_THROW(apply_override(cfg, "unknown=1"), ConfigError);
    EXPECT_THROW(apply_override(cfg, "gamma_b=abc"), ConfigError);
    EXPECT_THROW(apply_override(cfg, "noequals"), ConfigError);
}

TEST(Config, ExplicitCoefficientsOverrideDeltaForm) {
    const auto pair = channels_from_parameters({{"va2", 0.5}, {"vb1", 0.7}, {"gamma_b", 0.02}});
    EXPECT_EQ(pair.a.v2(), 0.5);
    EXPECT_EQ(pair.b.v1(), 0.7);
    EXPECT_EQ(pair.b.v2(), 1.0);
    EXPECT_EQ(pair.gamma_b, 0.02);
}

TEST(Config, JsonOverlay) {
    SweepConfig cfg;
    apply_json_config(cfg, ojson::parse(R"({"model":"linear","axis":"detuning","start":-1,"stop":1,"count":11,
                                            "parameters":{"gamma_b":0.03},"outputs":["delta","T"]})"));
    EXPECT_EQ(cfg.model, Model::linear);
    EXPECT_EQ(cfg.axis, Axis::detuning);
    EXPECT_EQ(cfg.count, 11);
    EXPECT_EQ(cfg.parameters.at("gamma_b"), 0.03);
    EXPECT_THROW(apply_json_config(cfg, ojson::parse(R"({"count": 2.5})")), ConfigError);
    EXPECT_THROW(apply_json_config(cfg, ojson::parse(R"({"gamma_b": "x"})")), ConfigError);
    EXPECT_THROW(apply_json_config(cfg, ojson::parse("[1,2]")), ConfigError);
}

TEST(Sweep, RowCountMatchesRequest) {
    for (const auto& name : preset_names()) {
        SweepConfig cfg = preset(name);
        cfg.count = 101;
        const auto res = run_sweep(cfg);
        EXPECT_EQ(res.rows.size(), 101u) << name;
        for (const auto& row : res.rows) EXPECT_EQ(row.size(), res.columns.size());
    }
}

TEST(Sweep, LinearCouplingAxisPassesQuarterPoint) {
    const auto res = run_sweep(preset("fig2b"));
    const std::size_t gb = column(res, "gamma_b"), T = column(res, "T");
    bool seen = false;
    for (const auto& row : res.rows) {
        if (std::abs(row[gb] - 0.01) < 1e-12) {
            EXPECT_NEAR(row[T], 0.25, 1e-12);
            seen = true;
        }
    }
    EXPECT_TRUE(seen);
}

TEST(Sweep, SingleChannelZerosOnWaveVectorGrid) {
    const auto res = run_sweep(preset("fig3a"));
    auto eval = [pair = channels_from_parameters(preset("fig3a").parameters)](double k) {
        return scatter_quadratic_by_k(pair, k).t;
    };
    const auto zeros = locate_transmission_zeros(eval, linspace(-4.5, 0.6, 2000));
    ASSERT_EQ(zeros.size(), 3u);
    EXPECT_NEAR(zeros[0].k, -3.555556, 1e-6);
    EXPECT_NEAR(zeros[1].k, -1.777778, 1e-6);
    EXPECT_NEAR(zeros[2].k, 0.0, 1e-6);
    bool found_kc = false;
    for (const auto& [name, v] : res.annotations) found_kc |= name == "k_C";
    EXPECT_TRUE(found_kc);
}

TEST(Sweep, BelowBandRowsAreFlaggedNotDropped) {
    SweepConfig cfg;
    cfg.axis = Axis::detuning;
    cfg.start = -1.5;
    cfg.stop = 0.5;
    cfg.count = 201;
    const auto res = run_sweep(cfg);
    ASSERT_EQ(res.rows.size(), 201u);
    const std::size_t flag = column(res, "limit_flag"), T = column(res, "T");
    EXPECT_EQ(res.rows.front()[flag], 3.0);
    EXPECT_TRUE(std::isnan(res.rows.front()[T]));
    EXPECT_EQ(res.rows.back()[flag], 0.0);
    for (const auto& row : res.rows)
        if (row[flag] == 0.0) {
            EXPECT_TRUE(std::isfinite(row[T]));
        }
}

TEST(Sweep, FeshbachCurveIsDecreasing) {
    const auto res = run_sweep(preset("fig5"));
    ASSERT_EQ(res.columns, (std::vector<std::string>{"gamma_b", "delta_F", "limit_flag"}));
    for (std::size_t i = 1; i < res.rows.size(); ++i) EXPECT_LT(res.rows[i][1], res.rows[i - 1][1]);
    EXPECT_LT(res.rows.front()[1], -0.194444444444444);
}

TEST(Sweep, FanoStudyEmitsTransmissionAndProfile) {
    const auto res = run_sweep(preset("fig6b"));
    EXPECT_EQ(res.columns, (std::vector<std::string>{"delta", "T", "f", "limit_flag"}));
    double worst = -1.0;
    for (const auto& [name, v] : res.annotations)
        if (name == "max_abs_T_minus_f") worst = v;
    EXPECT_GE(worst, 0.0);
    EXPECT_LT(worst, 0.05);
}

TEST(Output, CsvIsDeterministic) {
    SweepConfig cfg = preset("fig3b");
    EXPECT_EQ(csv_of(run_sweep(cfg)), csv_of(run_sweep(cfg)));
}

TEST(Output, CsvHeaderEchoesParameters) {
    SweepConfig cfg = preset("fig3b");
    cfg.count = 3;
    const std::string text = csv_of(run_sweep(cfg));
    EXPECT_NE(text.find("# model=quadratic\n"), std::string::npos);
    EXPECT_NE(text.find("# gamma_b=0.050000000000000003\n"), std::string::npos);
    EXPECT_NE(text.find("\nk,delta,re_r,im_r,re_t,im_t,R,T,P_loss,limit_flag\n"), std::string::npos);
    EXPECT_NE(text.find("# annotation:k_F_plus="), std::string::npos);
}

TEST(Output, JsonRoundTrip) {
    for (const char* name : {"fig3b", "fig4a", "fig5", "fig6a"}) {
        SweepConfig cfg = preset(name);
        cfg.count = 64;
        const auto res = run_sweep(cfg);
        const auto back = result_from_json(ojson::parse(to_json(res).dump()));
        EXPECT_TRUE(same_result(res, back)) << name;
    }
    SweepConfig cfg;
    cfg.axis = Axis::detuning;
    cfg.start = -2.0;
    cfg.stop = 0.0;
    cfg.count = 5;
    const auto res = run_sweep(cfg);
    EXPECT_TRUE(same_result(res, result_from_json(ojson::parse(to_json(res).dump()))));
}

TEST(Performance, TenThousandPointQuadraticSweep) {
    SweepConfig cfg = preset("fig3b");
    cfg.count = 10000;
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_sweep(cfg);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_EQ(res.rows.size(), 10000u);
    EXPECT_LT(s, 1.0);
}
