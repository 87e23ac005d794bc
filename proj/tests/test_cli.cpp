#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(WGQED_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, SweepPresetWritesCsv) {
    const auto r = run("sweep --preset fig3a --points 50");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("# model=quadratic"), std::string::npos);
    EXPECT_NE(r.out.find("k,delta,re_r"), std::string::npos);
}

TEST(Cli, ByteIdenticalOutput) {
    const auto a = run("sweep --preset fig4b --format json");
    const auto b = run("sweep --preset fig4b --format json");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, FlagsOverrideConfigFile) {
    const std::string path = "cli_override.json";
    {
        std::ofstream f(path);
        f << R"({"model":"linear","axis":"detuning","start":-0.1,"stop":0.1,"count":5,"gamma_b":0.01})";
    }
    const auto r = run("sweep --config " + path + " --set gamma_b=0.02 --points 7");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("# gamma_b=0.02\n"), std::string::npos);
    EXPECT_NE(r.out.find("# count=7\n"), std::string::npos);
    std::remove(path.c_str());
}

TEST(Cli, OutFile) {
    const std::string path = "cli_out.csv";
    EXPECT_EQ(run("critical-size --out " + path).code, 0);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_NE(ss.str().find("omega0,L_c"), std::string::npos);
    std::remove(path.c_str());
}

TEST(Cli, InvalidInputExitsWithOne) {
    EXPECT_EQ(run("sweep --set count=1").code, 1);
    EXPECT_EQ(run("sweep --set bogus=3").code, 1);
    EXPECT_EQ(run("sweep --preset nope").code, 1);
    EXPECT_EQ(run("sweep --config /nonexistent.json").code, 1);
    EXPECT_EQ(run("bound-states").code, 1);
    EXPECT_EQ(run("").code, 1);
}

TEST(Cli, SummarySubcommands) {
    const auto res = run("resonances --set gamma_b=0.05");
    EXPECT_EQ(res.code, 0);
    EXPECT_NE(res.out.find("delta_F,-0.2059096571660"), std::string::npos);
    const auto bs = run("bound-states --set gamma_b=0.05 --format json");
    EXPECT_EQ(bs.code, 0);
    EXPECT_NE(bs.out.find("\"E_bound\": 0.79409034283"), std::string::npos);
    EXPECT_EQ(run("feshbach-curve --points 10").code, 0);
    EXPECT_EQ(run("fano-compare --preset fig6b --points 11").code, 0);
}

TEST(Cli, VerifyPassesForDefaultParameters) {
    const auto r = run("verify --set gamma_b=0.05");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("unitarity_below_threshold,pass"), std::string::npos);
    EXPECT_NE(r.out.find("sigma_oracle,pass"), std::string::npos);
    EXPECT_NE(r.out.find("bound_state_residual,pass"), std::string::npos);
    EXPECT_EQ(r.out.find(",fail,"), std::string::npos);
}
