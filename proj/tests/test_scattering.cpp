#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <wgqed/scattering.hpp>

using namespace wgqed;

namespace {

ChannelPair p0(double gamma_b) {
    auto [a, b] = channels_from_delta(DeltaForm{});
    return {a, b, 0.01, gamma_b};
}

ChannelPair random_pair(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> delta(0.72, 0.98), va1(0.3, 3.0), lg(-3.0, -0.5);
    DeltaForm f;
    f.delta = delta(rng);
    f.va1 = va1(rng);
    auto [a, b] = channels_from_delta(f);
    return {a, b, std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng))};
}

}  // namespace

TEST(Linear, LossPeaksAtEqualRates) {
    const auto p = scatter_linear(0.02, 0.02, 0.0);
    EXPECT_NEAR(p.P_loss, 0.5, 1e-12);
    EXPECT_NEAR(p.T, 0.25, 1e-12);
    EXPECT_NEAR(p.R, 0.25, 1e-12);
    EXPECT_NEAR(std::abs(p.t - (1.0 + p.r)), 0.0, 1e-16);
}

TEST(Linear, TransmissionFormula) {
    for (double d : {-0.1, 0.0, 0.03}) {
        for (double gb : {0.0, 0.01, 0.07}) {
            const auto p = scatter_linear(0.01, gb, d);
            EXPECT_NEAR(p.T, (d * d + gb * gb) / (d * d + (0.01 + gb) * (0.01 + gb)), 1e-15);
            EXPECT_NEAR(p.R + p.T + p.P_loss, 1.0, 1e-15);
        }
    }
    EXPECT_NEAR(scatter_linear_by_k(0.01, 0.0, 2.0, 0.0).T, 0.0, 1e-15);
    EXPECT_THROW((void)scatter_linear(0.0, 0.1, 0.0), std::invalid_argument);
    EXPECT_THROW((void)scatter_linear(0.1, -0.1, 0.0), std::invalid_argument);
}

TEST(Quadratic, OnResonanceMatchesLinear) {
    const auto q = scatter_quadratic(p0(0.05), 0.0);
    EXPECT_NEAR(q.r.real(), -1.0 / 6.0, 1e-15);
    EXPECT_NEAR(q.r.imag(), 0.0, 1e-15);
    EXPECT_NEAR(q.T, 25.0 / 36.0, 1e-14);
    EXPECT_NEAR(q.R, 1.0 / 36.0, 1e-14);
    EXPECT_NEAR(q.P_loss, 10.0 / 36.0, 1e-14);
    EXPECT_EQ(q.limit, LimitFlag::none);
}

TEST(Quadratic, CutoffResonanceAtBandMinimum) {
    const auto pair = p0(0.05);
    const auto p = scatter_quadratic(pair, pair.a.detuning_min());
    EXPECT_EQ(p.limit, LimitFlag::cutoff_resonance);
    EXPECT_EQ(p.r, cplx(-1.0));
    EXPECT_EQ(p.T, 0.0);
    EXPECT_NEAR(p.k, -1.777777777777778, 1e-12);
    // Approaching from above the reflection tends to -1.
    EXPECT_LT(scatter_quadratic(pair, pair.a.detuning_min() + 1e-10).T, 1e-6);
    EXPECT_THROW((void)scatter_quadratic(pair, -1.0), std::domain_error);
    EXPECT_EQ(scatter_quadratic_by_k(pair, pair.a.k_vertex()).limit, LimitFlag::cutoff_resonance);
}

TEST(Quadratic, BranchPointOfBChannel) {
    const auto pair = p0(0.05);
    const auto p = scatter_quadratic(pair, pair.b.detuning_min());
    EXPECT_EQ(p.limit, LimitFlag::b_branch_point);
    EXPECT_EQ(p.T, 1.0);
    EXPECT_LT(scatter_quadratic(pair, pair.b.detuning_min() + 1e-9).P_loss, 1e-3);
    EXPECT_EQ(scatter_quadratic(p0(0.0), p0(0.0).b.detuning_min()).limit, LimitFlag::none);
}

TEST(Quadratic, SingleChannelResonances) {
    const auto pair = p0(0.0);
    const auto rs = find_resonances(pair);
    ASSERT_EQ(rs.k_res.size(), 2u);
    EXPECT_EQ(rs.k_res[0], 0.0);
    EXPECT_NEAR(rs.k_res[1], -3.555555555555556, 1e-12);
    for (double k : rs.k_res) EXPECT_LT(std::abs(scatter_quadratic_by_k(pair, k).t), 1e-12);
    EXPECT_FALSE(rs.delta_F.has_value());
}

TEST(Quadratic, FeshbachCompleteReflection) {
    const auto pair = p0(0.05);
    const auto rs = find_resonances(pair);
    ASSERT_TRUE(rs.delta_F && rs.k_F);
    EXPECT_NEAR(*rs.delta_F, -0.205909657166078, 1e-13);
    EXPECT_NEAR(rs.k_F->first, -0.2194547683599275, 1e-12);
    EXPECT_NEAR(rs.k_F->second, -3.336100787195628, 1e-12);
    EXPECT_LT(std::abs(scatter_quadratic(pair, *rs.delta_F).t), 1e-9);
    EXPECT_LT(std::abs(scatter_quadratic_by_k(pair, rs.k_F->first).t), 1e-9);
    EXPECT_LT(std::abs(scatter_quadratic_by_k(pair, rs.k_F->second).t), 1e-9);
}

TEST(Quadratic, FeshbachOutsideBandIsReported) {
    // Strong b coupling pushes the bound state below the a band.
    const auto rs = find_resonances(p0(3.0));
    ASSERT_TRUE(rs.delta_F);
    EXPECT_TRUE(rs.feshbach_outside_a_band);
    EXPECT_FALSE(rs.k_F);
}

TEST(Quadratic, PropertiesOnRandomParameters) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pair = random_pair(rng);
        const double dmin = pair.a.detuning_min();
        const double dmax = pair.b.detuning_min();
        std::uniform_real_distribution<double> below(dmin, dmax), above(dmax, 5.0);
        for (int i = 0; i < 200; ++i) {
            const auto lo = scatter_quadratic(pair, below(rng));
            EXPECT_EQ(lo.t, 1.0 + lo.r);
            EXPECT_NEAR(lo.R + lo.T, 1.0, 1e-12);
            const auto hi = scatter_quadratic(pair, above(rng));
            EXPECT_EQ(hi.t, 1.0 + hi.r);
            EXPECT_GE(hi.P_loss, -1e-12);
            EXPECT_LE(hi.R, 1.0 + 1e-12);
        }
        const auto at0 = scatter_quadratic(pair, 0.0);
        const auto lin = scatter_linear(pair.gamma_a, pair.gamma_b, 0.0);
        EXPECT_NEAR(std::abs(at0.r - lin.r), 0.0, 1e-12);
    }
}

TEST(Quadratic, KFormAgreesWithDetuningForm) {
    const auto pair = p0(0.05);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> kd(-5.0, 1.5);
    for (int i = 0; i < 2000; ++i) {
        const double k = kd(rng);
        if (std::abs(k - pair.a.k_vertex()) < 0.05) continue;
        const auto pk = scatter_quadratic_by_k(pair, k);
        const auto pd = scatter_quadratic(pair, detuning_of_k(pair.a, k));
        EXPECT_NEAR(std::abs(pk.r - pd.r), 0.0, 1e-11) << k;
    }
}

TEST(Quadratic, BatchFlagsPointsBelowBand) {
    const auto pair = p0(0.05);
    const std::vector<double> grid = {-2.0, -0.5, 0.0};
    const auto out = scatter_quadratic_batch(pair, grid);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].limit, LimitFlag::below_band);
    EXPECT_TRUE(std::isnan(out[0].T));
    EXPECT_NEAR(out[2].T, 25.0 / 36.0, 1e-14);
}

TEST(Excitation, ReflectionIsProportionalToAmplitude) {
    const auto pair = p0(0.05);
    for (double d : {-0.5, -0.1, 0.2}) {
        const cplx beta = excitation_amplitude(pair, d);
        const double g1 = coupling_of_rate(pair.gamma_a, pair.a.v1());
        const double root = std::sqrt(pair.a.v1() * pair.a.v1() + 4.0 * pair.a.v2() * d);
        const cplx r = cplx(0.0, -2.0 * std::numbers::pi * g1) * beta / root;
        EXPECT_NEAR(std::abs(r - scatter_quadratic(pair, d).r), 0.0, 1e-13);
    }
    EXPECT_THROW((void)excitation_amplitude(p0(0.0), 0.1, Channel::b), std::domain_error);
    EXPECT_NO_THROW((void)excitation_amplitude(pair, 0.1, Channel::b));
}

TEST(Fano, ProfileShape) {
    EXPECT_EQ(fano_profile(0.3, 0.5, 0.2, 0.1), 0.0);
    EXPECT_NEAR(fano_profile(1e6, 0.0, 1e-4, 1e-3), 1.0, 1e-9);
    EXPECT_THROW((void)fano_profile(0.0, 0.0, 0.1, 0.0), std::invalid_argument);
}

TEST(Fano, FeshbachLinewidth) {
    EXPECT_NEAR(feshbach_linewidth(p0(0.05)), 0.00114314153995445655, 1e-15);
    EXPECT_NEAR(feshbach_linewidth(p0(0.1)), 0.00278995928874496925, 1e-15);
    const double gb = gamma_b_for_linewidth(p0(0.0), 1e-3);
    EXPECT_NEAR(feshbach_linewidth(p0(gb)), 1e-3, 1e-12);
    EXPECT_THROW((void)gamma_b_for_linewidth(p0(0.0), 10.0), std::domain_error);
}
