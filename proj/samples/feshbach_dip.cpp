// Prints the transmission around the Feshbach dip for the default channel pair.

#include <cstdio>

#include <wgqed/wgqed.hpp>

int main() {
    using namespace wgqed;
    auto [a, b] = channels_from_delta(DeltaForm{});
    const ChannelPair pair(a, b, 0.01, 0.05);

    const ResonanceSet rs = find_resonances(pair);
    std::printf("delta_min   = %.9f\n", rs.delta_min);
    std::printf("delta_max_F = %.9f\n", rs.delta_max_F);
    std::printf("delta_F     = %.9f\n", *rs.delta_F);

    for (double x : linspace(*rs.delta_F - 0.01, *rs.delta_F + 0.01, 11)) {
        const ScatteringPoint p = scatter_quadratic(pair, x);
        std::printf("%+.6f  T=%.6f  R=%.6f  loss=%.2e\n", x, p.T, p.R, p.P_loss);
    }
}
