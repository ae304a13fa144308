// Screen a simulated AR(1) series the way one would screen an observed one.
#include <cmath>
#include <cstdio>

#include "mkgauss/mkgauss.hpp"

int main() {
    const mkg::Ar1Params params{0.5, 20};
    const auto series = mkg::gen_ar1(params, 42);

    const auto t = mkg::tau_fast(series);
    const auto var = mkg::var_tau_exact(mkg::AcfSpec::ar1(params.k), params.n);
    std::printf("tau = %.4f  Var(tau) = %.6f  normalized = %.4f\n", t.tau, var.variance,
                t.tau / std::sqrt(var.variance));

    const auto decision = mkg::decide_ar1(params.k, params.n);
    std::printf("k_tot = %.3g (threshold %.0e): %s\n", decision.scaling_value, decision.threshold,
                mkg::to_string(decision.verdict).c_str());
}
