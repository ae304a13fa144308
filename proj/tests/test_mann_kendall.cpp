#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "mkgauss/mann_kendall.hpp"
#include "support.hpp"

using Catch::Approx;
using namespace mkg;

namespace {

double iid_closed_form(std::size_t n) {
    const double m = static_cast<double>(n);
    return 2.0 * (2.0 * m + 5.0) / (9.0 * m * (m - 1.0));
}

/// Var(tau) for i.i.d. data by enumerating all n! rank orderings.
double enumerated_iid_variance(std::size_t n) {
    std::vector<double> perm(n);
    std::iota(perm.begin(), perm.end(), 1.0);
    double sum_sq = 0.0, sum = 0.0;
    std::size_t count = 0;
    do {
        long s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) s += perm[j] > perm[i] ? 1 : -1;
        }
        const double t = static_cast<double>(s) / (static_cast<double>(n * (n - 1)) / 2.0);
        sum += t;
        sum_sq += t * t;
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double mean = sum / static_cast<double>(count);
    return sum_sq / static_cast<double>(count) - mean * mean;
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> normal;
    std::vector<double> x(n);
    for (auto& v : x) v = normal(rng);
    return x;
}

}  // namespace

TEST_CASE("tau on small hand-checked series", "[tau]") {
    CHECK(tau(std::vector<double>{1, 2, 3}).tau == 1.0);
    CHECK(tau(std::vector<double>{3, 2, 1}).tau == -1.0);
    CHECK(tau(std::vector<double>{1, 3, 2}).tau == Approx(1.0 / 3.0));
    const auto r = tau(std::vector<double>{2, 1, 4, 3});
    CHECK(r.s == 2);
    CHECK(r.n == 4);
    CHECK(r.n_pairs == 6);
    CHECK(r.tau == Approx(1.0 / 3.0));
    CHECK(tau_fast(std::vector<double>{1, 2, 3}).tau == 1.0);
    CHECK(tau_fast(std::vector<double>{2, 1, 4, 3}).s == 2);
}

TEST_CASE("tau errors", "[tau]") {
    CHECK_THROWS_AS(tau(std::vector<double>{1.0}), SizeError);
    CHECK_THROWS_AS(tau_fast(std::vector<double>{}), SizeError);
    CHECK_THROWS_AS(tau(std::vector<double>{1, 2, 1}), TieError);
    CHECK_THROWS_AS(tau_fast(std::vector<double>{1, 2, 1}), TieError);
    CHECK_THROWS_AS(tau_fast(std::vector<double>{5, 5}), TieError);
}

TEST_CASE("tau_fast equals tau", "[tau][property]") {
    std::mt19937_64 rng(7);
    for (std::size_t n = 2; n <= 12; ++n) {
        for (int rep = 0; rep < 200; ++rep) {
            const auto x = random_series(rng, n);
            CHECK(tau_fast(x).s == tau(x).s);
        }
    }
    std::uniform_int_distribution<std::size_t> len(2, 200);
    for (int rep = 0; rep < 1000; ++rep) {
        const auto x = random_series(rng, len(rng));
        const auto a = tau(x), b = tau_fast(x);
        REQUIRE(a.s == b.s);
        REQUIRE(a.tau == b.tau);
    }
}

TEST_CASE("tau antisymmetry and monotone invariance", "[tau][property]") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 300; ++rep) {
        auto x = random_series(rng, 2 + rep % 60);
        const auto t = tau_fast(x);
        auto rev = x;
        std::reverse(rev.begin(), rev.end());
        CHECK(tau_fast(rev).s == -t.s);
        auto neg = x;
        for (auto& v : neg) v = -v;
        CHECK(tau_fast(neg).s == -t.s);
        auto ex = x, cube = x;
        for (auto& v : ex) v = std::exp(v);
        for (auto& v : cube) v = v * v * v + v;
        CHECK(tau_fast(ex).s == t.s);
        CHECK(tau_fast(cube).s == t.s);
        CHECK(std::abs(t.tau) <= 1.0);
    }
}

TEST_CASE("pair_diff_corr examples", "[variance]") {
    const auto iid = AcfSpec::iid();
    CHECK(pair_diff_corr(iid, 1, 2, 1, 2) == Approx(1.0));
    CHECK(pair_diff_corr(iid, 1, 2, 1, 3) == Approx(0.5));
    CHECK(pair_diff_corr(iid, 1, 2, 2, 3) == Approx(-0.5));
    CHECK(pair_diff_corr(iid, 1, 2, 3, 4) == 0.0);
    CHECK(pair_diff_corr(AcfSpec::ar1(0.5), 0, 3, 0, 3) == Approx(1.0));
}

TEST_CASE("pair_diff_corr degeneracy and clamp violations", "[variance]") {
    CHECK_THROWS_AS(pair_diff_corr(AcfSpec::tabulated({1.0, 1.0, 0.5}), 0, 1, 0, 2), DegeneracyError);
    // Not positive definite: the implied correlation exceeds 1 by far more than the clamp tolerance.
    CHECK_THROWS_AS(pair_diff_corr(AcfSpec::tabulated({1.0, 0.9, -1.0}), 0, 2, 1, 2), NumericError);
    CHECK_THROWS_AS(var_tau_exact(AcfSpec::tabulated({1.0, 1.0, 1.0}), 3), DegeneracyError);
    CHECK_THROWS_AS(var_tau_exact(AcfSpec::tabulated({1.0, 0.9, -1.0}), 3), NumericError);
    CHECK_THROWS_AS(var_tau_exact(AcfSpec::tabulated({1.0, 0.5}), 5), RangeError);
    CHECK_THROWS_AS(var_tau_exact(AcfSpec::iid(), 1), SizeError);
}

TEST_CASE("variance for n = 2 is one", "[variance]") {
    for (const auto& acf : {AcfSpec::iid(), AcfSpec::ar1(0.9), AcfSpec::sma(3)}) {
        CHECK(var_tau_exact(acf, 2).variance == Approx(1.0).margin(1e-15));
        CHECK(var_tau_exact(acf, 2, VarianceMethod::naive_n4).variance == Approx(1.0).margin(1e-15));
    }
}

TEST_CASE("i.i.d. variance: enumeration oracle and closed form", "[variance]") {
    for (std::size_t n = 3; n <= 6; ++n) {
        const double enumerated = enumerated_iid_variance(n);
        CHECK(enumerated == Approx(iid_closed_form(n)).margin(1e-14));
        CHECK(var_tau_exact(AcfSpec::iid(), n).variance == Approx(enumerated).margin(1e-12));
    }
    CHECK(var_tau_exact(AcfSpec::iid(), 4).variance == Approx(13.0 / 54.0).margin(1e-12));
    for (std::size_t n = 3; n <= 50; ++n) {
        INFO("n=" << n);
        CHECK(std::abs(var_tau_exact(AcfSpec::iid(), n).variance - iid_closed_form(n)) < 1e-12);
    }
}

TEST_CASE("stationary and naive variance sums agree", "[variance]") {
    const std::vector<AcfSpec> specs = {AcfSpec::iid(),      AcfSpec::ar1(0.3),      AcfSpec::ar1(0.95),
                                        AcfSpec::sma(2),     AcfSpec::sma(7),        AcfSpec::arma(0.5, 3),
                                        AcfSpec::arma(0.9, 6), AcfSpec::arma(0.0, 4)};
    for (const auto& acf : specs) {
        for (std::size_t n = 2; n <= 15; ++n) {
            const double fast = var_tau_exact(acf, n, VarianceMethod::stationary_n3).variance;
            const double naive = var_tau_exact(acf, n, VarianceMethod::naive_n4).variance;
            INFO(acf.describe() << " n=" << n);
            CHECK(std::abs(fast - naive) < 1e-10);
            CHECK(fast > 0.0);
            CHECK(fast <= 1.0);
        }
    }
}

TEST_CASE("variance is bit-identical for any worker count", "[variance]") {
    for (const auto& acf : {AcfSpec::ar1(0.7), AcfSpec::sma(9)}) {
        const double one = var_tau_exact(acf, 80, VarianceMethod::stationary_n3, 1).variance;
        for (unsigned w : {2u, 3u, 8u}) CHECK(var_tau_exact(acf, 80, VarianceMethod::stationary_n3, w).variance == one);
    }
}

TEST_CASE("variance stays in (0, 1]", "[variance]") {
    for (std::size_t n : {3u, 10u, 40u, 100u}) {
        for (const auto& acf : {AcfSpec::ar1(0.999), AcfSpec::sma(200), AcfSpec::arma(0.99, 50), AcfSpec::ar1(-0.8)}) {
            const auto v = var_tau_exact(acf, n);
            CHECK(v.variance > 0.0);
            CHECK(v.variance <= 1.0);
            CHECK(v.n == n);
        }
    }
}

TEST_CASE("variance matches Monte-Carlo for AR(1)", "[variance][mc]") {
    const std::size_t reps = 10000, n = 30;
    std::vector<double> taus(reps);
    for (std::size_t r = 0; r < reps; ++r) taus[r] = tau_fast(gen_ar1({0.5, n}, mix_seed(555, r))).tau;
    const double m = test_support::mean(taus);
    double m2 = 0.0, m4 = 0.0;
    for (double t : taus) {
        m2 += (t - m) * (t - m);
        m4 += std::pow(t - m, 4);
    }
    m2 /= reps;
    m4 /= reps;
    const double se = std::sqrt((m4 - m2 * m2) / reps);
    const double exact = var_tau_exact(AcfSpec::ar1(0.5), n).variance;
    INFO("empirical " << m2 << " exact " << exact << " se " << se);
    CHECK(std::abs(m2 - exact) < 3.0 * se);
}

TEST_CASE("normalized tau", "[normalized]") {
    std::vector<double> up(10);
    std::iota(up.begin(), up.end(), 0.0);
    CHECK(normalized_tau(up, AcfSpec::iid()) == Approx(1.0 / std::sqrt(50.0 / 810.0)).epsilon(1e-12));
    CHECK(normalized_tau(std::vector<double>{0.0, 1.0}, AcfSpec::ar1(0.9)) == Approx(1.0));
    CHECK(normalized_tau(std::vector<double>{1.0, 0.0}, AcfSpec::sma(5)) == Approx(-1.0));
    std::mt19937_64 rng(3);
    auto x = random_series(rng, 25);
    const double z = normalized_tau(x, AcfSpec::ar1(0.4));
    std::reverse(x.begin(), x.end());
    CHECK(normalized_tau(x, AcfSpec::ar1(0.4)) == Approx(-z));
    // large-n i.i.d. agrees with sqrt(9n/4) tau
    auto y = random_series(rng, 400);
    const double ratio = normalized_tau(y, AcfSpec::iid()) / (std::sqrt(9.0 * 400 / 4.0) * tau_fast(y).tau);
    CHECK(ratio == Approx(1.0).epsilon(0.01));
}
