#include <cmath>
#include <numbers>

#include "doctest.h"
#include "orbcount/analytic.hpp"

using namespace orbcount;

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

OrderData order_of(const std::vector<long>& high_first) {
    std::vector<Int> c(high_first.begin(), high_first.end());
    return build_order(IntPoly::from_high_first(c));
}

// Euler-Maclaurin with three correction terms
long double zeta_direct(int k) {
    const int N = 10000;
    long double s = 0;
    for (int i = N - 1; i >= 1; --i) s += std::pow(static_cast<long double>(i), -k);
    const long double n = N;
    s += std::pow(n, 1 - k) / (k - 1) + std::pow(n, -k) / 2 + k * std::pow(n, -k - 1) / 12 -
         k * (k + 1) * (k + 2) * std::pow(n, -k - 3) / 720;
    return s;
}

long double gamma_c(int s) { return 2 * std::pow(2 * kPi, -s) * std::tgamma(static_cast<long double>(s)); }

Symbolic log_phi() { return Symbolic::log("log((1+sqrt(5))/2)", std::log((1 + std::sqrt(5.0L)) / 2)); }

}  // namespace

TEST_CASE("completed zeta values") {
    CHECK(lambda_complete(2) == Symbolic::pi(2) / Symbolic(6));
    CHECK(lambda_complete(4) == Symbolic::pi(4) / Symbolic(90));
    CHECK(lambda_complete(3) == Symbolic::zeta(3) / (Symbolic(2) * Symbolic::pi(2)));
    CHECK(lambda_complete(3).value() == doctest::Approx(0.19133).epsilon(1e-4));
    CHECK(std::fabs(lambda_complete(2).value() - kPi / 6) < 1e-12);
    for (int k = 2; k <= 12; ++k) {
        const long double direct = std::pow(kPi, -k / 2.0L) * std::tgamma(k / 2.0L) * zeta_direct(k);
        CAPTURE(k);
        CHECK(std::fabs(lambda_complete(k).value() - direct) < 1e-12);
    }
}

TEST_CASE("gamma factors") {
    CHECK(gamma_factor(Place::real, 1) == Symbolic(1));
    CHECK(gamma_factor(Place::real, 2) == Symbolic(1) / Symbolic::pi(2));
    CHECK(gamma_factor(Place::complex, 1) == Symbolic(1) / Symbolic::pi(2));
    for (int s = 1; s <= 9; ++s) {
        CHECK(std::fabs(gamma_factor(Place::complex, s).value() - gamma_c(s)) < 1e-15);
        const long double r = std::pow(kPi, -s / 2.0L) * std::tgamma(s / 2.0L);
        CHECK(std::fabs(gamma_factor(Place::real, s).value() - r) < 1e-15);
    }
}

TEST_CASE("ball volumes") {
    CHECK(ball_volume(2, Place::real) == Symbolic(2));
    CHECK(ball_volume(3, Place::real) == Symbolic(Rat(4, 3)) * Symbolic::pi(2));
    CHECK(ball_volume(2, Place::complex) == Symbolic(2) * Symbolic::pi(2));
    for (int n = 2; n <= 6; ++n) {
        const long double d = n * (n - 1) / 2.0L;
        CHECK(std::fabs(ball_volume(n, Place::real).value() - std::pow(kPi, d / 2) / std::tgamma(d / 2 + 1)) < 1e-12);
    }
}

TEST_CASE("Monte-Carlo ball volumes") {
    for (int n : {2, 3})
        for (Place place : {Place::real, Place::complex}) {
            const double exact = static_cast<double>(ball_volume(n, place).value());
            const double mc = ball_volume_monte_carlo(n, place, 10000000);
            CAPTURE(n);
            CHECK(std::fabs(mc - exact) / exact < 0.01);
        }
    // deterministic for a fixed seed
    CHECK(ball_volume_monte_carlo(2, Place::complex, 100000, 7) == ball_volume_monte_carlo(2, Place::complex, 100000, 7));
}

TEST_CASE("maximal compact volumes") {
    CHECK(vol_max_compact(1, Place::real) == Symbolic(1));
    CHECK(vol_max_compact(2, Place::real) == Symbolic::pi(2));
    CHECK(vol_max_compact(2, Place::complex) == Symbolic(2) * Symbolic::pi(2));
}

TEST_CASE("Gindikin-Karpelevich product") {
    for (int n = 1; n <= 8; ++n) {
        long double lhs = 1;
        for (int k = 1; k <= n - 1; ++k) lhs *= std::pow(gamma_c(k) / gamma_c(k + 1), n - k);
        CAPTURE(n);
        CHECK(std::fabs(lhs - vol_max_compact(n, Place::complex).value()) / lhs < 1e-10);
    }
}

TEST_CASE("order residues") {
    CHECK(residue_zeta_order(order_of({1, 0, 1})).res_zeta_R == Symbolic::pi(2) / Symbolic(4));
    auto r5 = residue_zeta_order(order_of({1, 0, -5}));
    CHECK(r5.index == 2);
    CHECK(r5.local_factors.at(Int(2)) == 4);
    CHECK(r5.res_zeta_R == Symbolic(4) * log_phi() / Symbolic::sqrt(5));
    CHECK(residue_zeta_order(order_of({1, 0, -20})).res_zeta_R == Symbolic(5) * log_phi() / Symbolic::sqrt(5));
    CHECK_THROWS_AS(residue_zeta_order(order_of({1, 0, -1, -1})), AnalyticError);
    auto cubic = residue_zeta_order(order_of({1, 0, 0, -2}), Symbolic(Rat(1, 3)));
    CHECK(cubic.res_zeta_R == Symbolic(Rat(1, 3)));
}

TEST_CASE("global residue formula") {
    auto a = yun_global_residue_check(order_of({1, 0, 1}), Int(1));
    CHECK(a.match);
    CHECK(a.yun_residue == Symbolic::pi(2) / Symbolic(4));
    CHECK(yun_global_residue_check(order_of({1, 0, -5})).match);
    auto c = yun_global_residue_check(order_of({1, 0, 3}), Int(2));
    CHECK(c.match);
    CHECK(c.D == -3);
    CHECK_THROWS_AS(yun_global_residue_check(order_of({1, 0, 3}), Int(3)), AnalyticError);
}

TEST_CASE("global residue formula across quadratic orders") {
    int checked = 0;
    for (long m = 2; m <= 80; ++m)
        for (long sign : {1L, -1L}) {
            if (sign < 0 && isqrt(Int(m)) * isqrt(Int(m)) == m) continue;
            OrderData o = order_of({1, 0, sign * m});
            GlobalIndex gi = global_index(o);
            if (gi.index > 50) continue;
            auto y = yun_global_residue_check(o);
            CAPTURE(sign * m);
            CHECK(y.match);
            CHECK(y.yun_residue == y.order_residue);
            ++checked;
        }
    CHECK(checked > 100);
}
