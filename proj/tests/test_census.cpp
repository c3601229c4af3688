#include <cmath>

#include "doctest.h"
#include "orbcount/census.hpp"
#include "orbcount/endoscopy.hpp"

using namespace orbcount;

namespace {

IntPoly poly(const std::vector<long>& high_first) {
    std::vector<Int> c(high_first.begin(), high_first.end());
    return IntPoly::from_high_first(c);
}

// Four free entries, no pruning.
std::uint64_t naive_n2(long t, long det, long T) {
    std::uint64_t count = 0;
    for (long a = -T; a <= T; ++a)
        for (long b = -T; b <= T; ++b)
            for (long c = -T; c <= T; ++c)
                for (long d = -T; d <= T; ++d)
                    if (a + d == t && a * d - b * c == det && a * a + b * b + c * c + d * d <= T * T) ++count;
    return count;
}

std::uint64_t naive_n3(const std::vector<long>& e, long T) {
    std::uint64_t count = 0;
    std::vector<long> x(9, -T);
    for (;;) {
        long norm = 0;
        for (long v : x) norm += v * v;
        if (norm <= T * T) {
            const long tr = x[0] + x[4] + x[8];
            const long m2 = x[0] * x[4] - x[1] * x[3] + x[0] * x[8] - x[2] * x[6] + x[4] * x[8] - x[5] * x[7];
            const long det = x[0] * (x[4] * x[8] - x[5] * x[7]) - x[1] * (x[3] * x[8] - x[5] * x[6]) +
                             x[2] * (x[3] * x[7] - x[4] * x[6]);
            if (tr == e[0] && m2 == e[1] && det == e[2]) ++count;
        }
        std::size_t i = 0;
        while (i < 9 && ++x[i] > T) x[i++] = -T;
        if (i == 9) break;
    }
    return count;
}

const std::vector<std::vector<long>> kQuadratics = {{1, 0, 1},  {1, 1, 1},  {1, 0, -5}, {1, -1, -1}, {1, 0, -20},
                                                    {1, 0, 2},  {1, 3, 5},  {1, 0, -2}, {1, 0, 7},   {1, -4, 1},
                                                    {1, 0, -12}, {1, 5, -3}};

}  // namespace

TEST_CASE("n = 2 examples") {
    CHECK(count_points_n2(poly({1, 0, 1}), 3) == 10);
    CHECK(count_points_n2(poly({1, 0, 1}), 1) == 0);
    CHECK(count_points_n2(poly({1, -1, -1}), 2) == 4);
    CHECK(count_points_n2(poly({1, 0, -5}), 1) == 0);
    CHECK(count_points_bruteforce(poly({1, 0, 1}), 3) == 10);
    CHECK(naive_n2(0, 1, 3) == 10);
    CHECK_THROWS_AS(count_points_n2(poly({1, 0, -4}), 10), CensusError);
    CHECK_THROWS_AS(count_points_n2(poly({1, 0, 0, -2}), 10), CensusError);
}

TEST_CASE("kernel agrees with brute force") {
    for (const auto& q : kQuadratics) {
        for (long T = 1; T <= 40; ++T) {
            CAPTURE(q[1]);
            CAPTURE(q[2]);
            CAPTURE(T);
            CHECK(count_points_n2(poly(q), T) == count_points_bruteforce(poly(q), T));
        }
        CHECK(count_points_bruteforce(poly(q), 9) == naive_n2(-q[1], q[2], 9));
        // non-integral radii
        CHECK(count_points_n2(poly(q), 17.5L) == count_points_bruteforce(poly(q), 17.5L));
    }
}

TEST_CASE("boundary convention") {
    // [[0,1],[-1,0]] has norm sqrt 2
    CHECK(count_points_n2(poly({1, 0, 1}), std::sqrt(2.0L)) == 2);
    CountKernelConfig strict;
    strict.include_boundary = false;
    CHECK(count_points_n2(poly({1, 0, 1}), std::sqrt(2.0L), strict) == 0);
    CHECK(count_points_bruteforce(poly({1, 0, 1}), std::sqrt(2.0L), false) == 0);
    for (long T = 1; T <= 25; ++T)
        CHECK(count_points_n2(poly({1, 0, -5}), T, strict) == count_points_bruteforce(poly({1, 0, -5}), T, false));
}

TEST_CASE("n = 3 brute force") {
    const std::vector<long> e = {0, -1, 1};  // x^3 - x - 1
    const auto c2 = count_points_bruteforce(poly({1, 0, -1, -1}), 2);
    CHECK(c2 == naive_n3(e, 2));
    CHECK(c2 >= 2);
    CHECK(count_points_bruteforce(poly({1, 0, 0, -2}), 2) == naive_n3({0, 0, 2}, 2));
    CHECK(count_points_bruteforce(poly({1, 1, -2, -1}), 2) == naive_n3({-1, -2, 1}, 2));
    CHECK_THROWS_AS(count_points_bruteforce(poly({1, 0, -1, -1}), 61), CensusError);
}

TEST_CASE("transpose symmetry") {
    // the sweep counts (b, c) and (c, b) separately; the counts must match
    for (const auto& q : kQuadratics) {
        const long t = -q[1], det = q[2], T = 15;
        std::uint64_t below = 0, above = 0;
        for (long a = -T; a <= T; ++a)
            for (long b = -T; b <= T; ++b)
                for (long c = -T; c <= T; ++c) {
                    const long d = t - a;
                    if (a * d - b * c == det && a * a + b * b + c * c + d * d <= T * T) {
                        if (b < c) ++below;
                        if (b > c) ++above;
                    }
                }
        CHECK(below == above);
    }
}

TEST_CASE("census series") {
    CountKernelConfig cfg;
    cfg.schedule = geometric_schedule(10, 2000);
    auto r = census_series(poly({1, 0, 1}), cfg, 3.0L);
    CHECK(r.d == 1);
    CHECK(r.checkpoints.back().T == 2000);
    for (std::size_t k = 1; k < r.checkpoints.size(); ++k) CHECK(r.checkpoints[k].count >= r.checkpoints[k - 1].count);
    for (const auto& c : r.checkpoints) CHECK(c.count == count_points_n2(poly({1, 0, 1}), c.T));
    CHECK(std::fabs(*r.relative_deviation) < 0.05);
    CHECK(r.sample_checked > 0);
    CHECK(r.sample_failed == 0);

    cfg.schedule = {3, 2};
    CHECK_THROWS_AS(census_series(poly({1, 0, 1}), cfg), CensusError);
}

TEST_CASE("thread-count independence") {
    for (const auto& q : {std::vector<long>{1, 0, 1}, std::vector<long>{1, 0, -5}}) {
        CountKernelConfig cfg;
        cfg.schedule = geometric_schedule(10, 60000);
        std::vector<std::uint64_t> base;
        for (int threads : {1, 2, 8}) {
            cfg.threads = threads;
            auto r = census_series(poly(q), cfg);
            std::vector<std::uint64_t> counts;
            for (const auto& c : r.checkpoints) counts.push_back(c.count);
            if (base.empty()) base = counts;
            CHECK(counts == base);
        }
    }
}

TEST_CASE("census approaches the assembled constant") {
    CountKernelConfig cfg;
    cfg.schedule = geometric_schedule(10, 30000);
    for (const auto& q : {std::vector<long>{1, 1, 1}, std::vector<long>{1, 0, -5}}) {
        std::vector<Int> c(q.begin(), q.end());
        const auto constant = assemble_constant_Q(build_order(IntPoly::from_high_first(c))).constant.approx;
        auto r = census_series(poly(q), cfg, constant);
        CAPTURE(r.slope_fit);
        CHECK(std::fabs(*r.relative_deviation) < 0.1);
    }
}
