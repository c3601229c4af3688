#include <functional>
#include <map>

#include "doctest.h"
#include "orbcount/lattice.hpp"

using namespace orbcount;

namespace {

OrderData order_of(const std::vector<long>& high_first) {
    std::vector<Int> c(high_first.begin(), high_first.end());
    return build_order(IntPoly::from_high_first(c));
}

Int ipow(const Int& p, int e) {
    Int r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

// Every HNF of index p^j in Z^n, tested for stability under A directly.
long brute_force_stable_count(const IntMatrix& a, long p, int j) {
    const std::size_t n = a.rows();
    long count = 0;
    std::vector<int> exps(n, 0);
    std::function<void(std::size_t, int)> diag = [&](std::size_t i, int left) {
        if (i + 1 == n) {
            exps[i] = left;
            // off-diagonal entries h(r, c) for c > r, in [0, h(c, c))
            std::vector<std::pair<std::size_t, std::size_t>> free;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = r + 1; c < n; ++c) free.emplace_back(r, c);
            std::vector<long> vals(free.size(), 0);
            for (;;) {
                IntMatrix h(n, n);
                for (std::size_t r = 0; r < n; ++r) h(r, r) = ipow(p, exps[r]);
                for (std::size_t f = 0; f < free.size(); ++f) h(free[f].first, free[f].second) = vals[f];
                RatMatrix hinv = inverse(to_rational(h));
                if (is_integral(to_rational(h * a) * hinv)) ++count;
                std::size_t f = 0;
                while (f < free.size()) {
                    if (++vals[f] < ipow(p, exps[free[f].second]).get_si()) break;
                    vals[f++] = 0;
                }
                if (f == free.size()) break;
            }
            return;
        }
        for (int e = 0; e <= left; ++e) {
            exps[i] = e;
            diag(i + 1, left - e);
        }
    };
    diag(0, j);
    return count;
}

struct Case {
    std::vector<long> poly;
    long p;
};

// Irreducible polynomials of degree 2 and 3 with s_p <= 2 at small primes.
std::vector<Case> corpus() {
    std::vector<Case> out;
    const std::vector<std::vector<long>> polys = {
        {1, 0, 1},  {1, 0, -5}, {1, 0, -20}, {1, 1, 1},   {1, 0, -2},  {1, 0, 3},     {1, 0, -12},
        {1, 0, 8},  {1, 0, 9},  {1, 0, 27},  {1, 0, -18}, {1, 0, 0, -2}, {1, 0, -1, -1}, {1, 0, 0, 4},
        {1, 0, 3, 1}, {1, 1, 0, 3}, {1, 0, -3, -1}, {1, 0, 0, -12},
    };
    for (const auto& f : polys) {
        OrderData o = order_of(f);
        for (long p : {2L, 3L, 5L, 7L}) {
            auto m = p_maximal_order(o, Int(p));
            if (m.s_p > 2 || (o.n == 3 && m.s_p > 1 && p > 3)) continue;
            out.push_back({f, p});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("colength-one counts") {
    CHECK(enumerate_stable_sublattices(make_local_model(order_of({1, 0, 1}), 5, 1), 1).size() == 2);
    // gamma is unipotent but not scalar on R^v / 2 R^v; scalar on O_K / 2 O_K
    CHECK(enumerate_stable_sublattices(make_local_model(order_of({1, 0, -5}), 2, 1), 1).size() == 1);
    CHECK(enumerate_stable_sublattices(make_local_model(order_of({1, 0, -5}), 2, 1, Ambient::maximal), 1).size() == 3);
}

TEST_CASE("stable sublattice counts agree with an HNF scan") {
    for (const auto& c : corpus()) {
        OrderData o = order_of(c.poly);
        const int jmax = o.n == 2 ? 4 : 2;
        LocalModel m = make_local_model(o, c.p, jmax);
        auto levels = enumerate_stable_sublattices_upto(m, jmax);
        for (int j = 0; j <= jmax; ++j) {
            CAPTURE(c.p);
            CAPTURE(j);
            CHECK(static_cast<long>(levels[j].size()) == brute_force_stable_count(m.gamma, c.p, j));
        }
    }
}

TEST_CASE("colength-one bound") {
    for (const auto& c : corpus()) {
        OrderData o = order_of(c.poly);
        LocalModel m = make_local_model(o, c.p, 1);
        const auto count = enumerate_stable_sublattices(m, 1).size();
        const long bound = (ipow(Int(c.p), o.n).get_si() - 1) / (c.p - 1);
        bool scalar = true;
        for (std::size_t i = 0; i < m.gamma.rows(); ++i)
            for (std::size_t j = 0; j < m.gamma.cols(); ++j)
                if (i != j && m.gamma(i, j) % c.p != 0) scalar = false;
        for (std::size_t i = 1; i < m.gamma.rows(); ++i)
            if ((m.gamma(i, i) - m.gamma(0, 0)) % c.p != 0) scalar = false;
        CHECK(static_cast<long>(count) <= bound);
        CHECK((static_cast<long>(count) == bound) == scalar);
    }
}

TEST_CASE("precision guard") {
    LocalModel m = make_local_model(order_of({1, 0, -5}), 2, 2);
    CHECK_THROWS_AS(enumerate_stable_sublattices_upto(m, 3), LatticeError);
}

TEST_CASE("local zeta examples") {
    auto z = local_zeta(order_of({1, 0, -5}), 2);
    CHECK(z.s_p == 1);
    CHECK(z.J_coeffs[0] == 1);
    CHECK(z.J_coeffs[1] == 1);
    CHECK(z.J_coeffs[2] == 3);
    CHECK(z.J_tilde_coeffs == std::vector<Int>{1, 1, 2});
    CHECK(z.J_tilde_offset == -1);
    CHECK(z.orbital_value == 4);
    CHECK(local_zeta(order_of({1, 0, 1}), 5).orbital_value == 1);
    CHECK(local_zeta(order_of({1, 0, -20}), 2).orbital_value == 10);
    CHECK(local_zeta(order_of({1, 0, -1, -1}), 23).orbital_value == 1);
}

TEST_CASE("functional equation and maximal orders") {
    for (const auto& c : corpus()) {
        OrderData o = order_of(c.poly);
        auto z = local_zeta(o, c.p);
        const int s = z.s_p;
        CAPTURE(c.p);
        REQUIRE(z.J_tilde_coeffs.size() == static_cast<std::size_t>(2 * s + 1));
        for (int i = 0; i <= s; ++i) CHECK(z.J_tilde_coeffs[2 * s - i] == ipow(Int(c.p), s - i) * z.J_tilde_coeffs[i]);
        Int sum = 0;
        for (const auto& a : z.J_tilde_coeffs) sum += a;
        CHECK(sum == z.orbital_value);
        if (s == 0) {
            CHECK(z.orbital_value == 1);
            CHECK(z.J_tilde_coeffs == std::vector<Int>{1});
        }
    }
}

TEST_CASE("coset method agrees with the series method") {
    for (const auto& c : corpus()) {
        OrderData o = order_of(c.poly);
        CAPTURE(c.p);
        auto coset = orbital_integral_coset(o, c.p);
        CHECK(coset.value == local_zeta(o, c.p).orbital_value);
        // orbit-stabilizer: weights add up to the number of normalized lattices
        CHECK(coset.value == coset.lattices);
    }
}

TEST_CASE("coset examples") {
    auto r = orbital_integral_coset(order_of({1, 0, -20}), 2);
    CHECK(r.value == 10);
    CHECK(r.classes == 3);
    CHECK(orbital_integral_coset(order_of({1, 0, 1}), 5).value == 1);
}

TEST_CASE("twisted orbital integrals") {
    CHECK(twisted_orbital_integral(order_of({1, 0, -5}), 2, {2, true}).is_zero());
    Cyclotomic t = twisted_orbital_integral(order_of({1, 0, 1}), 3, {2, false});
    CHECK(t == Cyclotomic(2, 1));
    Cyclotomic u = twisted_orbital_integral(order_of({1, 0, -20}), 2, {2, false});
    CHECK(u == Cyclotomic(2, 4));
    CHECK_THROWS_AS(twisted_orbital_integral(order_of({1, 0, -2}), 2, {2, false}), LatticeError);
}

TEST_CASE("ramified twists vanish across the corpus") {
    int checked = 0;
    for (const auto& c : corpus()) {
        OrderData o = order_of(c.poly);
        std::vector<int> orders;
        if (c.p == 2) orders = {2};
        else
            for (int d = 2; d < c.p; ++d)
                if ((c.p - 1) % d == 0) orders.push_back(d);
        for (int d : orders) {
            CHECK(twisted_orbital_integral(o, c.p, {d, true}).is_zero());
            ++checked;
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("fundamental lemma instances") {
    auto r = fundamental_lemma_check(order_of({1, 0, -20}), 2, 2);
    CHECK(r.equal);
    CHECK(r.lhs_abs_sq == 1);
    CHECK(r.abs_delta_gamma == Rat(1, 16));
    CHECK(r.c_G_inverse == 1);
    CHECK(r.stable == 1);

    auto t = fundamental_lemma_check(order_of({1, 0, 0, 0, 1}), 3, 2);
    CHECK(t.equal);
    CHECK(t.lhs_abs_sq == 1);

    auto u = fundamental_lemma_check(order_of({1, 0, 1}), 5, 1);
    CHECK(u.equal);
    CHECK_THROWS_AS(fundamental_lemma_check(order_of({1, 0, -2}), 2, 2), LatticeError);
}

TEST_CASE("norm index") {
    // unramified: units are norms
    CHECK(norm_index(make_local_order(order_of({1, 0, -5}), 2), 1) == 1);
    // Q_2(i): norms of units are 1 mod 4
    CHECK(norm_index(make_local_order(order_of({1, 0, 1}), 2), 1) == 2);
    // Q_3(sqrt 3): index 2
    CHECK(norm_index(make_local_order(order_of({1, 0, -3}), 3), 1) == 2);
}

TEST_CASE("cyclotomic arithmetic") {
    CHECK(cyclotomic_polynomial(6) == std::vector<Int>{1, -1, 1});
    Cyclotomic z = Cyclotomic::zeta_power(3, 1);
    CHECK(z * z * z == Cyclotomic(3, 1));
    CHECK(z + z * z + Cyclotomic(3, 1) == Cyclotomic(3));
    CHECK((z * z.conj()) == Cyclotomic(3, 1));
    CHECK(Cyclotomic::zeta_power(2, 1) == Cyclotomic(2, -1));
    CHECK((Cyclotomic(4, 1) - Cyclotomic::zeta_power(4, 1) * Cyclotomic(4, 3)).to_string() == "1 - 3*z");
}
