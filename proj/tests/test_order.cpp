#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "orbcount/order.hpp"
#include "orbcount/quadratic.hpp"

using namespace orbcount;

namespace {

// Dedekind: with chi = prod g_i^{e_i} mod p, g = prod g_i, h = prod g_i^{e_i-1}
// and F = (chi - g h)/p, Z[x]/(chi) is p-maximal iff gcd(F, g, h) = 1 mod p.
bool dedekind_maximal(const IntPoly& chi, std::int64_t p) {
    auto fac = factor_mod_p(chi, Int(static_cast<long>(p)));
    std::vector<Int> g{1}, h{1};
    auto mulz = [](const std::vector<Int>& a, const std::vector<std::int64_t>& b) {
        std::vector<Int> c(a.size() + b.size() - 1, Int(0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * static_cast<long>(b[j]);
        return c;
    };
    for (const auto& f : fac.factors) {
        g = mulz(g, f.poly);
        for (int i = 1; i < f.multiplicity; ++i) h = mulz(h, f.poly);
    }
    std::vector<Int> gh(g.size() + h.size() - 1, Int(0));
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) gh[i + j] += g[i] * h[j];
    std::vector<Int> F = chi.coeffs();
    F.resize(std::max(F.size(), gh.size()), Int(0));
    for (std::size_t i = 0; i < gh.size(); ++i) F[i] -= gh[i];
    for (auto& c : F) c /= static_cast<long>(p);
    ModPoly d = modp::gcd(modp::gcd(modp::reduce(F, p), modp::reduce(g, p), p), modp::reduce(h, p), p);
    return modp::degree(d) == 0;
}

Int index_of(const RatMatrix& basis) {
    Rat d = abs(determinant(basis));
    REQUIRE(d.get_num() == 1);
    return d.get_den();
}

// smallest t, u > 0 with t^2 - d u^2 = +-4
std::pair<long, long> pell_bruteforce(long d) {
    for (long u = 1;; ++u) {
        long t2m = d * u * u - 4, t2p = d * u * u + 4;
        long a = std::lround(std::sqrt(static_cast<double>(t2m)));
        if (a * a == t2m) return {a, u};
        long b = std::lround(std::sqrt(static_cast<double>(t2p)));
        if (b * b == t2p) return {b, u};
    }
}

long kronecker(long D, long a) { return mpz_kronecker_si(Int(D).get_mpz_t(), a); }

// analytic class number formula as an independent oracle
double analytic_class_number(long D) {
    if (D < 0) {
        if (D == -3 || D == -4) return 1;
        double s = 0;
        for (long a = 1; a < -D; ++a) s += kronecker(D, a) * a;
        return -s / static_cast<double>(-D);
    }
    auto [t, u] = pell_bruteforce(D);
    const double log_eps = std::log((t + u * std::sqrt(static_cast<double>(D))) / 2.0);
    double s = 0;
    for (long a = 1; a < D; ++a) s += kronecker(D, a) * std::log(std::sin(std::numbers::pi * a / D));
    return -s / (2 * log_eps);
}

std::vector<IntPoly> irreducible_corpus(std::size_t count, std::uint64_t seed, int max_deg) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> deg(2, max_deg), coef(-12, 12);
    std::vector<IntPoly> out;
    while (out.size() < count) {
        const int n = deg(rng);
        std::vector<Int> c;
        for (int i = 0; i < n; ++i) c.push_back(coef(rng) * (i == 0 ? 4 : 1));
        c.push_back(1);
        IntPoly f(c);
        if (is_irreducible(f).status == Irreducibility::irreducible) out.push_back(f);
    }
    return out;
}

}  // namespace

TEST_CASE("build_order examples") {
    OrderData a = build_order(parse_poly("1,0,1"));
    IntMatrix gram(2, 2);
    gram(0, 0) = 2;
    gram(1, 1) = -2;
    CHECK(a.trace_gram == gram);
    CHECK(a.disc == -4);
    CHECK(a.dual_basis(0, 0) == Rat(1, 2));
    CHECK(a.dual_basis(1, 1) == Rat(-1, 2));

    OrderData b = build_order(parse_poly("1,0,-5"));
    CHECK(b.trace_gram(0, 0) == 2);
    CHECK(b.trace_gram(0, 1) == 0);
    CHECK(b.trace_gram(1, 1) == 10);
    CHECK(b.disc == 20);

    OrderData c = build_order(parse_poly("1,0,-1,-1"));
    CHECK(c.disc == -23);

    CHECK_THROWS_AS(build_order(parse_poly("1,0,-1")), OrderError);
}

TEST_CASE("dual_contains_check examples") {
    for (const char* s : {"1,0,1", "1,0,-5", "1,0,-1,-1", "1,0,0,0,1"}) CHECK(dual_contains_check(build_order(parse_poly(s))));
}

TEST_CASE("property: order invariants over a corpus") {
    for (const IntPoly& f : irreducible_corpus(40, 5, 4)) {
        OrderData o = build_order(f);
        CHECK(o.disc == discriminant(f));
        CHECK(o.trace_gram.is_symmetric());
        // trace pairing of the dual basis against the power basis is the identity
        RatMatrix pairing = o.dual_basis * to_rational(o.trace_gram);
        CHECK(pairing == RatMatrix::identity(o.n));
        // #(R^v / R) = |disc|
        CHECK(abs(Rat(1) / determinant(o.dual_basis)) == Rat(abs(o.disc)));
        CHECK(dual_contains_check(o));
        CHECK(charpoly_cofactor(o.gamma_matrix) == f.coeffs());
        CHECK(norm(o, gamma_element(o)) == Rat((o.n % 2 ? -1 : 1) * f[0]));
    }
}

TEST_CASE("p_maximal_order examples") {
    OrderData a = build_order(parse_poly("1,0,1"));
    CHECK(p_maximal_order(a, 2).s_p == 0);

    OrderData b = build_order(parse_poly("1,0,-5"));
    auto r = p_maximal_order(b, 2);
    CHECK(r.s_p == 1);
    RatMatrix expected(2, 2);
    expected(0, 0) = 1;
    expected(1, 0) = Rat(1, 2);
    expected(1, 1) = Rat(1, 2);
    CHECK(r.overorder_basis == lattice_basis(expected));
    CHECK(is_order(b, r.overorder_basis));

    OrderData c = build_order(parse_poly("1,0,-1,-1"));
    for (long p : {2, 3, 5, 23}) CHECK(p_maximal_order(c, p).s_p == 0);

    CHECK_THROWS_AS(p_maximal_order(b, 4), OrderError);
    CHECK_THROWS_AS(p_maximal_order(build_order(parse_poly("1,0,0,0,0,-2")), 2), OrderError);
}

TEST_CASE("p_maximal_order agrees with Dedekind's criterion and is idempotent") {
    for (const IntPoly& f : irreducible_corpus(40, 17, 4)) {
        OrderData o = build_order(f);
        for (std::int64_t p : small_primes(13)) {
            auto r = p_maximal_order(o, p);
            CHECK((r.s_p == 0) == dedekind_maximal(f, p));
            if (valuation(o.disc, p) < 2) CHECK(r.s_p == 0);
            CHECK(is_order(o, r.overorder_basis));
            Int idx = index_of(r.overorder_basis);
            Int expect = 1;
            for (int i = 0; i < r.s_p; ++i) expect *= p;
            CHECK(idx == expect);
            CHECK(p_maximal_overorder(o, r.overorder_basis, p).s_p == 0);
        }
    }
}

TEST_CASE("global_index examples and properties") {
    CHECK(global_index(build_order(parse_poly("1,0,1"))).index == 1);
    CHECK(global_index(build_order(parse_poly("1,0,-5"))).index == 2);
    auto g = global_index(build_order(parse_poly("1,0,-20")));
    CHECK(g.index == 4);
    REQUIRE(g.per_prime.size() == 1);
    CHECK(g.per_prime[0].first == 2);
    CHECK(g.per_prime[0].second == 2);

    for (int b = -7; b <= 7; ++b)
        for (int c = -30; c <= 30; ++c) {
            IntPoly f({c, b, 1});
            if (is_irreducible(f).status != Irreducibility::irreducible) continue;
            OrderData o = build_order(f);
            GlobalIndex gi = global_index(o);
            CHECK(gi.complete);
            CHECK(abs(o.disc) % (gi.index * gi.index) == 0);
            const Int field_disc = o.disc / (gi.index * gi.index);
            auto [s, r] = squarefree_decomposition(o.disc);
            const Int D = (s % 4 == 1 || s % 4 == -3) ? s : 4 * s;
            CHECK(field_disc == D);
        }
}

TEST_CASE("residue degrees match factorization for maximal orders") {
    OrderData a = build_order(parse_poly("1,0,1"));
    CHECK(residue_degrees(a, RatMatrix::identity(2), 3) == std::vector<int>{2});
    CHECK(residue_degrees(a, RatMatrix::identity(2), 5) == std::vector<int>{1, 1});
    CHECK(residue_degrees(a, RatMatrix::identity(2), 2) == std::vector<int>{1});
    OrderData b = build_order(parse_poly("1,0,0,0,1"));
    CHECK(residue_degrees(b, RatMatrix::identity(4), 3) == std::vector<int>{2, 2});
    OrderData c = build_order(parse_poly("1,0,-5"));
    CHECK(residue_degrees(c, p_maximal_order(c, 2).overorder_basis, 2) == std::vector<int>{2});

    for (const IntPoly& f : irreducible_corpus(30, 23, 4)) {
        OrderData o = build_order(f);
        for (std::int64_t p : small_primes(11)) {
            if (o.disc % p == 0) continue;
            CHECK(residue_degrees(o, RatMatrix::identity(o.n), p) == factor_mod_p(f, p).factor_degrees());
        }
    }
}

TEST_CASE("quadratic_invariants examples") {
    auto a = quadratic_invariants(-4);
    CHECK(a.h == 1);
    CHECK(a.w_K == 4);
    CHECK(a.residue == Symbolic(Rat(1, 4)) * Symbolic::pi());
    CHECK(std::abs(a.residue_float - std::numbers::pi_v<long double> / 4) < 1e-12);

    auto b = quadratic_invariants(5);
    CHECK(b.h == 1);
    CHECK(b.unit.t == 1);
    CHECK(b.unit.u == 1);
    CHECK(b.unit.norm == -1);
    CHECK(b.unit.log_name == "log((1+sqrt(5))/2)");
    CHECK(b.residue.to_string() == "2*log((1+sqrt(5))/2)/sqrt(5)");
    CHECK(std::abs(b.residue_float - 2 * std::log((1 + std::sqrt(5.0L)) / 2) / std::sqrt(5.0L)) < 1e-12);

    auto c = quadratic_invariants(-23);
    CHECK(c.h == 3);
    CHECK(c.residue.to_string() == "3*pi/sqrt(23)");

    CHECK(quadratic_invariants(-3).w_K == 6);
    CHECK(quadratic_invariants(8).unit.log_name == "log(1+sqrt(2))");
    CHECK_THROWS_AS(quadratic_invariants(20), QuadraticError);
    CHECK_THROWS_AS(quadratic_invariants(-8 * 9), QuadraticError);
    CHECK_THROWS_AS(quadratic_invariants(3), QuadraticError);
}

TEST_CASE("property: class numbers and units against analytic oracles") {
    for (long D = -400; D <= 400; ++D) {
        if (!is_fundamental_discriminant(D)) continue;
        auto q = quadratic_invariants(D);
        CHECK(std::abs(q.h.get_d() - analytic_class_number(D)) < 1e-6);
        if (D > 0) {
            auto [t, u] = pell_bruteforce(D);
            CHECK(q.unit.t == t);
            CHECK(q.unit.u == u);
            CHECK(q.unit.t * q.unit.t - D * q.unit.u * q.unit.u == 4 * q.unit.norm);
        }
        CHECK(std::abs(q.residue.value() - q.residue_float) < 1e-12);
    }
    // non-fundamental discriminants: units of orders by brute force
    for (long d : {12L, 20L, 28L, 32L, 45L, 48L, 125L}) {
        auto q = quadratic_order_invariants(d);
        auto [t, u] = pell_bruteforce(d);
        CHECK(q.unit.t == t);
        CHECK(q.unit.u == u);
    }
    CHECK(quadratic_order_invariants(-16).class_number == 1);
    CHECK(quadratic_order_invariants(-36).class_number == 2);
    CHECK(quadratic_order_invariants(-12).roots_of_unity == 2);
}
