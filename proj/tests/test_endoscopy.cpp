#include <cmath>

#include "doctest.h"
#include "orbcount/endoscopy.hpp"

using namespace orbcount;

namespace {

OrderData order_of(const std::vector<long>& high_first) {
    std::vector<Int> c(high_first.begin(), high_first.end());
    return build_order(IntPoly::from_high_first(c));
}

Symbolic log_phi() { return Symbolic::log("log((1+sqrt(5))/2)", std::log((1 + std::sqrt(5.0L)) / 2)); }

LocalExtensionSpec unramified(int e) { return {LocalExtensionSpec::Kind::unramified, e, Int(0)}; }
LocalExtensionSpec sqrt_of(long a) { return {LocalExtensionSpec::Kind::sqrt, 2, Int(a)}; }

}  // namespace

TEST_CASE("endoscopic data over Q") {
    for (int n = 2; n <= 6; ++n) {
        auto data = enumerate_kappa(BaseField{}, n);
        REQUIRE(data.size() == 1);
        CHECK(data[0].degree == 1);
        CHECK(data[0].contributes);
        CHECK(data[0].delta_global == 1);
    }
}

TEST_CASE("endoscopic data from a field table") {
    FieldCandidate e;
    e.name = "E";
    e.degree = 2;
    e.real_places = {RealPlaceType::complex};
    auto data = enumerate_kappa(BaseField{}, 2, {e});
    REQUIRE(data.size() == 2);
    CHECK(data[0].contributes);
    CHECK_FALSE(data[1].contributes);
    CHECK(archimedean_vanishing(data[1], RealPlaceType::complex));
    CHECK_FALSE(archimedean_vanishing(data[1], RealPlaceType::split));
    CHECK_FALSE(archimedean_vanishing(data[0], RealPlaceType::complex));

    // F real quadratic, E/F unramified quadratic inside K of degree 2 over F
    BaseField F{"F", 2, 2, 0, Int(5)};
    FieldCandidate base{"F", 1, true, {}, {RealPlaceType::split, RealPlaceType::split}, {}};
    FieldCandidate E{"E", 2, true, {}, {RealPlaceType::split, RealPlaceType::split}, {}};
    auto d2 = enumerate_kappa(F, 2, {base, E});
    REQUIRE(d2.size() == 2);
    CHECK(d2[1].u_index == 1);
    CHECK(d2[1].m == 1);
    CHECK(d2[0].contributes);
    CHECK(d2[1].contributes);

    FieldCandidate bad{"bad", 3, true, {}, {RealPlaceType::split}, {}};
    CHECK_THROWS_AS(enumerate_kappa(BaseField{}, 2, {bad}), EndoscopyError);
    FieldCandidate ram{"ram", 2, true, {Int(3)}, {RealPlaceType::split}, {}};
    auto d3 = enumerate_kappa(BaseField{}, 4, {ram});
    CHECK(d3.size() == 2);
    CHECK_FALSE(d3[1].contributes);
    FieldCandidate cyc4{"C4", 4, true, {}, {RealPlaceType::split}, {}};
    CHECK(enumerate_kappa(BaseField{}, 4, {cyc4}).size() == 3);  // phi(4) + 1
}

TEST_CASE("delta_v") {
    CHECK(delta_local(3, 2, unramified(2)).value == 1);
    CHECK(delta_local(5, 1, sqrt_of(5)).value == 1);
    CHECK(delta_local(3, 2, sqrt_of(3)).value == 1);
    CHECK(delta_local(2, 2, unramified(3)).value == 1);
    CHECK(delta_local(7, 1, sqrt_of(3)).value == 1);  // 3 is a nonsquare unit mod 7
    CHECK_THROWS_AS(delta_local(7, 2, sqrt_of(3)), EndoscopyError);  // splits over Q_49
    CHECK_THROWS_AS(delta_local(5, 2, sqrt_of(25)), EndoscopyError);
    CHECK_THROWS_AS(delta_local(17, 2, unramified(2)), EndoscopyError);
}

TEST_CASE("delta_v is stable and trivial for tame quadratic extensions") {
    for (long p : {3L, 5L, 7L})
        for (int f : {1, 2})
            for (long a : {p, 2 * p}) {
                auto r = delta_local(Int(p), f, sqrt_of(a));
                CAPTURE(p);
                CAPTURE(f);
                CHECK(r.value == 1);
                REQUIRE(r.history.size() >= 2);
                CHECK(r.history[r.history.size() - 1].second == r.history[r.history.size() - 2].second);
            }
}

TEST_CASE("delta_v at 2") {
    for (long a : {2L, 6L, -2L, 10L}) {
        auto r = delta_local(2, 2, sqrt_of(a));
        CHECK(r.value >= 1);
        CHECK(r.history.back().second == r.value);
    }
    CHECK(delta_local(2, 1, sqrt_of(2)).value == 1);
}

TEST_CASE("Satake transfer examples") {
    auto rows = satake_transfer_check(2, 2, 2);
    CHECK(rows[0].image.is_zero());
    CHECK(rows[0].equal);
    CHECK(rows[1].equal);
    CHECK(rows[1].image.to_string("W") == "q*(W1^2)");
    auto r4 = satake_transfer_check(4, 2, 2);
    CHECK(r4[1].equal);
    CHECK(r4[1].expected.to_string("W") == "q^3*(W2^2 + W1^2)");
    CHECK_THROWS_AS(satake_transfer_check(3, 2, 2), EndoscopyError);
}

TEST_CASE("Satake transfer identity for n <= 4") {
    for (int n = 1; n <= 4; ++n)
        for (int d = 1; d <= n; ++d) {
            if (n % d != 0) continue;
            for (const auto& row : satake_transfer_check(n, d, 12)) {
                CAPTURE(n);
                CAPTURE(d);
                CAPTURE(row.j);
                CHECK(row.equal);
                CHECK(row.image.is_zero() == !row.divisible);
                CHECK(row.image.is_symmetric());
            }
        }
    CHECK(complete_homogeneous(3, 4).is_symmetric());
    CHECK(complete_homogeneous(3, 4).terms.size() == 15);
}

TEST_CASE("constants over Q") {
    auto a = assemble_constant_Q(order_of({1, 0, 1}));
    REQUIRE(a.constant.exact);
    CHECK(*a.constant.exact == Symbolic(3));
    CHECK(a.denominators_agree);
    REQUIRE(a.ems_constant);
    CHECK(*a.ems_constant->exact == *a.constant.exact);
    CHECK(a.term_count == 1);

    auto b = assemble_constant_Q(order_of({1, 1, 1}));
    CHECK(*b.constant.exact == Symbolic(4) / Symbolic::sqrt(3));
    CHECK(std::fabs(b.constant.approx - 2.3094010767585L) < 1e-12);

    auto c = assemble_constant_Q(order_of({1, 0, -5}));
    CHECK(*c.constant.exact == Symbolic(48) * log_phi() / (Symbolic::pi(2) * Symbolic::sqrt(5)));
    CHECK(std::fabs(c.constant.approx - 3.28808) < 1e-5);
    CHECK_FALSE(c.ems_constant);

    auto d = assemble_constant_Q(order_of({1, 0, -20}));
    CHECK(*d.constant.exact == Symbolic(60) * log_phi() / (Symbolic::pi(2) * Symbolic::sqrt(5)));

    auto e = assemble_constant_Q(order_of({1, 0, 0, -2}), Symbolic(Rat(1, 3)));
    CHECK(e.denominators_agree);
    CHECK(e.lambda_values.size() == 2);
    CHECK_THROWS(assemble_constant_Q(order_of({1, 0, 0, -2})));
}

TEST_CASE("maximal orders reproduce the EMS form") {
    for (long m : {1L, 2L, 3L, 7L, 11L, -2L, -3L, -7L, -13L}) {
        auto c = assemble_constant_Q(order_of({1, 0, m}));
        if (c.index != 1) continue;
        REQUIRE(c.ems_constant);
        CHECK(*c.ems_constant->exact == *c.constant.exact);
    }
}

TEST_CASE("general assembly over Q matches the Q form") {
    for (const auto& poly : std::vector<std::vector<long>>{{1, 0, 1}, {1, 0, -5}, {1, 1, 1}}) {
        auto q = assemble_constant_Q(order_of(poly));
        GeneralInputs in;
        in.n = 2;
        in.res_zeta_F = Value(Symbolic(1));
        in.zeta_F[2] = Value(Symbolic::zeta(2));
        in.fields.push_back({FieldCandidate{"Q", 1, true, {}, {RealPlaceType::split}, {}}, q.res_zeta_R});
        in.res_zeta_K = q.res_zeta_K;
        auto g = assemble_constant_general(in);
        auto h = assemble_constant_general(general_inputs_over_Q(order_of(poly)));
        CHECK(*h.constant.exact == *q.constant.exact);
        CHECK(h.measure_ratio.approx == doctest::Approx(static_cast<double>(q.measure_ratio.approx)));
        CHECK(g.denominators_agree);
        CHECK(*g.constant.exact == *q.constant.exact);
    }
}

TEST_CASE("general assembly counts phi multiplicities") {
    GeneralInputs in;
    in.base = BaseField{"F", 2, 2, 0, Int(5)};
    in.n = 2;
    in.res_zeta_F = Value::numeric(0.4304089410);
    in.zeta_F[2] = Value::numeric(1.1616711);
    in.fields.push_back({FieldCandidate{"F", 1, true, {}, {RealPlaceType::split, RealPlaceType::split}, {}},
                         Value::numeric(1.0)});
    in.fields.push_back({FieldCandidate{"E", 2, true, {}, {RealPlaceType::split, RealPlaceType::split}, {}},
                         Value::numeric(0.5)});
    auto g = assemble_constant_general(in);
    CHECK(g.term_count == 2);
    CHECK(g.numerator.approx == doctest::Approx(1.5));
    CHECK(g.denominators_agree);
    in.fields.pop_back();
    in.fields.push_back({FieldCandidate{"E", 4, true, {}, {RealPlaceType::split, RealPlaceType::split}, {}},
                         Value::numeric(0.5)});
    in.n = 4;
    in.zeta_F[3] = Value::numeric(1.05);
    in.zeta_F[4] = Value::numeric(1.02);
    auto h = assemble_constant_general(in);
    CHECK(h.term_count == 3);
}
