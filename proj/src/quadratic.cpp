#include "orbcount/quadratic.hpp"

#include <map>
#include <numeric>
#include <tuple>
#include <vector>

namespace orbcount {

namespace {

using i64 = std::int64_t;

i64 checked_disc(const Int& disc) {
    if (disc == 0 || !disc.fits_slong_p() || abs(disc) > kQuadraticBudget)
        throw QuadraticError("discriminant outside enumeration budget: " + to_string(disc));
    const i64 d = disc.get_si();
    if (mod_floor(d, 4) > 1) throw QuadraticError("not a discriminant (must be 0 or 1 mod 4): " + std::to_string(d));
    if (d > 0) {
        Int r = isqrt(disc);
        if (r * r == disc) throw QuadraticError("square discriminant: " + std::to_string(d));
    }
    return d;
}

i64 gcd3(i64 a, i64 b, i64 c) { return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)); }

Int definite_class_number(i64 d) {
    i64 count = 0;
    const i64 n = -d;
    for (i64 a = 1; 3 * a * a <= n; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            if (mod_floor(b - d, 2) != 0) continue;
            const i64 num = b * b - d;
            if (num % (4 * a) != 0) continue;
            const i64 c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && a == c) continue;
            if (gcd3(a, b, c) != 1) continue;
            ++count;
        }
    return count;
}

using Form = std::tuple<i64, i64, i64>;

Int indefinite_narrow_class_number(i64 d) {
    const i64 r = isqrt(Int(static_cast<long>(d))).get_si();
    std::vector<Form> reduced;
    for (i64 b = 1; b <= r; ++b) {
        if (mod_floor(b - d, 2) != 0) continue;
        const i64 n = (d - b * b) / 4;  // a c = -n
        for (i64 x = 1; x * x <= n; ++x) {
            if (n % x != 0) continue;
            for (int side = 0; side < (x * x == n ? 1 : 2); ++side) {
                const i64 a0 = side == 0 ? x : n / x;
                if (2 * a0 < r - b + 1 || 2 * a0 > r + b) continue;
                for (i64 a : {a0, -a0}) {
                    const i64 c = -n / a;
                    if (gcd3(a, b, c) == 1) reduced.emplace_back(a, b, c);
                }
            }
        }
    }
    std::map<Form, std::size_t> index;
    for (std::size_t i = 0; i < reduced.size(); ++i) index[reduced[i]] = i;
    std::vector<bool> seen(reduced.size(), false);
    Int cycles = 0;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            auto [a, b, c] = reduced[j];
            const i64 m = 2 * std::abs(c);
            // largest b' <= r with b' = -b mod 2|c|
            i64 bp = r - mod_floor(r + b, m);
            const i64 ap = (bp * bp - d) / (4 * c);
            auto it = index.find(Form{c, bp, ap});
            if (it == index.end()) throw QuadraticError("reduction cycle left the reduced set");
            j = it->second;
        }
    }
    return cycles;
}

QuadraticUnit fundamental_unit(i64 d) {
    const Int D = static_cast<long>(d);
    const Int r = isqrt(D);
    const long s = d % 2 == 0 ? 0 : 1;
    // omega = (s + sqrt(d)) / 2, continued fraction state (P + sqrt(d)) / Q
    Int P = s, Q = 2;
    Int A_prev = 0, A = 1, B_prev = 1, B = 0;
    const Int tr = s, nm = (Int(s * s) - D) / 4;  // omega + omega', omega * omega'
    for (long step = 0; step < 50000000; ++step) {
        Int a;
        if (Q > 0)
            mpz_fdiv_q(a.get_mpz_t(), Int(P + r).get_mpz_t(), Q.get_mpz_t());
        else {
            Int q = -Q;
            mpz_fdiv_q(a.get_mpz_t(), Int(P + r).get_mpz_t(), q.get_mpz_t());
            a = -a - 1;
        }
        Int A_next = a * A + A_prev, B_next = a * B + B_prev;
        A_prev = A;
        B_prev = B;
        A = A_next;
        B = B_next;
        const Int N = A * A - A * B * tr + B * B * nm;
        if (N == 1 || N == -1) {
            QuadraticUnit e;
            e.t = 2 * A - B * s;
            e.u = B;
            e.norm = N == 1 ? 1 : -1;
            e.log_value = log_quadratic_unit(e.t, e.u, D);
            auto [m, sq] = squarefree_decomposition(D);
            const Int ur = e.u * sq;
            auto term = [&](const Int& coef) {
                return (coef == 1 ? std::string() : to_string(coef) + "*") + "sqrt(" + to_string(m) + ")";
            };
            if (e.t % 2 == 0 && ur % 2 == 0)
                e.log_name = "log(" + to_string(Int(e.t / 2)) + "+" + term(ur / 2) + ")";
            else
                e.log_name = "log((" + to_string(e.t) + "+" + term(ur) + ")/2)";
            return e;
        }
        const Int P_next = a * Q - P;
        Q = (D - P_next * P_next) / Q;
        P = P_next;
    }
    throw QuadraticError("fundamental unit search exceeded budget");
}

}  // namespace

bool is_fundamental_discriminant(const Int& D) {
    if (D == 0 || D == 1) return false;
    const Int m4 = ((D % 4) + 4) % 4;
    if (m4 == 1) return squarefree_decomposition(D).second == 1;
    if (m4 != 0) return false;
    const Int m = D / 4;
    const Int mm = ((m % 4) + 4) % 4;
    return (mm == 2 || mm == 3) && squarefree_decomposition(m).second == 1;
}

QuadraticOrderInvariants quadratic_order_invariants(const Int& disc) {
    const i64 d = checked_disc(disc);
    QuadraticOrderInvariants q;
    q.disc = disc;
    if (d < 0) {
        q.class_number = definite_class_number(d);
        q.narrow_class_number = q.class_number;
        q.roots_of_unity = d == -3 ? 6 : d == -4 ? 4 : 2;
        return q;
    }
    q.narrow_class_number = indefinite_narrow_class_number(d);
    q.unit = fundamental_unit(d);
    q.class_number = q.unit.norm == -1 ? q.narrow_class_number : Int(q.narrow_class_number / 2);
    return q;
}

QuadraticInvariants quadratic_invariants(const Int& D) {
    if (!is_fundamental_discriminant(D)) throw QuadraticError("not a fundamental discriminant: " + to_string(D));
    QuadraticOrderInvariants o = quadratic_order_invariants(D);
    QuadraticInvariants q;
    q.D = D;
    q.h = o.class_number;
    if (D < 0) {
        q.w_K = o.roots_of_unity;
        q.residue = Symbolic(Rat(2 * q.h, q.w_K)) * Symbolic::pi() / Symbolic::sqrt(Int(-D));
    } else {
        q.unit = o.unit;
        q.residue = Symbolic(Rat(2 * q.h)) * Symbolic::log(o.unit.log_name, o.unit.log_value) / Symbolic::sqrt(D);
    }
    q.residue_float = q.residue.value();
    return q;
}

}  // namespace orbcount
