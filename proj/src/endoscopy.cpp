#include "orbcount/endoscopy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "orbcount/lattice.hpp"
#include "orbcount/poly.hpp"

namespace orbcount {

// ---------------------------------------------------------------------------
// Value

Value operator*(const Value& a, const Value& b) {
    if (a.exact && b.exact) return Value(*a.exact * *b.exact);
    return Value::numeric(a.approx * b.approx);
}

Value operator/(const Value& a, const Value& b) {
    if (a.exact && b.exact) return Value(*a.exact / *b.exact);
    return Value::numeric(a.approx / b.approx);
}

Value operator+(const Value& a, const Value& b) {
    if (a.exact && b.exact) {
        try {
            return Value(*a.exact + *b.exact);
        } catch (const std::invalid_argument&) {
        }
    }
    return Value::numeric(a.approx + b.approx);
}

Value Value::pow(int e) const {
    if (exact) return Value(exact->pow(e));
    return numeric(std::pow(approx, static_cast<long double>(e)));
}

std::string Value::to_string() const {
    if (exact) return exact->to_string();
    std::ostringstream os;
    os.precision(15);
    os << static_cast<double>(approx);
    return os.str();
}

// ---------------------------------------------------------------------------
// Endoscopic data

std::vector<EndoDatum> enumerate_kappa(const BaseField& F, int n, const std::vector<FieldCandidate>& candidates) {
    if (n < 1) throw EndoscopyError("n must be positive");
    if (F.r1 < 0 || F.r2 < 0 || F.r1 + 2 * F.r2 != F.degree) throw EndoscopyError("inconsistent base field signature");
    if (candidates.empty() && F.degree != 1) throw EndoscopyError("candidate fields are required for F != Q");

    std::vector<FieldCandidate> all = candidates;
    bool has_base = false;
    for (const auto& c : all) has_base = has_base || c.degree == 1;
    if (!has_base) {
        FieldCandidate base;
        base.name = F.name;
        base.real_places.assign(F.r1, RealPlaceType::split);
        all.insert(all.begin(), base);
    }

    std::vector<EndoDatum> out;
    for (const auto& c : all) {
        if (c.degree < 1 || n % c.degree != 0)
            throw EndoscopyError("field " + c.name + ": degree " + std::to_string(c.degree) + " does not divide n");
        if (static_cast<int>(c.real_places.size()) != F.r1)
            throw EndoscopyError("field " + c.name + ": one real-place entry per real place of F is required");
        if (c.degree == 1 && !c.ramified_primes.empty())
            throw EndoscopyError("field " + c.name + ": E = F cannot be ramified");
        for (auto t : c.real_places)
            if (t == RealPlaceType::complex && c.degree % 2 != 0)
                throw EndoscopyError("field " + c.name + ": odd degree cannot be complex at a real place");
        for (const auto& [p, v] : c.delta_locals) {
            if (v < 1) throw EndoscopyError("field " + c.name + ": delta must be positive");
            if (c.degree == 1 && v != 1) throw EndoscopyError("field " + c.name + ": delta_v(F) must be 1");
        }
        if (!c.cyclic) continue;

        EndoDatum base;
        base.field = c.name;
        base.degree = c.degree;
        base.u_order = c.degree;
        base.m = n / c.degree;
        base.delta_locals = c.delta_locals;
        for (const auto& [p, v] : c.delta_locals) base.delta_global *= v;
        bool vanishing = false;
        for (std::size_t i = 0; i < c.real_places.size(); ++i) {
            const bool cx = c.real_places[i] == RealPlaceType::complex;
            base.local_table["real" + std::to_string(i + 1)] =
                cx ? "C^" + std::to_string(c.degree / 2) : "R^" + std::to_string(c.degree);
            vanishing = vanishing || (c.degree % 2 == 0 && cx);
        }
        for (const auto& p : c.ramified_primes) base.local_table["p=" + to_string(p)] = "ramified";
        base.contributes = c.ramified_primes.empty() && !vanishing;
        if (c.degree == 1) {
            out.push_back(base);
            continue;
        }
        for (int k = 1; k < c.degree; ++k) {
            if (std::gcd(k, c.degree) != 1) continue;
            EndoDatum e = base;
            e.u_index = k;
            out.push_back(e);
        }
    }
    return out;
}

bool archimedean_vanishing(const EndoDatum& e, RealPlaceType v) {
    return e.degree % 2 == 0 && v == RealPlaceType::complex;
}

// ---------------------------------------------------------------------------
// delta_v

namespace {

using i64 = std::int64_t;
using El = std::vector<i64>;  // element of O_E / p^k, coefficients of 1, y, ..., y^{f-1}

struct UnramifiedRing {
    i64 p, mod;
    int f;
    std::vector<i64> g;  // monic, low-first, size f + 1

    El zero() const { return El(f, 0); }
    El one() const {
        El r = zero();
        r[0] = 1 % mod;
        return r;
    }
    El constant(i64 c) const {
        El r = zero();
        r[0] = mod_floor(c, mod);
        return r;
    }
    El add(const El& a, const El& b) const {
        El r(f);
        for (int i = 0; i < f; ++i) r[i] = (a[i] + b[i]) % mod;
        return r;
    }
    El sub(const El& a, const El& b) const {
        El r(f);
        for (int i = 0; i < f; ++i) r[i] = mod_floor(a[i] - b[i], mod);
        return r;
    }
    El mul(const El& a, const El& b) const {
        std::vector<i64> c(2 * f, 0);
        for (int i = 0; i < f; ++i)
            for (int j = 0; j < f; ++j) c[i + j] = (c[i + j] + mul_mod(a[i], b[j], mod)) % mod;
        for (int i = 2 * f - 1; i >= f; --i) {
            if (c[i] == 0) continue;
            for (int j = 0; j <= f; ++j) c[i - f + j] = mod_floor(c[i - f + j] - mul_mod(c[i], g[j], mod), mod);
        }
        c.resize(f);
        return c;
    }
    bool is_unit(const El& a) const {
        for (i64 v : a)
            if (v % p != 0) return true;
        return false;
    }
    // N_{E/Q_p} as the determinant of multiplication
    i64 norm(const El& a) const {
        std::vector<std::vector<i64>> m;
        El b = one();
        for (int i = 0; i < f; ++i) {
            m.push_back(mul(a, b));
            b = mul(b, El([&] {
                El y = zero();
                if (f > 1) y[1] = 1;
                else y[0] = mod_floor(-g[0], mod);
                return y;
            }()));
        }
        return det(m);
    }
    i64 det(const std::vector<std::vector<i64>>& m) const {
        const std::size_t n = m.size();
        if (n == 1) return m[0][0];
        i64 acc = 0;
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<std::vector<i64>> minor;
            for (std::size_t r = 1; r < n; ++r) {
                std::vector<i64> row;
                for (std::size_t k = 0; k < n; ++k)
                    if (k != c) row.push_back(m[r][k]);
                minor.push_back(row);
            }
            const i64 t = mul_mod(m[0][c], det(minor), mod);
            acc = c % 2 == 0 ? (acc + t) % mod : mod_floor(acc - t, mod);
        }
        return acc;
    }
};

// O_K = O_E[z] / (h), h monic of degree e with O_E coefficients.
struct RelativeRing {
    const UnramifiedRing& E;
    int e;
    std::vector<El> h;  // size e + 1

    using KEl = std::vector<El>;
    KEl one() const {
        KEl r(e, E.zero());
        r[0] = E.one();
        return r;
    }
    KEl mul(const KEl& a, const KEl& b) const {
        std::vector<El> c(2 * e, E.zero());
        for (int i = 0; i < e; ++i)
            for (int j = 0; j < e; ++j) c[i + j] = E.add(c[i + j], E.mul(a[i], b[j]));
        for (int i = 2 * e - 1; i >= e; --i)
            for (int j = 0; j <= e; ++j) c[i - e + j] = E.sub(c[i - e + j], E.mul(c[i], h[j]));
        c.resize(e);
        return c;
    }
    El det(const std::vector<std::vector<El>>& m) const {
        const std::size_t n = m.size();
        if (n == 1) return m[0][0];
        El acc = E.zero();
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<std::vector<El>> minor;
            for (std::size_t r = 1; r < n; ++r) {
                std::vector<El> row;
                for (std::size_t k = 0; k < n; ++k)
                    if (k != c) row.push_back(m[r][k]);
                minor.push_back(row);
            }
            El t = E.mul(m[0][c], det(minor));
            acc = c % 2 == 0 ? E.add(acc, t) : E.sub(acc, t);
        }
        return acc;
    }
    El norm(const KEl& x) const {
        std::vector<std::vector<El>> m;
        KEl b = one();
        KEl z(e, E.zero());
        if (e > 1) z[1] = E.one();
        else z[0] = E.sub(E.zero(), h[0]);
        for (int i = 0; i < e; ++i) {
            m.push_back(mul(x, b));
            b = mul(b, z);
        }
        return det(m);
    }
};

i64 ipow64(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

std::vector<i64> first_irreducible(i64 p, int f) {
    if (f == 1) return {0, 1};
    std::vector<i64> c(f, 0);
    for (;;) {
        ModPoly g(c.begin(), c.end());
        g.push_back(1);
        auto fac = factor_mod_p(g, p);
        if (fac.factors.size() == 1 && fac.factors[0].multiplicity == 1) {
            std::vector<i64> out(c.begin(), c.end());
            out.push_back(1);
            return out;
        }
        std::size_t k = 0;
        while (k < c.size() && ++c[k] == p) c[k++] = 0;
        if (k == c.size()) throw EndoscopyError("no irreducible polynomial found");
    }
}

// all elements of the residue field F_{p^f}, as O_E elements with entries in [0, p)
std::vector<El> residue_elements(const UnramifiedRing& E) {
    std::vector<El> out;
    El c(E.f, 0);
    for (;;) {
        out.push_back(c);
        std::size_t k = 0;
        while (k < c.size() && ++c[k] == E.p) c[k++] = 0;
        if (k == c.size()) break;
    }
    return out;
}

struct Shape {
    int e = 1;
    bool ramified = false;
    std::vector<El> h;  // coefficients reduced mod p^k later (stored mod p for unramified search)
    std::string text;
};

Shape make_shape(const UnramifiedRing& Ep, const LocalExtensionSpec& spec) {
    const i64 p = Ep.p;
    Shape s;
    if (spec.kind == LocalExtensionSpec::Kind::unramified) {
        if (spec.degree < 1 || spec.degree > 3) throw EndoscopyError("unsupported extension shape: unramified degree above 3");
        s.e = spec.degree;
        s.text = "unramified degree " + std::to_string(s.e);
        if (s.e == 1) {
            s.h = {Ep.zero(), Ep.one()};
            return s;
        }
        // monic h over F_{p^f} of degree e <= 3 with no root is irreducible
        auto field = residue_elements(Ep);
        std::vector<std::size_t> idx(s.e, 0);
        for (;;) {
            std::vector<El> h;
            for (std::size_t i : idx) h.push_back(field[i]);
            h.push_back(Ep.one());
            bool root = false;
            for (const El& x : field) {
                El v = Ep.zero(), pw = Ep.one();
                for (const El& c : h) {
                    v = Ep.add(v, Ep.mul(c, pw));
                    pw = Ep.mul(pw, x);
                }
                if (!Ep.is_unit(v) && std::all_of(v.begin(), v.end(), [](i64 t) { return t == 0; })) {
                    root = true;
                    break;
                }
            }
            if (!root) {
                s.h = h;
                return s;
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == field.size()) idx[k++] = 0;
            if (k == idx.size()) throw EndoscopyError("no irreducible relative polynomial found");
        }
    }
    const Int& a = spec.radicand;
    if (a == 0) throw EndoscopyError("radicand must be nonzero");
    const int v = valuation(a, Int(static_cast<long>(p)));
    s.e = 2;
    s.text = "E(sqrt(" + to_string(a) + "))";
    if (v == 1) {
        s.ramified = true;
        return s;
    }
    if (v >= 2) throw EndoscopyError("unsupported extension shape: radicand divisible by p^2");
    if (p == 2) throw EndoscopyError("unsupported extension shape: unit radicand at p = 2");
    // a unit: unramified if a is a nonsquare in F_{p^f}, split otherwise
    const i64 am = mod_floor(Int(a % static_cast<long>(p)).get_si(), p);
    bool square = false;
    for (const El& x : residue_elements(Ep)) {
        El sq = Ep.mul(x, x);
        if (sq[0] == am && std::all_of(sq.begin() + 1, sq.end(), [](i64 t) { return t == 0; })) square = true;
    }
    if (square) throw EndoscopyError("unsupported extension shape: E(sqrt(a)) splits");
    return s;
}

Int delta_at(i64 p, int f, const LocalExtensionSpec& spec, int k) {
    const i64 mod = ipow64(p, k);
    UnramifiedRing E{p, mod, f, first_irreducible(p, f)};
    UnramifiedRing Ep{p, p, f, E.g};
    Shape shape = make_shape(Ep, spec);
    RelativeRing K{E, shape.e, {}};
    if (spec.kind == LocalExtensionSpec::Kind::sqrt) {
        K.h = {E.constant(mod_floor(-Int(spec.radicand % static_cast<long>(mod)).get_si(), mod)), E.zero(), E.one()};
    } else {
        for (const El& c : shape.h) {
            El r = E.zero();
            for (int i = 0; i < f; ++i) r[i] = c[i];
            K.h.push_back(r);
        }
    }
    const int e = shape.e;
    using KEl = RelativeRing::KEl;

    // residue basis lifts and uniformizer
    std::vector<KEl> omega;
    for (int b = 0; b < (shape.ramified ? 1 : e); ++b)
        for (int a = 0; a < f; ++a) {
            KEl w(e, E.zero());
            w[b][a] = 1;
            omega.push_back(w);
        }
    KEl pi(e, E.zero());
    if (shape.ramified) pi[1] = E.one();
    else pi[0] = E.constant(p);
    const int f_K = static_cast<int>(omega.size());
    const i64 q_K = ipow64(p, f_K);

    auto residue_is_one = [&](const KEl& x) {
        for (int b = 0; b < e; ++b)
            for (int a = 0; a < f; ++a) {
                if (shape.ramified && b > 0) continue;
                const i64 want = (a == 0 && b == 0) ? 1 : 0;
                if (mod_floor(x[b][a], p) != want) return false;
            }
        return true;
    };
    auto kpow = [&](KEl x, i64 n) {
        KEl r = K.one();
        while (n > 0) {
            if (n & 1) r = K.mul(r, x);
            x = K.mul(x, x);
            n >>= 1;
        }
        return r;
    };
    std::vector<i64> primes;
    {
        auto fac = factor_integer(Int(static_cast<long>(q_K - 1)));
        for (const auto& [q, m] : fac.factors) primes.push_back(q.get_si());
    }
    std::vector<KEl> gens;
    {
        std::vector<i64> c(f_K, 0);
        bool found = false;
        for (;;) {
            std::size_t idx = 0;
            while (idx < c.size() && ++c[idx] == p) c[idx++] = 0;
            if (idx == c.size()) break;
            KEl x(e, E.zero());
            for (int i = 0; i < f_K; ++i)
                for (int b = 0; b < e; ++b)
                    for (int a = 0; a < f; ++a) x[b][a] = (x[b][a] + c[i] * omega[i][b][a]) % mod;
            bool primitive = true;
            for (i64 q : primes)
                if (residue_is_one(kpow(x, (q_K - 1) / q))) primitive = false;
            if (primitive) {
                gens.push_back(x);
                found = true;
                break;
            }
        }
        if (!found) throw EndoscopyError("no primitive residue element");
    }
    KEl pi_pow = pi;
    const int length = (shape.ramified ? 2 : 1) * k;
    for (int i = 1; i < length; ++i) {
        for (const KEl& w : omega) {
            KEl g = K.mul(pi_pow, w);
            g[0] = E.add(g[0], E.one());
            gens.push_back(g);
        }
        pi_pow = K.mul(pi_pow, pi);
    }

    std::set<El> image{E.one()};
    std::vector<El> frontier{E.one()};
    std::vector<El> norms;
    for (const KEl& g : gens) norms.push_back(K.norm(g));
    while (!frontier.empty()) {
        std::vector<El> next;
        for (const El& a : frontier)
            for (const El& g : norms) {
                El b = E.mul(a, g);
                if (image.insert(b).second) next.push_back(b);
            }
        frontier = std::move(next);
    }
    Int norm_one = 0, inside = 0;
    El c(f, 0);
    for (;;) {
        if (E.is_unit(c) && E.norm(c) == 1 % mod) {
            ++norm_one;
            if (image.count(c)) ++inside;
        }
        std::size_t idx = 0;
        while (idx < c.size() && ++c[idx] == mod) c[idx++] = 0;
        if (idx == c.size()) break;
    }
    if (inside == 0 || norm_one % inside != 0) throw EndoscopyError("norm-one subgroup index is not an integer");
    return norm_one / inside;
}

}  // namespace

DeltaReport delta_local(const Int& p, int e_degree, const LocalExtensionSpec& k_spec, int max_precision) {
    if (p > 13 || p < 2 || !is_probable_prime(p)) throw EndoscopyError("residue characteristic must be a prime <= 13");
    if (e_degree < 1 || e_degree > 4) throw EndoscopyError("unsupported extension shape: [E_v:F_v] must be 1..4");
    if (max_precision > 8) throw EndoscopyError("precision cap is 8");
    const i64 pp = p.get_si();
    DeltaReport r;
    UnramifiedRing Ep{pp, pp, e_degree, first_irreducible(pp, e_degree)};
    r.shape = "E unramified degree " + std::to_string(e_degree) + ", K = " + make_shape(Ep, k_spec).text;
    std::optional<Int> prev;
    for (int k = 1; k <= max_precision; ++k) {
        if (ipow64(pp, e_degree * k) > 3000000) break;
        Int v = delta_at(pp, e_degree, k_spec, k);
        r.history.emplace_back(k, v);
        if (prev && *prev == v) {
            r.value = v;
            r.precision = k;
            return r;
        }
        prev = v;
    }
    throw EndoscopyError("delta did not stabilize within the precision budget");
}

// ---------------------------------------------------------------------------
// Satake transfer

bool SymmetricPoly::is_zero() const {
    for (const auto& [mono, c] : terms)
        if (!c.is_zero()) return false;
    return true;
}

bool SymmetricPoly::is_symmetric() const {
    for (int i = 0; i + 1 < variables; ++i) {
        std::map<std::vector<int>, Cyclotomic> swapped;
        for (const auto& [mono, c] : terms) {
            auto m = mono;
            std::swap(m[i], m[i + 1]);
            swapped.emplace(m, c);
        }
        if (swapped != terms) return false;
    }
    return true;
}

std::string SymmetricPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string body;
    for (const auto& [mono, c] : terms) {
        std::string m;
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (mono[i] == 0) continue;
            if (!m.empty()) m += "*";
            m += var + std::to_string(i + 1);
            if (mono[i] > 1) m += "^" + std::to_string(mono[i]);
        }
        std::string coef = c.to_string();
        const bool simple = c.is_integer();
        std::string term;
        if (m.empty()) term = simple ? coef : "(" + coef + ")";
        else if (coef == "1") term = m;
        else term = (simple ? coef : "(" + coef + ")") + "*" + m;
        body += body.empty() ? term : " + " + term;
    }
    if (q_half_power == 0) return body;
    std::string q;
    if (q_half_power == 2) q = "q";
    else if (q_half_power % 2 == 0) q = "q^" + std::to_string(q_half_power / 2);
    else q = "q^(" + std::to_string(q_half_power) + "/2)";
    return q + "*(" + body + ")";
}

bool operator==(const SymmetricPoly& a, const SymmetricPoly& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.q_half_power == b.q_half_power && a.terms == b.terms;
}

SymmetricPoly complete_homogeneous(int variables, int j, int root_order) {
    SymmetricPoly s;
    s.variables = variables;
    s.root_order = root_order;
    std::vector<int> mono(variables, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i + 1 == variables) {
            mono[i] = left;
            s.terms.emplace(mono, Cyclotomic(root_order, 1));
            return;
        }
        for (int a = 0; a <= left; ++a) {
            mono[i] = a;
            rec(i + 1, left - a);
        }
    };
    if (variables > 0) rec(0, j);
    return s;
}

std::vector<SatakeRow> satake_transfer_check(int n, int d, int j_max) {
    if (n < 1 || d < 1) throw EndoscopyError("n and d must be positive");
    if (n % d != 0) throw EndoscopyError("d does not divide n");
    if (j_max < 0 || j_max > 12) throw EndoscopyError("j_max must be in [0, 12]");
    const int m = n / d;
    std::vector<SatakeRow> rows;
    for (int j = 1; j <= j_max; ++j) {
        SatakeRow row;
        row.j = j;
        row.divisible = j % d == 0;
        SymmetricPoly phi = complete_homogeneous(n, j, d);
        phi.q_half_power = (n - 1) * j;
        // X_{i d + l + 1} -> zeta^{l+1} W_{i+1}
        SymmetricPoly img;
        img.variables = m;
        img.root_order = d;
        img.q_half_power = phi.q_half_power;
        for (const auto& [mono, c] : phi.terms) {
            std::vector<int> w(m, 0);
            long twist = 0;
            for (int i = 0; i < m; ++i)
                for (int l = 0; l < d; ++l) {
                    w[i] += mono[i * d + l];
                    twist += static_cast<long>(l + 1) * mono[i * d + l];
                }
            Cyclotomic term = c * Cyclotomic::zeta_power(d, twist);
            auto [it, inserted] = img.terms.emplace(w, term);
            if (!inserted) it->second += term;
        }
        for (auto it = img.terms.begin(); it != img.terms.end();)
            it = it->second.is_zero() ? img.terms.erase(it) : std::next(it);
        row.image = img;

        SymmetricPoly expected;
        expected.variables = m;
        expected.root_order = d;
        if (row.divisible) {
            SymmetricPoly h = complete_homogeneous(m, j / d, d);
            expected.q_half_power = (n - 1) * d * (j / d);
            for (const auto& [mono, c] : h.terms) {
                std::vector<int> w = mono;
                for (auto& x : w) x *= d;
                expected.terms.emplace(w, c);
            }
        }
        row.expected = expected;
        row.equal = row.image == row.expected;
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Constants

namespace {

Value lambda_F(const BaseField& F, int k, const Value& zeta) {
    return Value(gamma_factor(Place::real, k).pow(F.r1) * gamma_factor(Place::complex, k).pow(F.r2)) * zeta;
}

}  // namespace

ConstantReport assemble_constant_Q(const OrderData& o, std::optional<Symbolic> res_zeta_K) {
    ResidueReport rep = residue_zeta_order(o, res_zeta_K);
    ConstantReport c;
    c.mode = "Q";
    c.poly = o.poly.to_string();
    c.n = o.n;
    c.d = o.n * (o.n - 1) / 2;
    c.res_zeta_K = rep.res_zeta_K;
    c.res_zeta_R = rep.res_zeta_R;
    c.index = rep.index;
    c.local_factors = rep.local_factors;
    c.w_n = ball_volume(o.n, Place::real);
    c.vol_U_inf = vol_max_compact(o.n, Place::real);
    c.data = enumerate_kappa(BaseField{}, o.n);
    c.numerator = Value(Symbolic(0));
    bool first = true;
    for (const auto& e : c.data) {
        if (!e.contributes) continue;
        Value term = Value(Symbolic(Rat(e.delta_global))) * c.res_zeta_R;
        c.numerator = first ? term : c.numerator + term;
        first = false;
        ++c.term_count;
    }
    Value prod(Symbolic(1)), zeta_prod(Symbolic(1));
    for (int k = 2; k <= o.n; ++k) {
        c.lambda_values.emplace_back(lambda_complete(k));
        prod = prod * c.lambda_values.back();
        zeta_prod = zeta_prod * Value(Symbolic::zeta(k));
    }
    c.lambda_product = prod;
    // Res Lambda_Q(1) = Gamma_R(1) Res zeta_Q = 1
    c.denominator_theorem = Value(gamma_factor(Place::real, 1)) * prod;
    c.denominator_proof = zeta_prod / c.vol_U_inf;
    c.denominators_agree = c.denominator_theorem.exact && c.denominator_proof.exact &&
                           *c.denominator_theorem.exact == *c.denominator_proof.exact;
    c.measure_ratio = c.res_zeta_K / zeta_prod * Value(Symbolic::sqrt(abs(rep.disc_K)));
    c.constant = c.numerator * c.w_n / c.denominator_theorem;
    if (c.index == 1) c.ems_constant = c.res_zeta_K * c.w_n / c.lambda_product;
    return c;
}

ConstantReport assemble_constant_general(const GeneralInputs& in) {
    const BaseField& F = in.base;
    const int n = in.n;
    ConstantReport c;
    c.mode = "general";
    c.n = n;
    c.d = n * (n - 1) / 2;
    std::vector<FieldCandidate> cands;
    bool has_base = false;
    for (const auto& f : in.fields) {
        cands.push_back(f.field);
        has_base = has_base || f.field.degree == 1;
    }
    if (!has_base) throw EndoscopyError("missing invariants for E = F");
    c.data = enumerate_kappa(F, n, cands);
    bool first = true;
    for (const auto& e : c.data) {
        if (!e.contributes) continue;
        const GeneralFieldInput* src = nullptr;
        for (const auto& f : in.fields)
            if (f.field.name == e.field) src = &f;
        if (!src) throw EndoscopyError("missing invariants for " + e.field);
        if (e.degree == 1) c.res_zeta_R = src->res_zeta_RE;
        Value term = Value(Symbolic(Rat(e.delta_global))) * src->res_zeta_RE;
        c.numerator = first ? term : c.numerator + term;
        first = false;
        ++c.term_count;
    }
    c.w_n = Value(ball_volume(n, Place::real).pow(F.r1) * ball_volume(n, Place::complex).pow(F.r2));
    c.vol_U_inf = Value(vol_max_compact(n, Place::real).pow(F.r1) * vol_max_compact(n, Place::complex).pow(F.r2));
    const Value disc_pow = Value(Symbolic(Rat(F.disc))).pow(c.d);
    Value prod(Symbolic(1)), zeta_prod(Symbolic(1));
    for (int k = 2; k <= n; ++k) {
        auto it = in.zeta_F.find(k);
        if (it == in.zeta_F.end()) throw EndoscopyError("missing zeta_F(" + std::to_string(k) + ")");
        c.lambda_values.push_back(lambda_F(F, k, it->second));
        prod = prod * c.lambda_values.back();
        zeta_prod = zeta_prod * it->second;
    }
    c.lambda_product = prod;
    const Value res_lambda = lambda_F(F, 1, in.res_zeta_F);
    c.denominator_theorem = disc_pow * Value(Symbolic::pi(2 * n * F.r2)) * res_lambda * prod;
    c.denominator_proof = disc_pow * in.res_zeta_F * zeta_prod / c.vol_U_inf;
    if (c.denominator_theorem.exact && c.denominator_proof.exact)
        c.denominators_agree = *c.denominator_theorem.exact == *c.denominator_proof.exact;
    else
        c.denominators_agree =
            std::fabs(c.denominator_theorem.approx - c.denominator_proof.approx) <= 1e-12L * std::fabs(c.denominator_proof.approx);
    c.constant = c.numerator * c.w_n / c.denominator_theorem;
    if (in.res_zeta_K) {
        c.res_zeta_K = *in.res_zeta_K;
        if (in.relative_disc_norm)
            c.measure_ratio = c.res_zeta_K / (in.res_zeta_F * zeta_prod) *
                              Value(Symbolic::sqrt(abs(*in.relative_disc_norm))) / disc_pow;
    }
    return c;
}

GeneralInputs general_inputs_over_Q(const OrderData& o, std::optional<Symbolic> res_zeta_K) {
    const ResidueReport r = residue_zeta_order(o, res_zeta_K);
    GeneralInputs in;
    in.n = o.n;
    in.res_zeta_F = Value(Symbolic(1));
    for (int k = 2; k <= o.n; ++k) in.zeta_F[k] = Value(Symbolic::zeta(k));
    in.fields.push_back({FieldCandidate{"Q", 1, true, {}, {RealPlaceType::split}, {}}, Value(r.res_zeta_R)});
    in.res_zeta_K = Value(r.res_zeta_K);
    in.relative_disc_norm = abs(r.disc_K);
    return in;
}

}  // namespace orbcount
