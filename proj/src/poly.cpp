#include "orbcount/poly.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace orbcount {

IntPoly::IntPoly(std::vector<Int> coeffs_low_first) : coeffs_(std::move(coeffs_low_first)) {
    if (coeffs_.size() < 2) throw PolyError("polynomial must have degree >= 1");
    if (coeffs_.back() != 1) throw PolyError("polynomial is not monic");
}

IntPoly IntPoly::from_high_first(const std::vector<Int>& coeffs) {
    return IntPoly(std::vector<Int>(coeffs.rbegin(), coeffs.rend()));
}

Int IntPoly::evaluate(const Int& x) const {
    Int acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<Int> IntPoly::derivative() const {
    std::vector<Int> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<unsigned long>(i));
    return d;
}

std::string IntPoly::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Int& c = coeffs_[i];
        if (c == 0) continue;
        Int mag = abs(c);
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (mag != 1 || i == 0) out << mag.get_str();
        if (i >= 1) out << "x";
        if (i >= 2) out << "^" << i;
        first = false;
    }
    return out.str();
}

std::string IntPoly::to_csv() const {
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        s += coeffs_[i].get_str();
        if (i) s += ",";
    }
    return s;
}

IntPoly parse_poly(std::string_view text) {
    std::vector<Int> high;
    std::size_t start = 0;
    if (text.find_first_not_of(" \t") == std::string_view::npos) throw PolyError("empty polynomial");
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string tok(text.substr(start, end - start));
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (!tok.empty() && tok[0] == '+') tok.erase(0, 1);
        Int v;
        bool ok = !tok.empty() && tok.find_first_not_of("-0123456789") == std::string::npos &&
                  tok.find('-', 1) == std::string::npos && tok != "-" && v.set_str(tok, 10) == 0;
        if (!ok) throw PolyError("malformed coefficient token '" + tok + "'");
        high.push_back(v);
        start = end + 1;
    }
    if (high.size() < 2) throw PolyError("polynomial must have degree >= 1");
    if (high.front() != 1) throw PolyError("polynomial is not monic (leading coefficient " + high.front().get_str() + ")");
    return IntPoly::from_high_first(high);
}

Int resultant(const std::vector<Int>& f, const std::vector<Int>& g) {
    const int m = static_cast<int>(f.size()) - 1;
    const int n = static_cast<int>(g.size()) - 1;
    if (m < 0 || n < 0) return 0;
    if (m == 0 && n == 0) return 1;
    const int size = m + n;
    IntMatrix s(size, size);
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) s(r, r + i) = f[m - i];
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i) s(n + r, r + i) = g[n - i];
    return determinant(s);
}

Int discriminant(const IntPoly& p) {
    const int n = p.degree();
    Int res = resultant(p.coeffs(), p.derivative());
    return ((n * (n - 1) / 2) % 2 == 0) ? res : Int(-res);
}

IntMatrix companion_matrix(const IntPoly& p) {
    const int n = p.degree();
    IntMatrix m(n, n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -p[i];
    return m;
}

namespace {

using ZPoly = std::vector<Int>;

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly c(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

void zadd(ZPoly& acc, const ZPoly& b, int sign) {
    if (acc.size() < b.size()) acc.resize(b.size(), Int(0));
    for (std::size_t i = 0; i < b.size(); ++i) acc[i] += sign * b[i];
}

ZPoly cofactor_det(const std::vector<std::vector<ZPoly>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    ZPoly acc;
    for (std::size_t col = 0; col < n; ++col) {
        if (m[0][col].empty()) continue;
        std::vector<std::vector<ZPoly>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<ZPoly> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != col) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        zadd(acc, zmul(m[0][col], cofactor_det(minor)), col % 2 == 0 ? 1 : -1);
    }
    return acc;
}

}  // namespace

std::vector<Int> charpoly_cofactor(const IntMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::vector<ZPoly>> xm(n, std::vector<ZPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ZPoly e{Int(-m(i, j))};
            if (i == j) e.push_back(Int(1));
            if (e.size() == 1 && e[0] == 0) e.clear();
            xm[i][j] = e;
        }
    ZPoly c = cofactor_det(xm);
    c.resize(n + 1, Int(0));
    return c;
}

// ---------------------------------------------------------------------------

namespace modp {

void trim(ModPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const ModPoly& f) { return static_cast<int>(f.size()) - 1; }

ModPoly reduce(const std::vector<Int>& f, std::int64_t p) {
    ModPoly out;
    for (const Int& c : f) {
        Int r;
        mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(p));
        out.push_back(r.get_si());
    }
    trim(out);
    return out;
}

ModPoly add(const ModPoly& a, const ModPoly& b, std::int64_t p) {
    ModPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::int64_t v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        c[i] = mod_floor(v, p);
    }
    trim(c);
    return c;
}

ModPoly sub(const ModPoly& a, const ModPoly& b, std::int64_t p) {
    ModPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::int64_t v = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
        c[i] = mod_floor(v, p);
    }
    trim(c);
    return c;
}

ModPoly mul(const ModPoly& a, const ModPoly& b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mul_mod(a[i], b[j], p)) % p;
    }
    trim(c);
    return c;
}

std::pair<ModPoly, ModPoly> divmod(const ModPoly& a, const ModPoly& b, std::int64_t p) {
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    ModPoly r = a;
    trim(r);
    if (r.size() < b.size()) return {{}, r};
    ModPoly q(r.size() - b.size() + 1, 0);
    const std::int64_t inv = inv_mod(b.back(), p);
    for (int i = degree(r); i >= degree(b); --i) {
        std::int64_t c = mul_mod(r[i], inv, p);
        if (!c) continue;
        const int shift = i - degree(b);
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] = mod_floor(r[shift + j] - mul_mod(c, b[j], p), p);
    }
    trim(q);
    trim(r);
    return {q, r};
}

ModPoly rem(const ModPoly& a, const ModPoly& b, std::int64_t p) { return divmod(a, b, p).second; }

ModPoly monic(const ModPoly& a, std::int64_t p) {
    if (a.empty()) return a;
    const std::int64_t inv = inv_mod(a.back(), p);
    ModPoly out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = mul_mod(a[i], inv, p);
    return out;
}

ModPoly gcd(ModPoly a, ModPoly b, std::int64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        ModPoly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

ModPoly derivative(const ModPoly& a, std::int64_t p) {
    ModPoly d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(mul_mod(a[i], static_cast<std::int64_t>(i) % p, p));
    trim(d);
    return d;
}

ModPoly powmod(ModPoly base, Int e, const ModPoly& m, std::int64_t p) {
    ModPoly result{1};
    base = rem(base, m, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = rem(mul(result, base, p), m, p);
        base = rem(mul(base, base, p), m, p);
        e >>= 1;
    }
    return rem(result, m, p);
}

bool is_one(const ModPoly& a) { return a.size() == 1 && a[0] == 1; }

}  // namespace modp

namespace {

struct FactorAcc {
    std::vector<ModPFactor> factors;
};

ModPoly pth_root(const ModPoly& f, std::int64_t p) {
    ModPoly r;
    for (std::size_t i = 0; i < f.size(); i += static_cast<std::size_t>(p)) r.push_back(f[i]);
    modp::trim(r);
    return r;
}

// (squarefree factor, multiplicity) pairs.
void squarefree(const ModPoly& f, std::int64_t p, int scale, std::vector<std::pair<ModPoly, int>>& out) {
    ModPoly fd = modp::derivative(f, p);
    ModPoly c = modp::gcd(f, fd, p);
    ModPoly w = modp::divmod(f, c, p).first;
    int i = 1;
    while (!modp::is_one(w) && !w.empty()) {
        ModPoly y = modp::gcd(w, c, p);
        ModPoly fac = modp::divmod(w, y, p).first;
        if (modp::degree(fac) > 0) out.emplace_back(modp::monic(fac, p), i * scale);
        w = y;
        c = modp::divmod(c, y, p).first;
        ++i;
    }
    if (modp::degree(c) > 0) squarefree(pth_root(c, p), p, scale * static_cast<int>(p), out);
}

void equal_degree(const ModPoly& g, int d, std::int64_t p, std::mt19937_64& rng, std::vector<ModPoly>& out) {
    const int n = modp::degree(g);
    if (n == d) {
        out.push_back(g);
        return;
    }
    std::uniform_int_distribution<std::int64_t> coef(0, p - 1);
    while (true) {
        ModPoly a(n, 0);
        for (auto& c : a) c = coef(rng);
        modp::trim(a);
        if (modp::degree(a) < 1) continue;
        ModPoly b;
        if (p == 2) {
            ModPoly t = a, acc = a;
            for (int i = 1; i < d; ++i) {
                t = modp::rem(modp::mul(t, t, p), g, p);
                acc = modp::add(acc, t, p);
            }
            b = acc;
        } else {
            Int e;
            mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
            e = (e - 1) / 2;
            b = modp::sub(modp::powmod(a, e, g, p), ModPoly{1}, p);
        }
        ModPoly h = modp::gcd(g, b, p);
        const int dh = modp::degree(h);
        if (dh > 0 && dh < n) {
            equal_degree(h, d, p, rng, out);
            equal_degree(modp::divmod(g, h, p).first, d, p, rng, out);
            return;
        }
    }
}

void distinct_degree(ModPoly f, std::int64_t p, int mult, std::mt19937_64& rng, std::vector<ModPFactor>& out) {
    const ModPoly x{0, 1};
    ModPoly h = x;
    for (int d = 1; modp::degree(f) >= 2 * d; ++d) {
        h = modp::powmod(h, Int(static_cast<long>(p)), f, p);
        ModPoly g = modp::gcd(f, modp::sub(h, x, p), p);
        if (modp::degree(g) > 0) {
            std::vector<ModPoly> parts;
            equal_degree(g, d, p, rng, parts);
            for (auto& q : parts) out.push_back({modp::monic(q, p), mult});
            f = modp::divmod(f, g, p).first;
            h = modp::rem(h, f, p);
        }
    }
    if (modp::degree(f) > 0) out.push_back({modp::monic(f, p), mult});
}

}  // namespace

bool ModPFactorization::has_repeated_factor() const {
    return std::any_of(factors.begin(), factors.end(), [](const ModPFactor& f) { return f.multiplicity > 1; });
}

std::vector<int> ModPFactorization::factor_degrees() const {
    std::vector<int> d;
    for (const auto& f : factors) d.push_back(modp::degree(f.poly));
    return d;
}

ModPFactorization factor_mod_p(const ModPoly& f_in, std::int64_t prime) {
    if (prime < 2 || !is_probable_prime(Int(static_cast<long>(prime))))
        throw PolyError("modulus " + std::to_string(prime) + " is not prime");
    ModPoly f = f_in;
    modp::trim(f);
    if (f.empty()) throw PolyError("cannot factor the zero polynomial");
    f = modp::monic(f, prime);
    ModPFactorization out;
    out.prime = static_cast<long>(prime);
    std::mt19937_64 rng(0x5eedULL);
    std::vector<std::pair<ModPoly, int>> sqf;
    if (modp::degree(f) > 0) squarefree(f, prime, 1, sqf);
    for (auto& [g, m] : sqf) distinct_degree(g, prime, m, rng, out.factors);
    // merge equal factors (possible across different squarefree layers only in theory)
    std::sort(out.factors.begin(), out.factors.end(), [](const ModPFactor& a, const ModPFactor& b) {
        if (a.poly.size() != b.poly.size()) return a.poly.size() < b.poly.size();
        return std::lexicographical_compare(a.poly.rbegin(), a.poly.rend(), b.poly.rbegin(), b.poly.rend());
    });
    std::vector<ModPFactor> merged;
    for (auto& fac : out.factors) {
        if (!merged.empty() && merged.back().poly == fac.poly)
            merged.back().multiplicity += fac.multiplicity;
        else
            merged.push_back(fac);
    }
    out.factors = std::move(merged);
    return out;
}

ModPFactorization factor_mod_p(const IntPoly& p, const Int& prime) {
    if (!prime.fits_slong_p() || prime >= (Int(1) << 31) || !is_probable_prime(prime))
        throw PolyError("modulus " + prime.get_str() + " is not a supported prime");
    const std::int64_t q = prime.get_si();
    return factor_mod_p(modp::reduce(p.coeffs(), q), q);
}

std::vector<std::int64_t> small_primes(std::int64_t limit) {
    std::vector<bool> composite(static_cast<std::size_t>(limit + 1), false);
    std::vector<std::int64_t> primes;
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

namespace {

std::vector<Int> divisors_of(const Int& n) {
    std::vector<Int> divs{1};
    Factorization f = factor_integer(n);
    if (!f.complete()) throw PolyError("cannot factor constant term for root search");
    for (auto& [p, e] : f.factors) {
        std::vector<Int> next;
        for (const Int& d : divs) {
            Int pk = 1;
            for (int k = 0; k <= e; ++k) {
                next.push_back(d * pk);
                pk *= p;
            }
        }
        divs = std::move(next);
    }
    return divs;
}

std::optional<Int> integer_root(const IntPoly& p) {
    if (p[0] == 0) return Int(0);
    for (const Int& d : divisors_of(p[0])) {
        if (p.evaluate(d) == 0) return d;
        if (p.evaluate(-d) == 0) return Int(-d);
    }
    return std::nullopt;
}

std::optional<IntPoly> quadratic_factor(const IntPoly& p) {
    // x^4 + a3 x^3 + a2 x^2 + a1 x + a0 = (x^2 + a x + b)(x^2 + c x + d)
    const Int &a0 = p[0], &a1 = p[1], &a2 = p[2], &a3 = p[3];
    for (const Int& pd : divisors_of(a0)) {
        for (int s : {1, -1}) {
            Int b = s * pd, d = a0 / b;
            Int k = a2 - b - d;
            Int disc = a3 * a3 - 4 * k;
            if (disc < 0) continue;
            Int r = isqrt(disc);
            if (r * r != disc) continue;
            for (int t : {1, -1}) {
                Int num = a3 + t * r;
                if (!mpz_even_p(num.get_mpz_t())) continue;
                Int a = num / 2, c = a3 - a;
                if (a * d + b * c == a1) return IntPoly(std::vector<Int>{b, a, Int(1)});
            }
        }
    }
    return std::nullopt;
}

std::set<int> subset_sums(const std::vector<int>& degs) {
    std::set<int> sums{0};
    for (int d : degs) {
        std::set<int> next = sums;
        for (int s : sums) next.insert(s + d);
        sums = std::move(next);
    }
    return sums;
}

}  // namespace

IrreducibilityCertificate is_irreducible(const IntPoly& p, int prime_budget) {
    IrreducibilityCertificate cert;
    const int n = p.degree();
    if (n == 1) {
        cert.status = Irreducibility::irreducible;
        cert.method = "exhaustive";
        return cert;
    }
    const std::vector<std::int64_t> primes = small_primes(1000);
    const int budget = std::min<int>(prime_budget, static_cast<int>(primes.size()));
    for (int i = 0; i < budget; ++i) {
        ModPFactorization f = factor_mod_p(p, Int(static_cast<long>(primes[i])));
        if (f.factors.size() == 1 && f.factors[0].multiplicity == 1) {
            cert.status = Irreducibility::irreducible;
            cert.method = "mod_p";
            cert.prime = Int(static_cast<long>(primes[i]));
            return cert;
        }
    }
    if (auto r = integer_root(p)) {
        cert.status = Irreducibility::reducible;
        cert.method = "factor";
        cert.factor = IntPoly(std::vector<Int>{-*r, Int(1)});
        return cert;
    }
    if (n <= 3) {
        cert.status = Irreducibility::irreducible;
        cert.method = "exhaustive";
        return cert;
    }
    if (n == 4) {
        if (auto q = quadratic_factor(p)) {
            cert.status = Irreducibility::reducible;
            cert.method = "factor";
            cert.factor = *q;
        } else {
            cert.status = Irreducibility::irreducible;
            cert.method = "exhaustive";
        }
        return cert;
    }
    const Int disc = discriminant(p);
    std::set<int> possible;
    for (int d = 1; d < n; ++d) possible.insert(d);
    for (int i = 0; i < budget && !possible.empty(); ++i) {
        if (disc % primes[i] == 0) continue;
        ModPFactorization f = factor_mod_p(p, Int(static_cast<long>(primes[i])));
        std::set<int> sums = subset_sums(f.factor_degrees());
        std::set<int> keep;
        for (int d : possible)
            if (sums.count(d)) keep.insert(d);
        if (keep.size() < possible.size()) cert.primes.push_back(primes[i]);
        possible = std::move(keep);
    }
    if (possible.empty()) {
        cert.status = Irreducibility::irreducible;
        cert.method = "degree_sets";
    } else {
        cert.status = Irreducibility::inconclusive;
        cert.method = "degree_sets";
    }
    return cert;
}

}  // namespace orbcount
