#include "orbcount/order.hpp"

#include <algorithm>
#include <numeric>

namespace orbcount {

namespace {

std::vector<Int> reduce_power_basis(std::vector<Int> v, const IntPoly& chi) {
    const int n = chi.degree();
    for (int d = static_cast<int>(v.size()) - 1; d >= n; --d) {
        if (v[d] == 0) continue;
        Int c = v[d];
        for (int k = 0; k < n; ++k) v[d - n + k] -= c * chi[k];
        v[d] = 0;
    }
    v.resize(n);
    return v;
}

std::int64_t small_prime(const Int& p) {
    if (p < 2 || !p.fits_slong_p() || p > Int("4611686018427387903"))
        throw OrderError("prime out of range: " + to_string(p));
    if (!is_probable_prime(p)) throw OrderError("not a prime: " + to_string(p));
    return p.get_si();
}

// O/pO for an order O with row basis B: structure constants mod p in B-coordinates.
struct ResidueRing {
    int n;
    std::int64_t p;
    std::vector<std::vector<std::vector<Int>>> S;  // S[i][j] = coords of b_i b_j (exact)

    ResidueRing(const OrderData& o, const RatMatrix& basis, std::int64_t prime) : n(o.n), p(prime) {
        RatMatrix inv = inverse(basis);
        S.assign(n, std::vector<std::vector<Int>>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<Rat> prod = multiply(o, basis.row(i), basis.row(j));
                std::vector<Int> c(n);
                for (int k = 0; k < n; ++k) {
                    Rat acc = 0;
                    for (int l = 0; l < n; ++l) acc += prod[l] * inv(l, k);
                    if (acc.get_den() != 1) throw OrderError("basis does not span an order");
                    c[k] = acc.get_num();
                }
                S[i][j] = std::move(c);
            }
        Smod.assign(n * n * n, 0);
        const Int P = static_cast<long>(p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Int r = S[i][j][k] % P;
                    Smod[(i * n + j) * n + k] = mod_floor(r.get_si(), p);
                }
    }

    std::vector<std::int64_t> Smod;

    std::vector<std::int64_t> mul(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) const {
        std::vector<std::int64_t> out(n, 0);
        for (int i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < n; ++j) {
                if (b[j] == 0) continue;
                std::int64_t ab = mul_mod(a[i], b[j], p);
                const std::int64_t* sk = &Smod[(i * n + j) * n];
                for (int k = 0; k < n; ++k) out[k] = (out[k] + mul_mod(ab, sk[k], p)) % p;
            }
        }
        return out;
    }

    std::vector<std::int64_t> power(std::vector<std::int64_t> x, std::uint64_t e) const {
        std::vector<std::int64_t> acc = unit_;
        while (e) {
            if (e & 1) acc = mul(acc, x);
            x = mul(x, x);
            e >>= 1;
        }
        return acc;
    }

    std::vector<std::int64_t> unit_;

    void set_unit(const RatMatrix& basis) {
        std::vector<Rat> e(n, Rat(0));
        e[0] = 1;
        std::vector<Rat> c = solve_row(basis, e);
        if (!is_integral(c)) throw OrderError("basis does not contain 1");
        unit_.assign(n, 0);
        for (int k = 0; k < n; ++k) unit_[k] = mod_floor(Int(c[k].get_num() % Int(static_cast<long>(p))).get_si(), p);
    }

    std::vector<std::int64_t> basis_vector(int i) const {
        std::vector<std::int64_t> v(n, 0);
        v[i] = 1;
        return v;
    }

    // Matrix (rows = images of basis vectors) of the Frobenius power x -> x^e.
    std::vector<std::vector<std::int64_t>> power_map(std::uint64_t e) const {
        std::vector<std::vector<std::int64_t>> rows;
        for (int i = 0; i < n; ++i) rows.push_back(power(basis_vector(i), e));
        return rows;
    }
};

std::vector<std::vector<std::int64_t>> left_kernel(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols,
                                                   std::int64_t p) {
    // {v : sum_i v_i rows[i] = 0}
    std::vector<std::vector<std::int64_t>> t(cols, std::vector<std::int64_t>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < cols; ++k) t[k][i] = rows[i][k];
    return kernel_mod_p(t, rows.size(), p);
}

std::uint64_t radical_exponent(int n, std::int64_t p) {
    std::uint64_t q = static_cast<std::uint64_t>(p);
    while (q < static_cast<std::uint64_t>(n)) q *= static_cast<std::uint64_t>(p);
    return q;
}

// Radical of O/pO as F_p-vectors in B-coordinates.
std::vector<std::vector<std::int64_t>> radical_mod_p(const ResidueRing& r) {
    return left_kernel(r.power_map(radical_exponent(r.n, r.p)), r.n, r.p);
}

// HNF basis (B-coordinates) of the lattice spanned by lifts of `vecs` and pO.
IntMatrix lift_with_p(const std::vector<std::vector<std::int64_t>>& vecs, int n, std::int64_t p) {
    IntMatrix gens(vecs.size() + n, n);
    for (std::size_t i = 0; i < vecs.size(); ++i)
        for (int k = 0; k < n; ++k) gens(i, k) = static_cast<long>(vecs[i][k]);
    for (int k = 0; k < n; ++k) gens(vecs.size() + k, k) = static_cast<long>(p);
    return hermite_normal_form(gens);
}

// One idealizer step; returns the number k with [O':O] = p^k and the new basis.
std::pair<int, RatMatrix> idealizer_step(const OrderData& o, const RatMatrix& basis, std::int64_t p) {
    ResidueRing ring(o, basis, p);
    ring.set_unit(basis);
    const int n = o.n;
    IntMatrix I = lift_with_p(radical_mod_p(ring), n, p);
    RatMatrix Iinv = inverse(to_rational(I));

    // x -> (x * iota_k in I-coordinates mod p)_k, for x = b_i
    std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n * n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            std::vector<Int> prod(n, Int(0));
            for (int l = 0; l < n; ++l) {
                if (I(k, l) == 0) continue;
                for (int m = 0; m < n; ++m) prod[m] += I(k, l) * ring.S[i][l][m];
            }
            for (int m = 0; m < n; ++m) {
                Rat c = 0;
                for (int l = 0; l < n; ++l) c += prod[l] * Iinv(l, m);
                if (c.get_den() != 1) throw OrderError("radical is not an ideal");
                Int r = c.get_num() % Int(static_cast<long>(p));
                rows[i][k * n + m] = mod_floor(r.get_si(), p);
            }
        }
    auto ker = left_kernel(rows, n * n, p);
    if (ker.empty()) return {0, basis};
    IntMatrix U = lift_with_p(ker, n, p);
    RatMatrix next = to_rational(U) * basis;
    for (std::size_t i = 0; i < next.rows(); ++i)
        for (std::size_t j = 0; j < next.cols(); ++j) next(i, j) /= static_cast<long>(p);
    return {static_cast<int>(ker.size()), lattice_basis(next)};
}

}  // namespace

OrderData build_order(const IntPoly& chi) {
    auto cert = is_irreducible(chi);
    if (cert.status != Irreducibility::irreducible)
        throw OrderError(cert.status == Irreducibility::reducible ? "reducible polynomial: " + chi.to_string()
                                                                  : "irreducibility not certified: " + chi.to_string());
    OrderData o{chi, chi.degree(), {}, {}, 0, {}, companion_matrix(chi)};
    const int n = o.n;
    std::vector<std::vector<Int>> pw;
    for (int m = 0; m <= 3 * n - 2; ++m) {
        std::vector<Int> v(m + 1, Int(0));
        v[m] = 1;
        pw.push_back(reduce_power_basis(v, chi));
    }
    o.mult_table.assign(n, IntMatrix(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) o.mult_table[i](j, k) = pw[i + j][k];
    o.trace_gram = IntMatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Int t = 0;
            for (int k = 0; k < n; ++k) t += pw[i + j + k][k];
            o.trace_gram(i, j) = t;
        }
    o.disc = determinant(o.trace_gram);
    o.dual_basis = inverse(to_rational(o.trace_gram));
    return o;
}

std::vector<Rat> multiply(const OrderData& o, const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::vector<Rat> out(o.n, Rat(0));
    for (int i = 0; i < o.n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < o.n; ++j) {
            if (b[j] == 0) continue;
            Rat ab = a[i] * b[j];
            for (int k = 0; k < o.n; ++k)
                if (o.mult_table[i](j, k) != 0) out[k] += ab * o.mult_table[i](j, k);
        }
    }
    return out;
}

RatMatrix multiplication_matrix(const OrderData& o, const std::vector<Rat>& x) {
    RatMatrix m(o.n, o.n);
    for (int i = 0; i < o.n; ++i) {
        std::vector<Rat> e(o.n, Rat(0));
        e[i] = 1;
        std::vector<Rat> r = multiply(o, e, x);
        for (int k = 0; k < o.n; ++k) m(i, k) = r[k];
    }
    return m;
}

RatMatrix multiplication_in_basis(const OrderData& o, const RatMatrix& basis, const std::vector<Rat>& x) {
    return basis * multiplication_matrix(o, x) * inverse(basis);
}

std::vector<Rat> gamma_element(const OrderData& o) {
    std::vector<Rat> g(o.n, Rat(0));
    if (o.n == 1)
        g[0] = -o.poly[0];
    else
        g[1] = 1;
    return g;
}

Rat trace(const OrderData& o, const std::vector<Rat>& x) {
    RatMatrix m = multiplication_matrix(o, x);
    Rat t = 0;
    for (int i = 0; i < o.n; ++i) t += m(i, i);
    return t;
}

Rat norm(const OrderData& o, const std::vector<Rat>& x) { return determinant(multiplication_matrix(o, x)); }

bool dual_contains_check(const OrderData& o) {
    for (int i = 0; i < o.n; ++i) {
        std::vector<Rat> e(o.n, Rat(0));
        e[i] = 1;
        if (!is_integral(solve_row(o.dual_basis, e))) return false;
    }
    return true;
}

bool is_order(const OrderData& o, const RatMatrix& basis) {
    std::vector<Rat> e(o.n, Rat(0));
    e[0] = 1;
    if (!is_integral(solve_row(basis, e))) return false;
    for (int i = 0; i < o.n; ++i)
        for (int j = i; j < o.n; ++j)
            if (!is_integral(solve_row(basis, multiply(o, basis.row(i), basis.row(j))))) return false;
    return true;
}

MaximalizationResult p_maximal_overorder(const OrderData& o, const RatMatrix& order_basis, const Int& p) {
    if (o.n > 4) throw OrderError("unsupported degree " + std::to_string(o.n) + " for p-maximalization");
    const std::int64_t q = small_prime(p);
    MaximalizationResult res{p, 0, lattice_basis(order_basis)};
    for (;;) {
        auto [k, next] = idealizer_step(o, res.overorder_basis, q);
        if (k == 0) break;
        res.s_p += k;
        res.overorder_basis = next;
    }
    return res;
}

MaximalizationResult p_maximal_order(const OrderData& o, const Int& p) {
    return p_maximal_overorder(o, RatMatrix::identity(o.n), p);
}

RatMatrix p_radical(const OrderData& o, const RatMatrix& order_basis, const Int& p) {
    const std::int64_t q = small_prime(p);
    ResidueRing ring(o, order_basis, q);
    ring.set_unit(order_basis);
    IntMatrix I = lift_with_p(radical_mod_p(ring), o.n, q);
    return lattice_basis(to_rational(I) * order_basis);
}

std::vector<int> residue_degrees(const OrderData& o, const RatMatrix& maximal_basis, const Int& p) {
    const std::int64_t q = small_prime(p);
    const int n = o.n;
    ResidueRing ring(o, maximal_basis, q);
    ring.set_unit(maximal_basis);
    auto rad = radical_mod_p(ring);
    auto frob = ring.power_map(static_cast<std::uint64_t>(q));

    // g[k] = dim of the fixed space of Frob^k on the semisimple quotient
    std::vector<int> g(n + 1, 0);
    std::vector<std::vector<std::int64_t>> fk(n);
    for (int i = 0; i < n; ++i) fk[i] = ring.basis_vector(i);
    for (int k = 1; k <= n; ++k) {
        // fk <- fk composed with frob (images of basis vectors under Frob^k)
        for (int i = 0; i < n; ++i) {
            std::vector<std::int64_t> img(n, 0);
            for (int l = 0; l < n; ++l) {
                if (fk[i][l] == 0) continue;
                for (int m = 0; m < n; ++m) img[m] = (img[m] + mul_mod(fk[i][l], frob[l][m], q)) % q;
            }
            fk[i] = img;
        }
        std::vector<std::vector<std::int64_t>> rows = rad;
        for (int i = 0; i < n; ++i) {
            std::vector<std::int64_t> d = fk[i];
            d[i] = mod_floor(d[i] - 1, q);
            rows.push_back(d);
        }
        g[k] = n - static_cast<int>(rank_mod_p(rows, q));
    }
    // g(k) = sum_{e | k} phi(e) b(e), b(e) = #{w : e | f_w}
    auto phi = [](int e) {
        int r = 0;
        for (int i = 1; i <= e; ++i)
            if (std::gcd(i, e) == 1) ++r;
        return r;
    };
    std::vector<int> b(n + 1, 0);
    for (int k = 1; k <= n; ++k) {
        int s = g[k];
        for (int e = 1; e < k; ++e)
            if (k % e == 0) s -= phi(e) * b[e];
        b[k] = s / phi(k);
    }
    auto mobius = [](int m) {
        int r = 1;
        for (int d = 2; d * d <= m; ++d)
            if (m % d == 0) {
                m /= d;
                if (m % d == 0) return 0;
                r = -r;
            }
        if (m > 1) r = -r;
        return r;
    };
    std::vector<int> out;
    for (int f = 1; f <= n; ++f) {
        int a = 0;
        for (int m = 1; f * m <= n; ++m) a += mobius(m) * b[f * m];
        for (int i = 0; i < a; ++i) out.push_back(f);
    }
    return out;
}

GlobalIndex global_index(const OrderData& o) {
    GlobalIndex gi;
    Factorization f = factor_integer(abs(o.disc));
    for (const auto& [p, e] : f.factors) {
        if (e < 2) continue;
        int s = p_maximal_order(o, p).s_p;
        gi.per_prime.emplace_back(p, s);
        for (int i = 0; i < s; ++i) gi.index *= p;
    }
    if (!f.complete()) {
        gi.complete = false;
        gi.unfactored = f.unfactored;
    }
    return gi;
}

}  // namespace orbcount
