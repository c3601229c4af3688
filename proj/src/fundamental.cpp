#include <cmath>
#include <numeric>
#include <set>

#include "lattice_internal.hpp"
#include "orbcount/lattice.hpp"

namespace orbcount {

using namespace detail;

namespace {

// Arithmetic in O / p^k O on coordinate vectors.
struct ResidueOrder {
    const LocalOrder& lo;
    Int mod;

    Vec reduce(Vec v) const {
        for (auto& x : v) x = mod_pos(x, mod);
        return v;
    }
    Vec mul(const Vec& a, const Vec& b) const { return reduce(row_times(b, mult_matrix(lo, a))); }
    Vec pow(Vec a, Int e) const {
        Vec r = reduce(one_coordinates(lo));
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
            a = mul(a, a);
            e /= 2;
        }
        return r;
    }
};

struct Teichmuller {
    Vec t;                    // O-coordinates, reduced mod p^K
    std::vector<Int> minpoly; // over F_p, low-first, monic
};

// A Teichmuller generator of an unramified degree-d subalgebra, modulo p^K.
Teichmuller teichmuller(const LocalOrder& lo, int d, int K) {
    const i64 p = small(lo.p);
    const std::size_t n = lo.n;
    int l = 1;
    for (int f : lo.residue_degrees) {
        if (f % d != 0)
            throw LatticeError("no unramified degree-" + std::to_string(d) + " subalgebra: residue degree " +
                               std::to_string(f));
        l = std::lcm(l, f);
    }
    int N = l;
    while (ipow(lo.p, N) < Int(static_cast<long>(n))) N += l;
    ResidueOrder rp{lo, lo.p};
    const Int q_d = ipow(lo.p, d);
    std::vector<i64> c(n, 0);
    for (;;) {
        std::size_t k = 0;
        while (k < n && ++c[k] == p) c[k++] = 0;
        if (k == n) break;
        Vec x(c.begin(), c.end());
        Vec y = rp.pow(x, ipow(lo.p, N));
        if (rp.pow(y, q_d) != y) continue;
        // powers 1, y, ..., y^d: need y^d to be the first dependent one
        std::vector<Vec> powers{rp.reduce(one_coordinates(lo))};
        for (int i = 1; i <= d; ++i) powers.push_back(rp.mul(powers.back(), y));
        ModMat rows;
        for (int i = 0; i < d; ++i) {
            std::vector<i64> r;
            for (const auto& v : powers[i]) r.push_back(v.get_si());
            rows.push_back(r);
        }
        if (rank_mod_p(rows, p) != static_cast<std::size_t>(d)) continue;
        // F_p[y] must be a field: every nonzero element a unit
        bool field = true;
        std::vector<i64> a(d, 0);
        for (;;) {
            std::size_t j = 0;
            while (j < static_cast<std::size_t>(d) && ++a[j] == p) a[j++] = 0;
            if (j == static_cast<std::size_t>(d)) break;
            std::vector<i64> e(n, 0);
            for (int i = 0; i < d; ++i)
                for (std::size_t m = 0; m < n; ++m) e[m] = (e[m] + a[i] * rows[i][m]) % p;
            if (norm_mod_p(lo, e, p) == 0) {
                field = false;
                break;
            }
        }
        if (!field) continue;
        // minimal polynomial: y^d = sum a_i y^i
        ModMat cols(n, std::vector<i64>(d + 1));
        for (int i = 0; i <= d; ++i)
            for (std::size_t m = 0; m < n; ++m) cols[m][i] = powers[i][m].get_si();
        auto ker = kernel_mod_p(cols, d + 1, p);
        if (ker.size() != 1) continue;  // degree above d
        const i64 lead_inv = inv_mod(ker[0][d], p);
        Teichmuller tm;
        for (int i = 0; i <= d; ++i) tm.minpoly.push_back(Int(static_cast<long>(mul_mod(ker[0][i], lead_inv, p))));
        // Lift: iterate x -> x^{p^d} modulo p^K.
        ResidueOrder rk{lo, ipow(lo.p, K)};
        Vec t = rk.reduce(y);
        for (;;) {
            Vec next = rk.pow(t, q_d);
            if (next == t) break;
            t = next;
        }
        tm.t = t;
        return tm;
    }
    throw LatticeError("no unramified degree-" + std::to_string(d) + " subalgebra found");
}

std::string poly_string(const std::vector<Int>& c) {
    std::string out;
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        std::string mono = i == 0 ? "" : i == 1 ? "x" : "x^" + std::to_string(i);
        std::string term = mono.empty() ? to_string(c[i]) : (c[i] == 1 ? mono : to_string(c[i]) + "*" + mono);
        out += out.empty() ? term : " + " + term;
    }
    return out.empty() ? "0" : out;
}

// Galois ring (Z/p^k)[y]/(g), g monic of degree d.
struct GaloisRing {
    int d;
    Int mod;
    std::vector<Int> g;  // low-first, monic, size d + 1
    using El = std::vector<Int>;

    El constant(const Int& c) const {
        El r(d, Int(0));
        r[0] = mod_pos(c, mod);
        return r;
    }
    El add(const El& a, const El& b) const {
        El r(d);
        for (int i = 0; i < d; ++i) r[i] = mod_pos(a[i] + b[i], mod);
        return r;
    }
    El sub(const El& a, const El& b) const {
        El r(d);
        for (int i = 0; i < d; ++i) r[i] = mod_pos(a[i] - b[i], mod);
        return r;
    }
    El mul(const El& a, const El& b) const {
        std::vector<Int> c(2 * d, Int(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) c[i + j] += a[i] * b[j];
        for (int i = 2 * d - 1; i >= d; --i) {
            if (c[i] == 0) continue;
            Int v = c[i];
            for (int j = 0; j <= d; ++j) c[i - d + j] -= v * g[j];
        }
        El r(d);
        for (int i = 0; i < d; ++i) r[i] = mod_pos(c[i], mod);
        return r;
    }
    El pow(El a, Int e) const {
        El r = constant(1);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
            a = mul(a, a);
            e /= 2;
        }
        return r;
    }
    El generator() const {
        El r(d, Int(0));
        if (d == 1) r[0] = mod_pos(-g[0], mod);
        else r[1] = 1;
        return r;
    }
    Int unit_count(const Int& p, int k) const { return (ipow(p, d) - 1) * ipow(p, d * (k - 1)); }
    El inverse(const El& a, const Int& p, int k) const { return pow(a, unit_count(p, k) - 1); }

    El det(std::vector<std::vector<El>> m) const {
        const std::size_t n = m.size();
        if (n == 1) return m[0][0];
        El acc(d, Int(0));
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<std::vector<El>> minor;
            for (std::size_t r = 1; r < n; ++r) {
                std::vector<El> row;
                for (std::size_t k = 0; k < n; ++k)
                    if (k != c) row.push_back(m[r][k]);
                minor.push_back(row);
            }
            El term = mul(m[0][c], det(minor));
            acc = c % 2 == 0 ? add(acc, term) : sub(acc, term);
        }
        return acc;
    }
};

Int norm_index_at(const LocalOrder& lo, int d, int k) {
    const std::size_t n = lo.n;
    const Int mod = ipow(lo.p, k);
    GaloisRing gr{d, mod, {}};
    std::vector<std::vector<GaloisRing::El>> proj;  // P_1 over GR
    if (d == 1) {
        gr.g = {Int(0), Int(1)};
    } else {
        Teichmuller tm = teichmuller(lo, d, k);
        ResidueOrder rk{lo, mod};
        // g = prod_j (X - t^{p^j}), coefficients in Z_p * 1
        std::vector<Vec> poly{rk.reduce(one_coordinates(lo))};
        Vec conj = tm.t;
        for (int j = 0; j < d; ++j) {
            std::vector<Vec> next(poly.size() + 1, Vec(n, Int(0)));
            for (std::size_t i = 0; i < poly.size(); ++i) {
                Vec prod = rk.mul(poly[i], conj);
                for (std::size_t m = 0; m < n; ++m) {
                    next[i + 1][m] += poly[i][m];
                    next[i][m] -= prod[m];
                }
            }
            for (auto& v : next) v = rk.reduce(v);
            poly = next;
            conj = rk.pow(conj, lo.p);
        }
        const Vec one = one_coordinates(lo);
        std::size_t piv = 0;
        while (piv < n && one[piv] % lo.p == 0) ++piv;
        Int inv;
        mpz_invert(inv.get_mpz_t(), Int(mod_pos(one[piv], mod)).get_mpz_t(), mod.get_mpz_t());
        gr.g.clear();
        for (const Vec& v : poly) {
            Int c = mod_pos(v[piv] * inv, mod);
            for (std::size_t m = 0; m < n; ++m)
                if (mod_pos(v[m] - c * one[m], mod) != 0) throw LatticeError("Teichmuller polynomial is not rational");
            gr.g.push_back(c);
        }
        // P_1 = prod_{j>=1} (M_t - y^{p^j}) / (y - y^{p^j})
        IntMatrix mt = mult_matrix(lo, tm.t);
        const GaloisRing::El y = gr.generator();
        proj.assign(n, std::vector<GaloisRing::El>(n, gr.constant(0)));
        for (std::size_t i = 0; i < n; ++i) proj[i][i] = gr.constant(1);
        for (int j = 1; j < d; ++j) {
            GaloisRing::El yj = gr.pow(y, ipow(lo.p, j));
            GaloisRing::El scale = gr.inverse(gr.sub(y, yj), lo.p, k);
            std::vector<std::vector<GaloisRing::El>> factor(n, std::vector<GaloisRing::El>(n));
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) {
                    GaloisRing::El e = gr.constant(mt(r, c));
                    if (r == c) e = gr.sub(e, yj);
                    factor[r][c] = gr.mul(e, scale);
                }
            std::vector<std::vector<GaloisRing::El>> next(n, std::vector<GaloisRing::El>(n, gr.constant(0)));
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t m = 0; m < n; ++m)
                    for (std::size_t c = 0; c < n; ++c) next[r][c] = gr.add(next[r][c], gr.mul(proj[r][m], factor[m][c]));
            proj = next;
        }
    }

    auto norm = [&](const IntMatrix& mu) -> GaloisRing::El {
        if (d == 1) return gr.constant(determinant(mu));
        std::vector<std::vector<GaloisRing::El>> a(n, std::vector<GaloisRing::El>(n, gr.constant(0)));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                GaloisRing::El acc = gr.constant(0);
                for (std::size_t m = 0; m < n; ++m) acc = gr.add(acc, gr.mul(proj[r][m], gr.constant(mu(m, c))));
                GaloisRing::El id = gr.constant(r == c ? 1 : 0);
                a[r][c] = gr.add(acc, gr.sub(id, proj[r][c]));
            }
        return gr.det(a);
    };

    std::vector<GaloisRing::El> gens;
    for (const IntMatrix& u : unit_generators(lo, k)) gens.push_back(norm(u));
    std::set<GaloisRing::El> group{gr.constant(1)};
    std::vector<GaloisRing::El> frontier{gr.constant(1)};
    const Int total = gr.unit_count(lo.p, k);
    while (!frontier.empty()) {
        std::vector<GaloisRing::El> next;
        for (const auto& a : frontier)
            for (const auto& g : gens) {
                auto b = gr.mul(a, g);
                if (group.insert(b).second) next.push_back(b);
            }
        if (Int(static_cast<unsigned long>(group.size())) > total) throw LatticeError("norm group exceeds unit group");
        frontier = std::move(next);
    }
    const Int size = static_cast<unsigned long>(group.size());
    if (total % size != 0) throw LatticeError("norm group order does not divide unit group order");
    return total / size;
}

}  // namespace

Int norm_index(const LocalOrder& lo, int d) {
    if (d < 1) throw LatticeError("degree must be positive");
    const int k_min = lo.p == 2 ? 3 : 2;
    Int prev = norm_index_at(lo, d, k_min);
    for (int k = k_min + 1;; ++k) {
        if (ipow(lo.p, d * k) > 2000000) throw LatticeError("norm index budget exceeded before stabilizing");
        Int cur = norm_index_at(lo, d, k);
        if (cur == prev) return cur;
        prev = cur;
    }
}

FundamentalLemmaReport fundamental_lemma_check(const OrderData& o, const Int& p, int d) {
    if (d < 1) throw LatticeError("degree must be positive");
    if (o.n % d != 0) throw LatticeError("degree does not divide n");
    LocalOrder lo = make_local_order(o, p);
    FundamentalLemmaReport r;
    r.p = p;
    r.d = d;
    r.m = o.n / d;
    r.s_p = lo.s_p;
    r.disc_valuation = valuation(abs(o.disc), p);
    r.abs_delta_gamma = Rat(1) / Rat(ipow(p, r.disc_valuation));

    const int depth = std::max(lo.s_p, 1);
    const int K = lo.s_p + depth + 2;
    Teichmuller tm = teichmuller(lo, d, K);
    r.teichmuller_minpoly = poly_string(tm.minpoly);
    const IntMatrix mt = mult_matrix(lo, tm.t);

    // R_E = Z_p[t, gamma]
    const Int modK = ipow(p, K);
    std::vector<Vec> rows;
    Vec tp = one_coordinates(lo);
    for (int i = 0; i < d; ++i) {
        Vec gp = tp;
        for (int j = 0; j < r.m; ++j) {
            rows.push_back(gp);
            gp = row_times(gp, lo.gamma);
        }
        tp = row_times(tp, mt);
    }
    IntMatrix re = hnf_mod(rows, lo.n, modK);
    r.s_E = valuation(colength(re), p);
    if (r.s_E >= K) throw LatticeError("precision too small for the endoscopic order");
    const int v_K = r.disc_valuation - 2 * lo.s_p;
    r.abs_delta_gamma_E = Rat(1) / Rat(ipow(p, v_K + 2 * r.s_E));

    r.c_G_inverse = norm_index(lo, 1);
    r.c_H_inverse = norm_index(lo, d);
    r.twisted = twisted_orbital_integral(o, p, TwistData{d, false});
    auto count = [&](int dep) {
        return normalized_stable_lattices(lo, dep, {mult_matrix(lo, tm.t)}).size();
    };
    const std::size_t so = count(depth);
    if (so != count(depth + 1)) throw LatticeError("depth too small for the stable orbital integral");
    r.stable = static_cast<unsigned long>(so);

    Cyclotomic zz = r.twisted * r.twisted.conj();
    if (!zz.is_integer()) throw LatticeError("|twisted|^2 is not rational");
    r.lhs_abs_sq = r.abs_delta_gamma * Rat(r.c_G_inverse * r.c_G_inverse) * Rat(zz.integer_value());
    r.rhs_abs_sq = r.abs_delta_gamma_E * Rat(r.c_H_inverse * r.c_H_inverse) * Rat(r.stable * r.stable);
    r.lhs_abs_sq.canonicalize();
    r.rhs_abs_sq.canonicalize();
    r.lhs_abs = std::sqrt(r.lhs_abs_sq.get_d());
    r.rhs_abs = std::sqrt(r.rhs_abs_sq.get_d());
    r.equal = r.lhs_abs_sq == r.rhs_abs_sq;
    return r;
}

}  // namespace orbcount
