#include "orbcount/lattice.hpp"
#include "lattice_internal.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace orbcount {

using namespace detail;

namespace detail {


Int ipow(const Int& p, int e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

i64 small(const Int& p) {
    if (!p.fits_slong_p() || p > 1000000) throw LatticeError("prime too large for enumeration: " + to_string(p));
    if (p < 2 || !is_probable_prime(p)) throw LatticeError("not a prime: " + to_string(p));
    return p.get_si();
}

// HNF of the span of `rows` together with modulus * Z^n.
IntMatrix hnf_mod(const std::vector<Vec>& rows, std::size_t n, const Int& modulus) {
    IntMatrix g(rows.size() + n, n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = mod_pos(rows[i][j], modulus);
    for (std::size_t j = 0; j < n; ++j) g(rows.size() + j, j) = modulus;
    return hermite_normal_form(g);
}

std::vector<Vec> rows_of(const IntMatrix& m) {
    std::vector<Vec> r;
    for (std::size_t i = 0; i < m.rows(); ++i) r.push_back(m.row(i));
    return r;
}

Vec row_times(const Vec& v, const IntMatrix& m) {
    Vec out(m.cols(), Int(0));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

std::string key_of(const IntMatrix& m) {
    std::string s;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s += m(i, j).get_str(36);
            s += ',';
        }
    return s;
}

// Membership in a full-rank upper-triangular HNF lattice.
bool in_lattice(const IntMatrix& h, Vec v) {
    for (std::size_t i = 0; i < h.rows(); ++i) {
        if (v[i] == 0) continue;
        if (v[i] % h(i, i) != 0) return false;
        Int c = v[i] / h(i, i);
        for (std::size_t j = i; j < h.cols(); ++j) v[j] -= c * h(i, j);
    }
    return true;
}

Int colength(const IntMatrix& h) {
    Int d = 1;
    for (std::size_t i = 0; i < h.rows(); ++i) d *= h(i, i);
    return d;
}

IntMatrix to_integer(const RatMatrix& m, const char* what) {
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j).get_den() != 1) throw LatticeError(std::string("non-integral ") + what);
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

// Action of A on the lattice with basis H, in H-coordinates.
IntMatrix action_on(const IntMatrix& h, const IntMatrix& a) {
    RatMatrix hr = to_rational(h);
    return to_integer(hr * to_rational(a) * inverse(hr), "action on sublattice");
}

// ---------------------------------------------------------------------------
// F_p helpers


ModMat reduce_mat(const IntMatrix& m, i64 p) {
    ModMat r(m.rows(), std::vector<i64>(m.cols()));
    const Int P = static_cast<long>(p);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = mod_pos(m(i, j), P).get_si();
    return r;
}

std::vector<i64> vec_mat(const std::vector<i64>& v, const ModMat& a, i64 p) {
    std::vector<i64> out(a[0].size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = (out[j] + mul_mod(v[i], a[i][j], p)) % p;
    }
    return out;
}

i64 det_mod(ModMat a, i64 p) {
    const std::size_t n = a.size();
    i64 det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = mod_floor(-det, p);
        }
        det = mul_mod(det, a[c][c], p);
        const i64 inv = inv_mod(a[c][c], p);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            const i64 f = mul_mod(a[r][c], inv, p);
            for (std::size_t k = c; k < n; ++k) a[r][k] = mod_floor(a[r][k] - mul_mod(f, a[c][k], p), p);
        }
    }
    return det;
}

// All subspaces of F_p^n (as RREF row lists) invariant under a.
std::vector<ModMat> invariant_subspaces(const ModMat& a, std::size_t n, i64 p) {
    std::vector<ModMat> out;
    std::uint64_t work = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        // pivot column sets of size k
        std::vector<int> piv(k);
        std::iota(piv.begin(), piv.end(), 0);
        for (;;) {
            std::vector<std::pair<std::size_t, std::size_t>> free;
            std::vector<bool> is_piv(n, false);
            for (int c : piv) is_piv[c] = true;
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t c = piv[r] + 1; c < n; ++c)
                    if (!is_piv[c]) free.emplace_back(r, c);
            std::vector<i64> vals(free.size(), 0);
            for (;;) {
                if (++work > 20000000) throw LatticeError("invariant subspace enumeration budget exceeded");
                ModMat w(k, std::vector<i64>(n, 0));
                for (std::size_t r = 0; r < k; ++r) w[r][piv[r]] = 1;
                for (std::size_t f = 0; f < free.size(); ++f) w[free[f].first][free[f].second] = vals[f];
                bool ok = true;
                for (std::size_t r = 0; r < k && ok; ++r) {
                    ModMat ext = w;
                    ext.push_back(vec_mat(w[r], a, p));
                    ok = rank_mod_p(ext, p) == k;
                }
                if (ok) out.push_back(w);
                std::size_t f = 0;
                while (f < vals.size() && ++vals[f] == p) vals[f++] = 0;
                if (f == vals.size()) break;
            }
            // next combination
            int i = static_cast<int>(k) - 1;
            while (i >= 0 && piv[i] == static_cast<int>(n - k) + i) --i;
            if (i < 0) break;
            ++piv[i];
            for (std::size_t j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

LocalModel make_local_model(const OrderData& o, const Int& p, int j_max, Ambient ambient) {
    small(p);
    if (j_max < 0) throw LatticeError("negative colength bound");
    LocalModel m;
    m.p = p;
    m.ambient = ambient;
    m.j_max = j_max;
    auto maximal = p_maximal_order(o, p);
    m.s_p = maximal.s_p;
    m.precision = 2 * m.s_p + j_max + 2;
    switch (ambient) {
        case Ambient::order: m.basis = RatMatrix::identity(o.n); break;
        case Ambient::dual: m.basis = o.dual_basis; break;
        case Ambient::maximal: m.basis = maximal.overorder_basis; break;
    }
    m.gamma = to_integer(multiplication_in_basis(o, m.basis, gamma_element(o)), "gamma action");
    const Int mod = ipow(p, m.precision);
    m.gamma_mod = m.gamma;
    for (std::size_t i = 0; i < m.gamma.rows(); ++i)
        for (std::size_t j = 0; j < m.gamma.cols(); ++j) m.gamma_mod(i, j) = mod_pos(m.gamma(i, j), mod);
    return m;
}

std::vector<std::vector<IntMatrix>> enumerate_stable_sublattices_upto(const LocalModel& m, int j_max) {
    if (j_max > m.precision - 2 * m.s_p - 2)
        throw LatticeError("precision exhausted: colength " + std::to_string(j_max) + " needs precision " +
                           std::to_string(2 * m.s_p + j_max + 2));
    const i64 p = m.p.get_si();
    const std::size_t n = m.gamma.rows();
    const Int mod = ipow(m.p, m.precision);
    std::vector<std::vector<IntMatrix>> levels(j_max + 1);
    std::set<std::string> seen;
    IntMatrix top = hnf_mod(rows_of(IntMatrix::identity(n)), n, mod);
    levels[0].push_back(top);
    seen.insert(key_of(top));
    for (int j = 0; j < j_max; ++j) {
        for (const IntMatrix& h : levels[j]) {
            ModMat abar = reduce_mat(action_on(h, m.gamma_mod), p);
            for (const ModMat& w : invariant_subspaces(abar, n, p)) {
                const int codim = static_cast<int>(n - w.size());
                if (codim == 0 || j + codim > j_max) continue;
                std::vector<Vec> gens;
                for (const auto& row : w) {
                    Vec v(n, Int(0));
                    for (std::size_t i = 0; i < n; ++i)
                        if (row[i]) v = [&] {
                                Vec acc = v;
                                for (std::size_t c = 0; c < n; ++c) acc[c] += Int(static_cast<long>(row[i])) * h(i, c);
                                return acc;
                            }();
                    gens.push_back(v);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    Vec v = h.row(i);
                    for (auto& x : v) x *= p;
                    gens.push_back(v);
                }
                IntMatrix child = hnf_mod(gens, n, mod);
                if (seen.insert(key_of(child)).second) levels[j + codim].push_back(child);
            }
        }
        std::sort(levels[j + 1].begin(), levels[j + 1].end(),
                  [](const IntMatrix& a, const IntMatrix& b) { return key_of(a) < key_of(b); });
    }
    return levels;
}

std::vector<IntMatrix> enumerate_stable_sublattices(const LocalModel& m, int j) {
    return enumerate_stable_sublattices_upto(m, j)[j];
}

LocalZeta local_zeta(const OrderData& o, const Int& p, std::optional<int> j_max_opt) {
    small(p);
    auto maximal = p_maximal_order(o, p);
    const int s = maximal.s_p;
    const int j_max = j_max_opt.value_or(2 * s + o.n);
    if (j_max < 2 * s + 1)
        throw LatticeError("J~ cannot be certified: need colength bound at least " + std::to_string(2 * s + 1));
    LocalModel m = make_local_model(o, p, j_max, Ambient::dual);
    auto levels = enumerate_stable_sublattices_upto(m, j_max);

    LocalZeta z;
    z.p = p;
    z.q = p;
    z.s_p = s;
    z.residue_degrees = residue_degrees(o, maximal.overorder_basis, p);
    for (const auto& lv : levels) z.J_coeffs.emplace_back(static_cast<long>(lv.size()));
    if (z.J_coeffs[0] != 1) throw LatticeError("c_0 != 1");

    // multiply by prod (1 - u^{f_w})
    std::vector<Int> prod = z.J_coeffs;
    for (int f : z.residue_degrees)
        for (int i = j_max; i >= f; --i) prod[i] -= prod[i - f];
    for (int i = 2 * s + 1; i <= j_max; ++i)
        if (prod[i] != 0)
            throw LatticeError("J~ did not stabilize within colength " + std::to_string(j_max) + "; raise precision");
    prod.resize(2 * s + 1);
    z.J_tilde_coeffs = prod;
    z.J_tilde_offset = -s;
    Rat value = 0;
    for (int i = 0; i <= 2 * s; ++i) value += Rat(prod[i]) * Rat(ipow(p, s)) / Rat(ipow(p, i));
    value.canonicalize();
    if (value.get_den() != 1) throw LatticeError("orbital value is not an integer");
    z.orbital_value = value.get_num();
    return z;
}

// ---------------------------------------------------------------------------
// Window enumeration inside O_{K,p}

LocalOrder make_local_order(const OrderData& o, const Int& p) {
    small(p);
    LocalOrder lo;
    lo.p = p;
    lo.n = o.n;
    auto maximal = p_maximal_order(o, p);
    lo.s_p = maximal.s_p;
    lo.basis = maximal.overorder_basis;
    for (int i = 0; i < o.n; ++i)
        lo.mult.push_back(to_integer(multiplication_in_basis(o, lo.basis, lo.basis.row(i)), "structure constants"));
    lo.gamma = to_integer(multiplication_in_basis(o, lo.basis, gamma_element(o)), "gamma action");
    lo.residue_degrees = residue_degrees(o, lo.basis, p);
    return lo;
}

namespace detail {

IntMatrix mult_matrix(const LocalOrder& lo, const Vec& x) {
    IntMatrix m(lo.n, lo.n);
    for (int i = 0; i < lo.n; ++i) {
        if (x[i] == 0) continue;
        for (int r = 0; r < lo.n; ++r)
            for (int c = 0; c < lo.n; ++c) m(r, c) += x[i] * lo.mult[i](r, c);
    }
    return m;
}

i64 norm_mod_p(const LocalOrder& lo, const std::vector<i64>& x, i64 p) {
    Vec v(x.begin(), x.end());
    return det_mod(reduce_mat(mult_matrix(lo, v), p), p);
}

// Closure of the rows under right multiplication by the generators.
IntMatrix closure(std::vector<Vec> rows, const std::vector<IntMatrix>& gens, std::size_t n, const Int& mod) {
    IntMatrix h = hnf_mod(rows, n, mod);
    for (;;) {
        std::vector<Vec> more = rows_of(h);
        for (const IntMatrix& g : gens)
            for (std::size_t i = 0; i < h.rows(); ++i) more.push_back(row_times(h.row(i), g));
        IntMatrix next = hnf_mod(more, n, mod);
        if (next == h) return h;
        h = next;
    }
}

// {v in Z^n : p v in L}
IntMatrix p_saturation(const IntMatrix& h, const Int& p) {
    const std::size_t n = h.rows();
    RatMatrix inv_t = inverse(to_rational(h)).transpose();
    RatMatrix gens(2 * n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) gens(i, j) = inv_t(i, j) * Rat(p);
        gens(n + i, i) = 1;
    }
    RatMatrix dual = lattice_basis(gens);
    return hermite_normal_form(to_integer(inverse(dual).transpose(), "saturation"));
}

bool is_normalized(const LocalOrder& lo, const IntMatrix& h, const Int& mod) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (const IntMatrix& m : lo.mult) rows.push_back(row_times(h.row(i), m));
    return hnf_mod(rows, lo.n, mod) == IntMatrix::identity(lo.n);
}

}  // namespace detail

std::vector<IntMatrix> normalized_stable_lattices(const LocalOrder& lo, int depth, const std::vector<IntMatrix>& extra) {
    const i64 p = small(lo.p);
    const std::size_t n = lo.n;
    const Int mod = ipow(lo.p, depth);
    std::vector<IntMatrix> gens{lo.gamma};
    gens.insert(gens.end(), extra.begin(), extra.end());

    IntMatrix bottom = hnf_mod({}, n, mod);
    std::map<std::string, IntMatrix> found{{key_of(bottom), bottom}};
    std::vector<IntMatrix> queue{bottom};
    std::uint64_t work = 0;
    while (!queue.empty()) {
        IntMatrix s = queue.back();
        queue.pop_back();
        IntMatrix sat = p_saturation(s, lo.p);
        // coefficient vectors with first nonzero entry 1
        std::vector<i64> c(n, 0);
        for (;;) {
            std::size_t k = 0;
            while (k < n && ++c[k] == p) c[k++] = 0;
            if (k == n) break;
            std::size_t lead = 0;
            while (lead < n && c[lead] == 0) ++lead;
            if (c[lead] != 1) continue;
            Vec v(n, Int(0));
            for (std::size_t i = 0; i < n; ++i)
                if (c[i])
                    for (std::size_t j = 0; j < n; ++j) v[j] += Int(static_cast<long>(c[i])) * sat(i, j);
            if (in_lattice(s, v)) continue;
            if (++work > 5000000) throw LatticeError("window enumeration budget exceeded");
            std::vector<Vec> rows = rows_of(s);
            rows.push_back(v);
            IntMatrix t = closure(rows, gens, n, mod);
            if (found.emplace(key_of(t), t).second) queue.push_back(t);
        }
    }
    std::vector<IntMatrix> out;
    for (const auto& [k, h] : found)
        if (is_normalized(lo, h, mod)) out.push_back(h);
    return out;
}

Int unit_index(const LocalOrder& lo, const IntMatrix& h, int depth) {
    const i64 p = small(lo.p);
    const std::size_t n = lo.n;
    // End(L) = {x : x * l_j in L}, as the kernel of x -> (x l_j H^{-1} mod 1)_j
    RatMatrix hinv = inverse(to_rational(h));
    const std::size_t w = n * n;
    RatMatrix c(n, w);
    for (std::size_t j = 0; j < n; ++j) {
        // row i: l_j * b_i
        IntMatrix nj(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            Vec r = row_times(h.row(j), lo.mult[i]);
            for (std::size_t k = 0; k < n; ++k) nj(i, k) = r[k];
        }
        RatMatrix block = to_rational(nj) * hinv;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) c(i, j * n + k) = block(i, k);
    }
    Int den = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < w; ++k) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c(i, k).get_den_mpz_t());
    IntMatrix g(n + w, w + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < w; ++k) g(i, k) = Rat(c(i, k) * den).get_num();
        g(i, w + i) = 1;
    }
    for (std::size_t k = 0; k < w; ++k) g(n + k, k) = den;
    IntMatrix hg = hermite_normal_form(g);
    IntMatrix end(n, n);
    std::size_t r = 0;
    for (std::size_t i = 0; i < hg.rows(); ++i) {
        bool zero = true;
        for (std::size_t k = 0; k < w; ++k) zero = zero && hg(i, k) == 0;
        if (!zero) continue;
        for (std::size_t k = 0; k < n; ++k) end(r, k) = hg(i, w + k);
        ++r;
    }
    if (r != n) throw LatticeError("multiplier ring has wrong rank");
    (void)depth;

    // unit fractions of O/pO and of the image of End(L) in O/pO
    auto unit_fraction = [&](const ModMat& span) -> Rat {
        ModMat basis;
        for (const auto& row : span) {
            ModMat ext = basis;
            ext.push_back(row);
            if (rank_mod_p(ext, p) > basis.size()) basis.push_back(row);
        }
        const std::size_t dim = basis.size();
        std::vector<i64> coef(dim, 0);
        i64 units = 0, total = 0;
        for (;;) {
            std::vector<i64> x(n, 0);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < n; ++j) x[j] = (x[j] + mul_mod(coef[i], basis[i][j], p)) % p;
            ++total;
            if (norm_mod_p(lo, x, p) != 0) ++units;
            std::size_t k = 0;
            while (k < dim && ++coef[k] == p) coef[k++] = 0;
            if (k == dim) break;
        }
        return Rat(Int(static_cast<long>(units)), Int(static_cast<long>(total)));
    };
    Rat f_o = unit_fraction(reduce_mat(IntMatrix::identity(n), p));
    Rat f_e = unit_fraction(reduce_mat(end, p));
    Rat idx = Rat(abs(determinant(end))) * f_o / f_e;
    idx.canonicalize();
    if (idx.get_den() != 1) throw LatticeError("unit index is not an integer");
    return idx.get_num();
}

namespace detail {

Vec one_coordinates(const LocalOrder& lo) {
    std::vector<Rat> e0(lo.n, Rat(0));
    e0[0] = 1;
    Vec out;
    for (const Rat& c : solve_row(lo.basis, e0)) out.push_back(c.get_num());
    return out;
}

// Generators of (O / p^depth O)^x: a generating set of (O/pO)^x plus 1 + p^i b_j.
std::vector<IntMatrix> unit_generators(const LocalOrder& lo, int depth) {
    const i64 p = lo.p.get_si();
    const std::size_t n = lo.n;
    std::vector<std::vector<i64>> all_units;
    std::vector<i64> c(n, 0);
    for (;;) {
        if (norm_mod_p(lo, c, p) != 0) all_units.push_back(c);
        std::size_t k = 0;
        while (k < n && ++c[k] == p) c[k++] = 0;
        if (k == n) break;
    }
    auto mul = [&](const std::vector<i64>& a, const std::vector<i64>& b) {
        Vec av(a.begin(), a.end());
        Vec r = row_times(Vec(b.begin(), b.end()), mult_matrix(lo, av));
        std::vector<i64> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = mod_pos(r[i], Int(static_cast<long>(p))).get_si();
        return out;
    };
    const Vec one_coords = one_coordinates(lo);
    std::vector<i64> one(n);
    for (std::size_t i = 0; i < n; ++i) one[i] = mod_pos(one_coords[i], Int(static_cast<long>(p))).get_si();
    std::set<std::vector<i64>> group{one};
    std::vector<std::vector<i64>> chosen;
    std::vector<IntMatrix> gens;
    for (const auto& u : all_units) {
        if (group.count(u)) continue;
        chosen.push_back(u);
        gens.push_back(mult_matrix(lo, Vec(u.begin(), u.end())));
        std::vector<std::vector<i64>> frontier{one};
        group = {one};
        while (!frontier.empty()) {
            std::vector<std::vector<i64>> next;
            for (const auto& g : frontier)
                for (const auto& c : chosen) {
                    auto h = mul(g, c);
                    if (group.insert(h).second) next.push_back(h);
                }
            frontier = std::move(next);
        }
    }
    Int pk = lo.p;
    for (int i = 1; i < depth; ++i, pk *= lo.p)
        for (std::size_t j = 0; j < n; ++j) {
            Vec x(n);
            for (std::size_t k = 0; k < n; ++k) x[k] = one_coords[k];
            x[j] += pk;
            gens.push_back(mult_matrix(lo, x));
        }
    return gens;
}

struct ClassData {
    std::vector<IntMatrix> lattices;
    std::vector<int> class_of;
    std::vector<int> reps;
};

ClassData group_into_classes(const LocalOrder& lo, const std::vector<IntMatrix>& lattices, int depth) {
    const Int mod = ipow(lo.p, depth);
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < lattices.size(); ++i) index[key_of(lattices[i])] = static_cast<int>(i);
    std::vector<int> parent(lattices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto gens = unit_generators(lo, depth);
    for (std::size_t i = 0; i < lattices.size(); ++i)
        for (const IntMatrix& g : gens) {
            std::vector<Vec> rows;
            for (std::size_t r = 0; r < lattices[i].rows(); ++r) rows.push_back(row_times(lattices[i].row(r), g));
            auto it = index.find(key_of(hnf_mod(rows, lo.n, mod)));
            if (it == index.end()) throw LatticeError("unit action left the lattice set");
            parent[find(static_cast<int>(i))] = find(it->second);
        }
    ClassData cd{lattices, std::vector<int>(lattices.size()), {}};
    std::map<int, int> root_to_class;
    for (std::size_t i = 0; i < lattices.size(); ++i) {
        int r = find(static_cast<int>(i));
        auto [it, inserted] = root_to_class.emplace(r, static_cast<int>(cd.reps.size()));
        if (inserted) cd.reps.push_back(static_cast<int>(i));
        cd.class_of[i] = it->second;
    }
    return cd;
}

int valuation_of(const Int& v, const Int& p) { return valuation(v, p); }

CosetOrbital coset_at_depth(const LocalOrder& lo, int depth) {
    auto lattices = normalized_stable_lattices(lo, depth);
    ClassData cd = group_into_classes(lo, lattices, depth);
    CosetOrbital r;
    r.value = 0;
    r.depth = depth;
    r.lattices = static_cast<int>(lattices.size());
    r.classes = static_cast<int>(cd.reps.size());
    for (int rep : cd.reps) r.value += unit_index(lo, lattices[rep], depth);
    return r;
}

}  // namespace detail

CosetOrbital orbital_integral_coset(const OrderData& o, const Int& p, std::optional<int> depth_opt) {
    LocalOrder lo = make_local_order(o, p);
    const int depth = depth_opt.value_or(std::max(lo.s_p, 1));
    if (depth < 1) throw LatticeError("depth must be positive");
    CosetOrbital a = coset_at_depth(lo, depth);
    CosetOrbital b = coset_at_depth(lo, depth + 1);
    if (a.value != b.value || a.classes != b.classes)
        throw LatticeError("depth too small: class enumeration has not closed at depth " + std::to_string(depth));
    return a;
}

namespace detail {

// Sums of epsilon over the norms of (O/p^c)^x and over (Z/p^c)^x.
std::pair<Cyclotomic, Cyclotomic> ramified_twist_sums(const LocalOrder& lo, const TwistData& t) {
    const i64 p = lo.p.get_si();
    const int d = t.order;
    int c = 1;
    i64 gen = 0;
    if (d < 2) throw LatticeError("a ramified character has order at least 2");
    if (p == 2) {
        if (d != 2) throw LatticeError("ramified twists at 2 are supported for order 2 only");
        c = 2;
    } else {
        if ((p - 1) % d != 0) throw LatticeError("no ramified character of order " + std::to_string(d) + " at this prime");
        for (gen = 2; gen < p; ++gen) {
            bool ok = true;
            for (i64 q = 2; q <= p - 1 && ok; ++q)
                if ((p - 1) % q == 0 && is_probable_prime(Int(static_cast<long>(q))) && pow_mod(gen, (p - 1) / q, p) == 1)
                    ok = false;
            if (ok) break;
        }
    }
    const i64 mod = c == 2 ? 4 : p;
    // discrete log table for the character
    std::vector<long> dlog(mod, -1);
    if (p == 2) {
        dlog[1] = 0;
        dlog[3] = 1;
    } else {
        i64 x = 1;
        for (i64 k = 0; k < p - 1; ++k, x = x * gen % p) dlog[x] = static_cast<long>(k * d / (p - 1));
    }
    const std::size_t n = lo.n;
    Cyclotomic sum(d);
    std::vector<i64> cvec(n, 0);
    for (;;) {
        Vec v(cvec.begin(), cvec.end());
        IntMatrix m = mult_matrix(lo, v);
        Int nm = mod_pos(determinant(m), Int(static_cast<long>(mod)));
        const i64 r = nm.get_si();
        if (r % p != 0) sum += Cyclotomic::zeta_power(d, dlog[r]);
        std::size_t k = 0;
        while (k < n && ++cvec[k] == mod) cvec[k++] = 0;
        if (k == n) break;
    }
    Cyclotomic units(d);
    for (i64 a = 1; a < mod; ++a)
        if (a % p != 0) units += Cyclotomic::zeta_power(d, dlog[a]);
    return {sum, units};
}

}  // namespace detail

Cyclotomic twisted_orbital_integral(const OrderData& o, const Int& p, const TwistData& t, std::optional<int> depth_opt) {
    if (t.order < 1) throw LatticeError("twist order must be positive");
    LocalOrder lo = make_local_order(o, p);
    if (t.ramified) {
        // epsilon(det) integrates to zero over every coset g GL_n(Z_p); the
        // torus sum is reported first since it already kills each orbit.
        auto [torus, det] = ramified_twist_sums(lo, t);
        if (torus.is_zero() || det.is_zero()) return Cyclotomic(t.order);
        throw LatticeError("ramified character sum does not vanish");
    }
    for (int f : lo.residue_degrees)
        if (f % t.order != 0)
            throw LatticeError("unramified character of order " + std::to_string(t.order) +
                               " is not trivial on norms (residue degree " + std::to_string(f) + ")");
    const int depth = depth_opt.value_or(std::max(lo.s_p, 1));
    auto at = [&](int dep) {
        auto lattices = normalized_stable_lattices(lo, dep);
        ClassData cd = group_into_classes(lo, lattices, dep);
        Cyclotomic acc(t.order);
        for (int rep : cd.reps) {
            const int j = valuation_of(colength(lattices[rep]), lo.p);
            acc += Cyclotomic(t.order, unit_index(lo, lattices[rep], dep)) * Cyclotomic::zeta_power(t.order, j);
        }
        return acc;
    };
    Cyclotomic a = at(depth);
    if (!(a == at(depth + 1)))
        throw LatticeError("depth too small: class enumeration has not closed at depth " + std::to_string(depth));
    return a;
}

}  // namespace orbcount
