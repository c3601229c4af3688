#include "orbcount/arith.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace orbcount {

Int determinant(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    if (n == 0) return 1;
    IntMatrix a = m;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && a(swap, k) == 0) ++swap;
            if (swap == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = t;
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

Rat determinant(const RatMatrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    RatMatrix a = m;
    Rat det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

RatMatrix inverse(const RatMatrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    RatMatrix a = m;
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k) == 0) ++piv;
        if (piv == n) throw std::domain_error("singular matrix");
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        Rat s = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= s;
            inv(k, j) /= s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            Rat f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

IntMatrix hermite_normal_form(const IntMatrix& generators) {
    std::vector<std::vector<Int>> rows;
    for (std::size_t i = 0; i < generators.rows(); ++i) rows.push_back(generators.row(i));
    const std::size_t cols = generators.cols();
    std::size_t pivot_row = 0;
    for (std::size_t j = 0; j < cols && pivot_row < rows.size(); ++j) {
        // Euclidean elimination on column j below pivot_row.
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = pivot_row; i < rows.size(); ++i) {
                if (rows[i][j] == 0) continue;
                if (best == rows.size() || abs(rows[i][j]) < abs(rows[best][j])) best = i;
            }
            if (best == rows.size()) break;
            std::swap(rows[pivot_row], rows[best]);
            bool done = true;
            for (std::size_t i = pivot_row + 1; i < rows.size(); ++i) {
                if (rows[i][j] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][j].get_mpz_t(), rows[pivot_row][j].get_mpz_t());
                for (std::size_t c = j; c < cols; ++c) rows[i][c] -= q * rows[pivot_row][c];
                if (rows[i][j] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[pivot_row][j] == 0) continue;
        if (rows[pivot_row][j] < 0)
            for (std::size_t c = j; c < cols; ++c) rows[pivot_row][c] = -rows[pivot_row][c];
        const Int& piv = rows[pivot_row][j];
        for (std::size_t i = 0; i < pivot_row; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][j].get_mpz_t(), piv.get_mpz_t());
            if (q == 0) continue;
            for (std::size_t c = j; c < cols; ++c) rows[i][c] -= q * rows[pivot_row][c];
        }
        ++pivot_row;
    }
    IntMatrix out(pivot_row, cols);
    for (std::size_t i = 0; i < pivot_row; ++i)
        for (std::size_t c = 0; c < cols; ++c) out(i, c) = rows[i][c];
    return out;
}

RatMatrix lattice_basis(const RatMatrix& generators) {
    Int den = 1;
    for (std::size_t i = 0; i < generators.rows(); ++i)
        for (std::size_t j = 0; j < generators.cols(); ++j)
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), generators(i, j).get_den_mpz_t());
    IntMatrix scaled(generators.rows(), generators.cols());
    for (std::size_t i = 0; i < generators.rows(); ++i)
        for (std::size_t j = 0; j < generators.cols(); ++j) {
            Rat v = generators(i, j) * den;
            scaled(i, j) = v.get_num();
        }
    IntMatrix h = hermite_normal_form(scaled);
    RatMatrix out(h.rows(), h.cols());
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) {
            out(i, j) = Rat(h(i, j), den);
            out(i, j).canonicalize();
        }
    return out;
}

std::vector<Rat> solve_row(const RatMatrix& basis, const std::vector<Rat>& v) {
    // x * basis = v  <=>  basis^T x^T = v^T
    RatMatrix inv = inverse(basis);
    std::vector<Rat> x(basis.rows(), Rat(0));
    for (std::size_t i = 0; i < basis.rows(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k) x[i] += v[k] * inv(k, i);
    return x;
}

bool is_integral(const std::vector<Rat>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& r) { return r.get_den() == 1; });
}

bool is_integral(const RatMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j).get_den() != 1) return false;
    return true;
}

Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

int valuation(Int n, const Int& p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    int v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

Int pollard_rho(const Int& n, std::uint64_t steps) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned c = 1; c < 20; ++c) {
        Int x = 2, y = 2, d = 1;
        std::uint64_t k = 0;
        while (d == 1 && k < steps) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Int diff = abs(x - y);
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            ++k;
        }
        if (d != 1 && d != n) return d;
        if (k >= steps) break;
    }
    return 0;
}

void split(const Int& n, std::map<Int, int>& acc, Int& unfactored, std::uint64_t steps) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        acc[n] += 1;
        return;
    }
    Int d = pollard_rho(n, steps);
    if (d == 0) {
        unfactored *= n;
        return;
    }
    split(d, acc, unfactored, steps);
    split(n / d, acc, unfactored, steps);
}

}  // namespace

Factorization factor_integer(const Int& n, std::uint64_t trial_bound, std::uint64_t rho_steps) {
    if (n == 0) throw std::domain_error("cannot factor zero");
    Factorization out;
    Int m = abs(n);
    std::map<Int, int> acc;
    for (std::uint64_t p = 2; p <= trial_bound; p += (p == 2 ? 1 : 2)) {
        if (Int(p) * Int(p) > m) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            acc[Int(p)] += 1;
        }
    }
    split(m, acc, out.unfactored, rho_steps);
    for (auto& [p, e] : acc) out.factors.emplace_back(p, e);
    return out;
}

std::pair<Int, Int> squarefree_decomposition(const Int& n) {
    if (n == 0) throw std::domain_error("squarefree decomposition of zero");
    Factorization f = factor_integer(n);
    if (!f.complete()) throw std::runtime_error("factorization budget exceeded");
    Int s = n < 0 ? -1 : 1, r = 1;
    for (auto& [p, e] : f.factors) {
        for (int i = 0; i < e / 2; ++i) r *= p;
        if (e % 2) s *= p;
    }
    return {s, r};
}

std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Rat& v) { return v.get_str(); }

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

std::int64_t pow_mod(std::int64_t a, std::uint64_t e, std::int64_t m) {
    std::int64_t r = 1 % m;
    a = mod_floor(a, m);
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, a1 = mod_floor(a, m);
    while (a1) {
        std::int64_t q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw std::domain_error("not invertible modulo m");
    return mod_floor(x, m);
}

std::vector<std::vector<std::int64_t>> kernel_mod_p(std::vector<std::vector<std::int64_t>> m,
                                                    std::size_t cols, std::int64_t p) {
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (auto& row : m)
        for (auto& v : row) v = mod_floor(v, p);
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        std::int64_t inv = inv_mod(m[r][c], p);
        for (auto& v : m[r]) v = mul_mod(v, inv, p);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            std::int64_t f = m[i][c];
            for (std::size_t k = 0; k < cols; ++k) m[i][k] = mod_floor(m[i][k] - mul_mod(f, m[r][k], p), p);
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<std::int64_t>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::int64_t> v(cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = mod_floor(-m[i][f], p);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> rows, std::int64_t p) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows[0].size();
    std::size_t r = 0;
    for (auto& row : rows)
        for (auto& v : row) v = mod_floor(v, p);
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        std::int64_t inv = inv_mod(rows[r][c], p);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            std::int64_t f = mul_mod(rows[i][c], inv, p);
            for (std::size_t k = c; k < cols; ++k)
                rows[i][k] = mod_floor(rows[i][k] - mul_mod(f, rows[r][k], p), p);
        }
        ++r;
    }
    return r;
}

}  // namespace orbcount
