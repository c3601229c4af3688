#include "orbcount/census.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "orbcount/arith.hpp"

namespace orbcount {

namespace {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

struct Hist {
    std::vector<u64> bins;  // bins[k]: points first admitted at checkpoint k
    u64 checked = 0;
    u64 failed = 0;
};

u64 splitmix(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

u64 norm_bound(long double T, bool inclusive) {
    if (!(T >= 0)) throw CensusError("T must be nonnegative");
    long double t2 = T * T;
    if (t2 > 4e18L) throw CensusError("T too large");
    // T given as sqrt(N) should admit norm N
    const long double near = std::round(t2);
    if (std::fabs(t2 - near) < 1e-12L * std::max<long double>(1, t2)) t2 = near;
    if (inclusive) return static_cast<u64>(std::floor(t2));
    const long double c = std::ceil(t2);
    return c < 1 ? 0 : static_cast<u64>(c) - 1;
}

std::vector<u64> thresholds(const std::vector<long double>& schedule, bool inclusive) {
    if (schedule.empty()) throw CensusError("empty checkpoint schedule");
    std::vector<u64> out;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0)) throw CensusError("checkpoints must be positive");
        if (i > 0 && !(schedule[i] > schedule[i - 1])) throw CensusError("checkpoint schedule not strictly increasing");
        out.push_back(norm_bound(schedule[i], inclusive));
    }
    return out;
}

void admit(Hist& h, const std::vector<u64>& th, u64 norm, u64 weight) {
    auto it = std::lower_bound(th.begin(), th.end(), norm);
    if (it != th.end()) h.bins[static_cast<std::size_t>(it - th.begin())] += weight;
}

i64 to_i64(const Int& v, const char* what) {
    if (!v.fits_slong_p()) throw CensusError(std::string(what) + " does not fit in 64 bits");
    return v.get_si();
}

void require_irreducible(const IntPoly& chi) {
    if (chi.degree() < 1 || chi.coeffs().back() != 1) throw CensusError("characteristic polynomial must be monic");
    if (is_irreducible(chi).status != Irreducibility::irreducible) throw CensusError("reducible characteristic polynomial");
}

// ---------------------------------------------------------------------------
// n = 2 kernel: m(a) = a(t-a) - det = -chi(a) is sieved over the a-range.

i64 sqrt_mod(i64 n, i64 p) {
    n = mod_floor(n, p);
    if (n == 0 || p == 2) return n;
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (pow_mod(z, static_cast<u64>((p - 1) / 2), p) != p - 1) ++z;
    i64 m = s;
    i64 c = pow_mod(z, static_cast<u64>(q), p);
    i64 t = pow_mod(n, static_cast<u64>(q), p);
    i64 r = pow_mod(n, static_cast<u64>((q + 1) / 2), p);
    while (t != 1) {
        i64 i = 0;
        i64 tt = t;
        while (tt != 1) {
            tt = mul_mod(tt, tt, p);
            ++i;
        }
        i64 b = c;
        for (i64 j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

struct SievePrime {
    i64 p;
    std::vector<i64> roots;  // roots of chi mod p
};

std::vector<SievePrime> sieve_primes(i64 t, i64 det, i64 limit) {
    std::vector<SievePrime> out;
    for (i64 p : small_primes(limit)) {
        SievePrime sp{p, {}};
        if (p == 2) {
            for (i64 r = 0; r < 2; ++r)
                if (mod_floor(r * r - t * r + det, 2) == 0) sp.roots.push_back(r);
        } else {
            const i64 tp = mod_floor(t, p);
            const i64 disc = mod_floor(mul_mod(tp, tp, p) - mul_mod(4, mod_floor(det, p), p), p);
            const i64 half = (p + 1) / 2;
            if (disc == 0) {
                sp.roots.push_back(mul_mod(tp, half, p));
            } else if (pow_mod(disc, static_cast<u64>((p - 1) / 2), p) == 1) {
                const i64 s = sqrt_mod(disc, p);
                sp.roots.push_back(mul_mod(mod_floor(tp + s, p), half, p));
                sp.roots.push_back(mul_mod(mod_floor(tp - s, p), half, p));
            }
        }
        if (!sp.roots.empty()) out.push_back(std::move(sp));
    }
    return out;
}

struct N2Problem {
    i64 t = 0;
    i64 det = 0;
    i64 a_lo = 0;
    i64 a_hi = 0;  // exclusive
    u64 nmax = 0;
    std::vector<SievePrime> primes;
};

i128 m_of(const N2Problem& pr, i64 a) { return static_cast<i128>(a) * (pr.t - a) - pr.det; }

N2Problem setup_n2(const IntPoly& chi, u64 nmax) {
    require_irreducible(chi);
    if (chi.degree() != 2) throw CensusError("count_points_n2 needs a quadratic");
    N2Problem pr;
    pr.t = -to_i64(chi[1], "trace");
    pr.det = to_i64(chi[0], "determinant");
    pr.nmax = nmax;
    const i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(nmax))) + 1;
    pr.a_lo = std::min<i64>(-r, pr.t - r);
    pr.a_hi = std::max<i64>(r, pr.t + r) + 1;
    u64 biggest = 1;
    for (i64 a = pr.a_lo; a < pr.a_hi; ++a) {
        const i128 d = pr.t - a;
        if (static_cast<i128>(a) * a + d * d > static_cast<i128>(nmax)) continue;
        i128 m = m_of(pr, a);
        if (m < 0) m = -m;
        if (m > (static_cast<i128>(1) << 62)) throw CensusError("entries exceed 64-bit range");
        biggest = std::max(biggest, static_cast<u64>(m));
    }
    const i64 limit = static_cast<i64>(std::sqrt(static_cast<long double>(biggest))) + 2;
    pr.primes = sieve_primes(pr.t, pr.det, limit);
    return pr;
}

void divisors_upto(const std::vector<std::pair<u64, int>>& f, std::size_t i, u64 cur, u64 cap, std::vector<u64>& out) {
    if (i == f.size()) {
        out.push_back(cur);
        return;
    }
    u64 v = cur;
    for (int e = 0; e <= f[i].second; ++e) {
        divisors_upto(f, i + 1, v, cap, out);
        if (e == f[i].second || static_cast<i128>(v) * f[i].first > cap) break;
        v *= f[i].first;
    }
}

void run_block(const N2Problem& pr, i64 lo, i64 hi, const std::vector<u64>& th, Hist& h) {
    const std::size_t len = static_cast<std::size_t>(hi - lo);
    std::vector<u64> rest(len);
    std::vector<std::vector<std::pair<u64, int>>> fac(len);
    for (std::size_t i = 0; i < len; ++i) {
        const i128 m = m_of(pr, lo + static_cast<i64>(i));
        rest[i] = static_cast<u64>(m < 0 ? -m : m);
    }
    for (const auto& sp : pr.primes) {
        const u64 p = static_cast<u64>(sp.p);
        for (i64 r : sp.roots) {
            for (i64 a = lo + mod_floor(r - lo, sp.p); a < hi; a += sp.p) {
                const std::size_t i = static_cast<std::size_t>(a - lo);
                int e = 0;
                while (rest[i] % p == 0) {
                    rest[i] /= p;
                    ++e;
                }
                if (e > 0) fac[i].emplace_back(p, e);
            }
        }
    }
    std::vector<u64> divs;
    for (std::size_t i = 0; i < len; ++i) {
        const i64 a = lo + static_cast<i64>(i);
        const i64 d = pr.t - a;
        const i128 diag = static_cast<i128>(a) * a + static_cast<i128>(d) * d;
        if (diag > static_cast<i128>(pr.nmax)) continue;
        const u64 budget = pr.nmax - static_cast<u64>(diag);
        if (rest[i] > 1) fac[i].emplace_back(rest[i], 1);
        const i128 m = m_of(pr, a);
        const u64 am = static_cast<u64>(m < 0 ? -m : m);
        const u64 cap = static_cast<u64>(std::sqrt(static_cast<long double>(budget))) + 1;
        divs.clear();
        divisors_upto(fac[i], 0, 1, cap, divs);
        for (u64 b : divs) {
            const u64 c = am / b;
            const i128 bc2 = static_cast<i128>(b) * b + static_cast<i128>(c) * c;
            if (bc2 > static_cast<i128>(budget)) continue;
            admit(h, th, static_cast<u64>(diag + bc2), 2);
            if (splitmix(static_cast<u64>(a) * 0x100000001b3ULL ^ b) % 100 == 0) {
                const i64 bs = static_cast<i64>(b);
                const i64 cs = m < 0 ? -static_cast<i64>(c) : static_cast<i64>(c);
                ++h.checked;
                if (a + d != pr.t || static_cast<i128>(a) * d - static_cast<i128>(bs) * cs != pr.det) ++h.failed;
            }
        }
    }
}

Hist sweep_n2(const IntPoly& chi, const std::vector<u64>& th, int threads) {
    const N2Problem pr = setup_n2(chi, th.back());
    const i64 total = pr.a_hi - pr.a_lo;
    const i64 block = 1 << 14;
    const i64 nblocks = (total + block - 1) / block;
    std::vector<Hist> parts(static_cast<std::size_t>(nblocks), Hist{std::vector<u64>(th.size(), 0)});
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(nblocks)));
    auto work = [&](int w) {
        for (i64 b = w; b < nblocks; b += workers) {
            const i64 lo = pr.a_lo + b * block;
            run_block(pr, lo, std::min(pr.a_hi, lo + block), th, parts[static_cast<std::size_t>(b)]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    Hist out{std::vector<u64>(th.size(), 0)};
    for (const auto& p : parts) {
        for (std::size_t k = 0; k < th.size(); ++k) out.bins[k] += p.bins[k];
        out.checked += p.checked;
        out.failed += p.failed;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Brute force

constexpr u64 kBruteBudget = 4000000000ULL;

Hist brute_n2(i64 e1, i64 e2, const std::vector<u64>& th) {
    Hist h{std::vector<u64>(th.size(), 0)};
    const i64 nmax = static_cast<i64>(th.back());
    const i64 B = static_cast<i64>(std::sqrt(static_cast<long double>(nmax))) + 1;
    for (i64 a = -B; a <= B; ++a) {
        const i64 d = e1 - a;
        const i64 s1 = a * a + d * d;
        if (s1 > nmax) continue;
        for (i64 b = -B; b <= B; ++b) {
            const i64 s2 = s1 + b * b;
            if (s2 > nmax) continue;
            const i64 m = a * d - e2;  // b c = m
            if (b != 0) {
                if (m % b != 0) continue;
                const i64 c = m / b;
                if (s2 + c * c <= nmax) admit(h, th, static_cast<u64>(s2 + c * c), 1);
                continue;
            }
            for (i64 c = -B; c <= B; ++c)
                if (s2 + c * c <= nmax && m == 0) admit(h, th, static_cast<u64>(s2 + c * c), 1);
        }
    }
    return h;
}

Hist brute_n3(i64 e1, i64 e2, i64 e3, const std::vector<u64>& th) {
    Hist h{std::vector<u64>(th.size(), 0)};
    const i64 nmax = static_cast<i64>(th.back());
    const i64 B = static_cast<i64>(std::sqrt(static_cast<long double>(nmax))) + 1;
    u64 steps = 0;
    auto tick = [&] {
        if (++steps > kBruteBudget) throw CensusError("brute-force budget exceeded");
    };
    auto range = [&](i64 used) { return static_cast<i64>(std::sqrt(static_cast<long double>(nmax - used))); };
    for (i64 x00 = -B; x00 <= B; ++x00) {
        if (x00 * x00 > nmax) continue;
        for (i64 x11 = -B; x11 <= B; ++x11) {
            const i64 x22 = e1 - x00 - x11;
            const i64 s0 = x00 * x00 + x11 * x11 + x22 * x22;
            if (s0 > nmax) continue;
            const i64 diag2 = x00 * x11 + x00 * x22 + x11 * x22;
            for (i64 x01 = -range(s0); x01 <= range(s0); ++x01) {
                const i64 s1 = s0 + x01 * x01;
                for (i64 x10 = -range(s1); x10 <= range(s1); ++x10) {
                    const i64 s2 = s1 + x10 * x10;
                    for (i64 x02 = -range(s2); x02 <= range(s2); ++x02) {
                        const i64 s3 = s2 + x02 * x02;
                        for (i64 x20 = -range(s3); x20 <= range(s3); ++x20) {
                            const i64 s4 = s3 + x20 * x20;
                            for (i64 x12 = -range(s4); x12 <= range(s4); ++x12) {
                                tick();
                                const i64 s5 = s4 + x12 * x12;
                                // e2 = diag2 - x01 x10 - x02 x20 - x12 x21
                                const i64 rhs = diag2 - x01 * x10 - x02 * x20 - e2;
                                auto close = [&](i64 x21) {
                                    const i64 s6 = s5 + x21 * x21;
                                    if (s6 > nmax) return;
                                    const i64 det = x00 * (x11 * x22 - x12 * x21) - x01 * (x10 * x22 - x12 * x20) +
                                                    x02 * (x10 * x21 - x11 * x20);
                                    if (det == e3) admit(h, th, static_cast<u64>(s6), 1);
                                };
                                if (x12 != 0) {
                                    if (rhs % x12 == 0) close(rhs / x12);
                                } else if (rhs == 0) {
                                    for (i64 x21 = -range(s5); x21 <= range(s5); ++x21) close(x21);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return h;
}

Hist sweep_brute(const IntPoly& chi, const std::vector<u64>& th) {
    if (chi.coeffs().back() != 1) throw CensusError("characteristic polynomial must be monic");
    if (chi.degree() == 2) return brute_n2(-to_i64(chi[1], "coefficient"), to_i64(chi[0], "coefficient"), th);
    if (chi.degree() == 3) {
        if (th.back() > 3600) throw CensusError("brute-force budget exceeded: n = 3 needs T <= 60");
        return brute_n3(-to_i64(chi[2], "coefficient"), to_i64(chi[1], "coefficient"), -to_i64(chi[0], "coefficient"),
                        th);
    }
    throw CensusError("brute force supports n = 2 and n = 3");
}

u64 total(const Hist& h) { return std::accumulate(h.bins.begin(), h.bins.end(), u64{0}); }

}  // namespace

std::vector<long double> geometric_schedule(long double t_min, long double t_max, long double factor) {
    if (!(t_min > 0) || !(t_max >= t_min) || !(factor > 1)) throw CensusError("bad schedule parameters");
    std::vector<long double> out;
    for (long double t = t_min; t < t_max * (1 - 1e-12L); t *= factor) out.push_back(std::round(t * 1e6L) / 1e6L);
    out.push_back(t_max);
    return out;
}

std::uint64_t count_points_n2(const IntPoly& chi, long double T, const CountKernelConfig& config) {
    return total(sweep_n2(chi, {norm_bound(T, config.include_boundary)}, config.threads));
}

std::uint64_t count_points_bruteforce(const IntPoly& chi, long double T, bool include_boundary) {
    return total(sweep_brute(chi, {norm_bound(T, include_boundary)}));
}

CensusReport census_series(const IntPoly& chi, const CountKernelConfig& config,
                           std::optional<long double> reference_constant) {
    require_irreducible(chi);
    const auto th = thresholds(config.schedule, config.include_boundary);
    CensusReport r;
    r.poly = chi.to_csv();
    r.n = chi.degree();
    r.d = r.n * (r.n - 1) / 2;
    Hist h;
    if (r.n == 2) h = sweep_n2(chi, th, config.threads);
    else if (r.n == 3) h = sweep_brute(chi, th);
    else throw CensusError("census supports n = 2 and n = 3");
    u64 running = 0;
    for (std::size_t k = 0; k < th.size(); ++k) {
        running += h.bins[k];
        const long double T = config.schedule[k];
        r.checkpoints.push_back({T, running, static_cast<long double>(running) / std::pow(T, r.d)});
    }
    long double num = 0, den = 0;
    for (std::size_t k = th.size() / 2; k < th.size(); ++k) {
        const long double td = std::pow(r.checkpoints[k].T, r.d);
        num += static_cast<long double>(r.checkpoints[k].count) * td;
        den += td * td;
    }
    r.slope_fit = num / den;
    r.sample_checked = h.checked;
    r.sample_failed = h.failed;
    if (reference_constant) {
        r.reference_constant = reference_constant;
        r.relative_deviation = r.slope_fit / *reference_constant - 1;
    }
    return r;
}

}  // namespace orbcount
