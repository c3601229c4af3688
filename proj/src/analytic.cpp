#include "orbcount/analytic.hpp"

#include <cmath>
#include <random>

#include "orbcount/lattice.hpp"
#include "orbcount/quadratic.hpp"

namespace orbcount {

namespace {

Int factorial(int k) {
    Int r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

Int pow2(int e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return r;
}

int ball_dimension(int n) {
    if (n < 2) throw AnalyticError("ball volume needs n >= 2");
    return n * (n - 1) / 2;
}

}  // namespace

Symbolic gamma_half(int k) {
    if (k < 1) throw AnalyticError("Gamma(k/2) needs k >= 1");
    if (k % 2 == 0) return Symbolic(Rat(factorial(k / 2 - 1)));
    // Gamma(k/2) = (k-2)!! / 2^{(k-1)/2} sqrt(pi)
    Int dfact = 1;
    for (int i = k - 2; i > 1; i -= 2) dfact *= i;
    return Symbolic(Rat(dfact, pow2((k - 1) / 2))) * Symbolic::pi(1);
}

Symbolic gamma_factor(Place place, int s) {
    if (s < 1) throw AnalyticError("Gamma factor needs s >= 1");
    if (place == Place::real) return Symbolic::pi(-s) * gamma_half(s);
    return Symbolic(Rat(2 * factorial(s - 1), pow2(s))) * Symbolic::pi(-2 * s);
}

Symbolic lambda_complete(int k) {
    if (k < 2) throw AnalyticError("Lambda(k) needs k >= 2");
    return Symbolic::pi(-k) * gamma_half(k) * Symbolic::zeta(k);
}

Symbolic ball_volume(int n, Place place) {
    const int d = ball_dimension(n);
    Symbolic real = Symbolic::pi(d) / gamma_half(d + 2);
    return place == Place::real ? real : Symbolic::pi(2 * d) * real;
}

double ball_volume_monte_carlo(int n, Place place, std::uint64_t samples, std::uint64_t seed) {
    const int d = ball_dimension(n);
    const int coords = place == Place::real ? d : 2 * d;
    constexpr std::uint64_t chunk = 1 << 20;
    std::uint64_t inside = 0;
    for (std::uint64_t start = 0, stream = 0; start < samples; start += chunk, ++stream) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * stream);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const std::uint64_t count = std::min(chunk, samples - start);
        for (std::uint64_t i = 0; i < count; ++i) {
            double acc = 0;
            for (int j = 0; j < d; ++j) {
                if (place == Place::real) {
                    const double x = u(rng);
                    acc += x * x;
                } else {
                    const double x = u(rng), y = u(rng);
                    const double r2 = x * x + y * y;
                    acc += r2 * r2;
                }
            }
            if (acc <= 1.0) ++inside;
        }
    }
    double vol = std::ldexp(static_cast<double>(inside) / static_cast<double>(samples), coords);
    if (place == Place::complex) vol = std::ldexp(vol, d);
    return vol;
}

Symbolic vol_max_compact(int n, Place place) {
    if (n < 1) throw AnalyticError("Vol(U_v) needs n >= 1");
    Symbolic r = gamma_factor(place, 1).pow(n);
    for (int i = 1; i <= n; ++i) r = r / gamma_factor(place, i);
    return r;
}

ArchConstants arch_constants(int n) {
    if (n < 2) throw AnalyticError("n must be at least 2");
    ArchConstants a;
    a.n = n;
    a.d = n * (n - 1) / 2;
    for (int s = 1; s <= n; ++s) {
        a.gamma_real.push_back(gamma_factor(Place::real, s));
        a.gamma_complex.push_back(gamma_factor(Place::complex, s));
    }
    for (int k = 2; k <= n; ++k) a.lambda_values.emplace(k, lambda_complete(k));
    a.ball_volume_real = ball_volume(n, Place::real);
    a.ball_volume_complex = ball_volume(n, Place::complex);
    a.vol_compact_real = vol_max_compact(n, Place::real);
    a.vol_compact_complex = vol_max_compact(n, Place::complex);
    return a;
}

ResidueReport residue_zeta_order(const OrderData& o, std::optional<Symbolic> res_zeta_K) {
    GlobalIndex gi = global_index(o);
    if (!gi.complete) throw AnalyticError("discriminant not fully factored: " + to_string(gi.unfactored));
    ResidueReport r;
    r.index = gi.index;
    r.disc_K = o.disc / (gi.index * gi.index);
    if (res_zeta_K) {
        r.res_zeta_K = *res_zeta_K;
    } else {
        if (o.n != 2) throw AnalyticError("Res zeta_K must be supplied for degree " + std::to_string(o.n));
        r.res_zeta_K = quadratic_invariants(r.disc_K).residue;
    }
    Int prod = 1;
    for (const auto& [p, s] : gi.per_prime) {
        if (s == 0) continue;
        Int v = local_zeta(o, p).orbital_value;
        r.local_factors[p] = v;
        prod *= v;
    }
    r.res_zeta_R = r.res_zeta_K * Symbolic(Rat(prod, r.index));
    return r;
}

YunReport yun_global_residue_check(const OrderData& o, std::optional<Int> conductor) {
    if (o.n != 2) throw AnalyticError("the residue comparison is for quadratic orders");
    ResidueReport rep = residue_zeta_order(o);
    YunReport y;
    y.D = rep.disc_K;
    y.conductor = rep.index;
    if (conductor && *conductor != y.conductor)
        throw AnalyticError("conductor " + to_string(*conductor) + " does not match the order (" +
                            to_string(y.conductor) + ")");
    if (y.conductor > 50) throw AnalyticError("conductor above the enumeration budget of 50");
    const QuadraticInvariants field = quadratic_invariants(y.D);
    const long f = y.conductor.get_si();
    const Int h_R = quadratic_order_invariants(o.disc).class_number;

    Rat sum = 0;
    for (long c = 1; c <= f; ++c) {
        if (f % c != 0) continue;
        YunTerm t;
        t.conductor = c;
        t.disc = Int(c * c) * y.D;
        auto inv = quadratic_order_invariants(t.disc);
        t.class_number = inv.class_number;
        if (y.D < 0) {
            t.unit_index = field.w_K / inv.roots_of_unity;
        } else {
            const long double ratio = inv.unit.log_value / field.unit.log_value;
            const long k = std::lround(static_cast<double>(ratio));
            if (std::fabs(static_cast<double>(ratio) - k) > 1e-9) throw AnalyticError("unit index is not an integer");
            t.unit_index = k;
        }
        // Cl(R) acts transitively on the invertible classes of R_{c'} with
        // stabilizer of order h(R) / h(R_{c'})
        sum += Rat(t.unit_index) / Rat(h_R, t.class_number);
        y.terms.push_back(t);
    }
    const Int abs_disc_R = abs(o.disc);
    Symbolic pre;
    if (y.D < 0)
        pre = Symbolic(Rat(2, field.w_K)) * Symbolic::pi(2) / Symbolic::sqrt(abs_disc_R);
    else
        pre = Symbolic(Rat(4, 2)) * Symbolic::log(field.unit.log_name, field.unit.log_value) / Symbolic::sqrt(abs_disc_R);
    y.yun_residue = pre * Symbolic(Rat(h_R) * sum);
    y.order_residue = rep.res_zeta_R;
    const long double a = y.yun_residue.value(), b = y.order_residue.value();
    y.relative_error = static_cast<double>(std::fabs(a - b) / std::fabs(b));
    y.match = y.relative_error < 1e-9;
    return y;
}

}  // namespace orbcount
