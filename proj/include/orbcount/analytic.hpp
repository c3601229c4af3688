#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "orbcount/order.hpp"
#include "orbcount/symbolic.hpp"

namespace orbcount {

class AnalyticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Place { real, complex };

/// Gamma(k/2) for k >= 1.
Symbolic gamma_half(int k);

/// Gamma_R(s) = pi^{-s/2} Gamma(s/2), Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s), integer s >= 1.
Symbolic gamma_factor(Place place, int s);

/// Lambda(k) = pi^{-k/2} Gamma(k/2) zeta(k), k >= 2.
Symbolic lambda_complete(int k);

/// Volume of {x in F_v^d : sum |x_j|_v^2 <= 1}, d = n(n-1)/2, with |z|_C = |z|^2
/// and the self-dual measure (twice Lebesgue) on C.
Symbolic ball_volume(int n, Place place);

/// Monte-Carlo estimate of ball_volume from independently seeded streams.
double ball_volume_monte_carlo(int n, Place place, std::uint64_t samples, std::uint64_t seed = 0x5eed);

/// Vol(U_v) = Gamma_v(1)^n prod_{i=1}^n Gamma_v(i)^{-1}.
Symbolic vol_max_compact(int n, Place place);

struct ArchConstants {
    int n = 0;
    int d = 0;
    std::vector<Symbolic> gamma_real;     // s = 1 .. n
    std::vector<Symbolic> gamma_complex;  // s = 1 .. n
    std::map<int, Symbolic> lambda_values;  // k = 2 .. max(n, 2)
    Symbolic ball_volume_real, ball_volume_complex;
    Symbolic vol_compact_real, vol_compact_complex;
};

ArchConstants arch_constants(int n);

struct ResidueReport {
    Int disc_K;
    Symbolic res_zeta_K;
    Symbolic res_zeta_R;
    std::map<Int, Int> local_factors;  // p -> O_gamma(1_p), primes with s_p > 0
    Int index;
};

/// Res zeta_R = Res zeta_K * prod_p O_gamma(1_p) / [O_K : R].  For degree >= 3
/// the field residue must be supplied.
ResidueReport residue_zeta_order(const OrderData& o, std::optional<Symbolic> res_zeta_K = std::nullopt);

struct YunTerm {
    Int conductor;   // c'
    Int disc;        // c'^2 D
    Int class_number;
    Int unit_index;  // [O_K^x : R_{c'}^x]
};

struct YunReport {
    Int D;
    Int conductor;
    std::vector<YunTerm> terms;
    Symbolic yun_residue;
    Symbolic order_residue;
    double relative_error = 0;
    bool match = false;
};

/// Residue of zeta_R from the class-number sum over overorders R_{c'}, c' | f,
/// compared with residue_zeta_order.
YunReport yun_global_residue_check(const OrderData& o, std::optional<Int> conductor = std::nullopt);

}  // namespace orbcount
