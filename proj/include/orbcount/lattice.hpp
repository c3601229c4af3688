#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbcount/cyclotomic.hpp"
#include "orbcount/order.hpp"

namespace orbcount {

class LatticeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Ambient { order, dual, maximal };

/// gamma acting on a Z_p-lattice, presented through an integer basis; all
/// sublattices handled contain p^k times the ambient lattice.
struct LocalModel {
    Int p;
    int precision = 0;   // k
    int s_p = 0;
    int j_max = 0;
    Ambient ambient = Ambient::dual;
    RatMatrix basis;     // ambient basis in power coordinates (rows)
    IntMatrix gamma;     // exact action of gamma in ambient coordinates (row vectors)
    IntMatrix gamma_mod; // gamma reduced mod p^k
};

/// Model with precision 2 s_p + j_max + 2.
LocalModel make_local_model(const OrderData& o, const Int& p, int j_max, Ambient ambient = Ambient::dual);

/// Colength-j gamma-stable sublattices of the ambient lattice (canonical HNF
/// in ambient coordinates, p^k rows included in the span).
std::vector<IntMatrix> enumerate_stable_sublattices(const LocalModel& m, int j);

/// All stable sublattices of colength <= j_max, grouped by colength.
std::vector<std::vector<IntMatrix>> enumerate_stable_sublattices_upto(const LocalModel& m, int j_max);

struct LocalZeta {
    Int p;
    Int q;
    int s_p = 0;
    std::vector<int> residue_degrees;
    std::vector<Int> J_coeffs;        // c_0 .. c_{j_max}
    /// Coefficients of u^{s_p} J~(u) = J(u) prod_w (1 - u^{f_w}); J~ itself is
    /// this polynomial times u^{-s_p}.
    std::vector<Int> J_tilde_coeffs;
    int J_tilde_offset = 0;           // = -s_p
    Int orbital_value;                // J~(1/q)
};

/// j_max defaults to 2 s_p + n.
LocalZeta local_zeta(const OrderData& o, const Int& p, std::optional<int> j_max = std::nullopt);

/// p-maximal order with the data the window enumerations need.
struct LocalOrder {
    Int p;
    int n = 0;
    int s_p = 0;
    RatMatrix basis;                  // O_{K,p} basis, power coordinates
    std::vector<IntMatrix> mult;      // mult[i]: y -> y * b_i in O-coordinates
    IntMatrix gamma;                  // y -> y * gamma in O-coordinates
    std::vector<int> residue_degrees;
};

LocalOrder make_local_order(const OrderData& o, const Int& p);

/// gamma-stable (and `extra`-stable) lattices L with p^depth O <= L <= O and
/// O L = O, as canonical HNF in O-coordinates.  Enumerated by closing cyclic
/// extensions inside the finite module O / p^depth O.
std::vector<IntMatrix> normalized_stable_lattices(const LocalOrder& lo, int depth,
                                                  const std::vector<IntMatrix>& extra = {});

/// [O^x : End(L)^x] for a normalized lattice L containing p^depth O.
Int unit_index(const LocalOrder& lo, const IntMatrix& lattice, int depth);

struct CosetOrbital {
    Int value;
    int classes = 0;
    int lattices = 0;
    int depth = 0;
};

/// Sum over K_p^x-classes of [O^x : Aut(L)]; depth defaults to max(s_p, 1).
CosetOrbital orbital_integral_coset(const OrderData& o, const Int& p, std::optional<int> depth = std::nullopt);

struct TwistData {
    int order = 1;         // d
    bool ramified = false;
};

/// Twisted orbital integral in Z[zeta_d].  Unramified: weight zeta^{colength of
/// L in O_{K,p}}.  Ramified: epsilon is a character of conductor p (p odd) or 4.
Cyclotomic twisted_orbital_integral(const OrderData& o, const Int& p, const TwistData& t,
                                    std::optional<int> depth = std::nullopt);

struct FundamentalLemmaReport {
    Int p;
    int d = 1;
    int m = 1;
    int s_p = 0;
    int s_E = 0;                 // [O : R_E] = p^{s_E}
    int disc_valuation = 0;      // v_p(disc chi)
    Rat abs_delta_gamma;         // |Delta(gamma)|_p
    Rat abs_delta_gamma_E;       // |Delta(gamma_E)|_p
    Int c_G_inverse;             // [Z_p^x : N O_K^x]
    Int c_H_inverse;             // [O_E^x : N_{K/E} O_K^x]
    Cyclotomic twisted;          // O^eps_gamma
    Int stable;                  // SO_{gamma_E}
    Rat lhs_abs_sq;
    Rat rhs_abs_sq;
    double lhs_abs = 0;
    double rhs_abs = 0;
    bool equal = false;
    std::string teichmuller_minpoly;
};

FundamentalLemmaReport fundamental_lemma_check(const OrderData& o, const Int& p, int d);

/// [O_E^x : N_{K/E}(O_K^x)] computed modulo p^k for increasing k until stable.
/// With d = 1 this is [Z_p^x : N_{K/Q}(O_K^x)].
Int norm_index(const LocalOrder& lo, int d);

}  // namespace orbcount
