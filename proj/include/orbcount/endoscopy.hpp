#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbcount/analytic.hpp"
#include "orbcount/cyclotomic.hpp"
#include "orbcount/order.hpp"
#include "orbcount/symbolic.hpp"

namespace orbcount {

class EndoscopyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A real number with an exact monomial form when one is known.
struct Value {
    std::optional<Symbolic> exact;
    long double approx = 0;

    Value() = default;
    Value(const Symbolic& s) : exact(s), approx(s.value()) {}  // NOLINT(implicit)
    static Value numeric(long double v) {
        Value r;
        r.approx = v;
        return r;
    }
    friend Value operator*(const Value& a, const Value& b);
    friend Value operator/(const Value& a, const Value& b);
    friend Value operator+(const Value& a, const Value& b);
    Value pow(int e) const;
    std::string to_string() const;
};

// ---------------------------------------------------------------------------
// Endoscopic data

enum class RealPlaceType { split, complex };  // E_v = R^d or C^{d/2}

/// A candidate intermediate field F <= E <= K.
struct FieldCandidate {
    std::string name;
    int degree = 1;                        // [E:F]
    bool cyclic = true;
    std::vector<Int> ramified_primes;      // finite primes of F ramified in E
    std::vector<RealPlaceType> real_places;  // one entry per real place of F
    std::map<Int, int> delta_locals;       // p -> delta_p(E), missing means 1
};

struct BaseField {
    std::string name = "Q";
    int degree = 1;
    int r1 = 1;
    int r2 = 0;
    Int disc = 1;  // |Delta_F|
};

struct EndoDatum {
    std::string field;
    int degree = 1;       // d_E
    int u_order = 1;      // order of u, = d_E
    int u_index = 0;      // u = exp(2 pi i u_index / d_E), gcd(u_index, d_E) = 1
    int m = 1;            // n / d_E
    std::map<std::string, std::string> local_table;
    std::map<Int, int> delta_locals;
    Int delta_global = 1;
    bool contributes = false;  // E/F cyclic and unramified everywhere
};

/// All pairs (E, u).  With no candidates (F = Q built in) the result is (Q, 1).
std::vector<EndoDatum> enumerate_kappa(const BaseField& F, int n, const std::vector<FieldCandidate>& candidates = {});

/// kappa_v != 1 at a real place, i.e. [E:F] even and E_v totally complex.
bool archimedean_vanishing(const EndoDatum& e, RealPlaceType v);

// ---------------------------------------------------------------------------
// delta_v(E) over F_v = Q_p

struct LocalExtensionSpec {
    enum class Kind { unramified, sqrt } kind = Kind::unramified;
    int degree = 1;  // unramified: relative degree
    Int radicand;    // sqrt: K_v = E_v(sqrt(radicand))
};

struct DeltaReport {
    Int value;
    int precision = 0;  // k at which two consecutive values agreed
    std::vector<std::pair<int, Int>> history;
    std::string shape;
};

/// [O_E^1 : O_E^1 cap N_{K/E} O_K^x] by brute force in (O_E / p^k)^x, with E_v
/// unramified of degree e_degree over Q_p.  p <= 13, k <= max_precision <= 8.
DeltaReport delta_local(const Int& p, int e_degree, const LocalExtensionSpec& k_spec, int max_precision = 8);

// ---------------------------------------------------------------------------
// Satake transfer

/// Polynomial in formal variables with Z[zeta_d] coefficients and a formal
/// q^{1/2} power.
struct SymmetricPoly {
    int variables = 0;
    int q_half_power = 0;
    int root_order = 1;
    std::map<std::vector<int>, Cyclotomic> terms;

    bool is_zero() const;
    bool is_symmetric() const;
    std::string to_string(const std::string& var) const;
    friend bool operator==(const SymmetricPoly& a, const SymmetricPoly& b);
};

/// Complete homogeneous symmetric polynomial h_j in `variables` variables.
SymmetricPoly complete_homogeneous(int variables, int j, int root_order = 1);

struct SatakeRow {
    int j = 0;
    bool divisible = false;
    SymmetricPoly image;     // b(Phi^_j) in the variables W_i = Y_i^{1/d}
    SymmetricPoly expected;  // Phi^H_{j/d} in W, or 0
    bool equal = false;
};

std::vector<SatakeRow> satake_transfer_check(int n, int d, int j_max);

// ---------------------------------------------------------------------------
// Constant assembly

struct ConstantReport {
    std::string mode;  // "Q" or "general"
    std::string poly;
    int n = 0;
    int d = 0;
    Value res_zeta_K;
    Value res_zeta_R;
    Int index;
    std::map<Int, Int> local_factors;
    Value w_n;
    Value vol_U_inf;
    std::vector<Value> lambda_values;  // k = 2 .. n
    Value lambda_product;
    Value numerator;                   // sum_E phi delta Res zeta_{R_E}
    int term_count = 0;                // sum_E phi([E:F]) over contributing E
    std::vector<EndoDatum> data;
    Value denominator_theorem;         // |D_F|^d pi^{n r2} Res Lambda_F prod Lambda_F(k)
    Value denominator_proof;           // |D_F|^d Res zeta_F prod zeta_F(i) / Vol(U_inf)
    bool denominators_agree = false;
    Value measure_ratio;               // Res zeta_K / (Res zeta_F prod zeta_F(i)) / sqrt|D_K/F|_fin / |D_F|^d
    Value constant;
    std::optional<Value> ems_constant;  // Res zeta_K w_n / prod Lambda(k) when R = O_K
};

/// Over Q: C = Res zeta_R w_n / prod_{k=2}^n Lambda(k).  Degree >= 3
/// needs Res zeta_K.
ConstantReport assemble_constant_Q(const OrderData& o, std::optional<Symbolic> res_zeta_K = std::nullopt);

struct GeneralFieldInput {
    FieldCandidate field;
    Value res_zeta_RE;
};

struct GeneralInputs {
    BaseField base;
    int n = 2;
    Value res_zeta_F;
    std::map<int, Value> zeta_F;  // k = 2 .. n
    std::vector<GeneralFieldInput> fields;  // including E = F
    std::optional<Value> res_zeta_K;
    std::optional<Int> relative_disc_norm;  // N(Delta_{K/F}) for the measure ratio
};

ConstantReport assemble_constant_general(const GeneralInputs& in);

/// General-mode inputs for F = Q read off the order: the single datum E = Q
/// with R_E = R.
GeneralInputs general_inputs_over_Q(const OrderData& o, std::optional<Symbolic> res_zeta_K = std::nullopt);

}  // namespace orbcount
