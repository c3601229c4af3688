#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbcount/arith.hpp"

namespace orbcount {

class PolyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Monic integer polynomial, coefficients stored constant term first.
class IntPoly {
public:
    explicit IntPoly(std::vector<Int> coeffs_low_first);

    static IntPoly from_high_first(const std::vector<Int>& coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return coeffs_; }
    const Int& operator[](std::size_t i) const { return coeffs_[i]; }

    Int evaluate(const Int& x) const;
    std::vector<Int> derivative() const;

    /// "x^2 - x - 1" style rendering.
    std::string to_string() const;
    /// Comma-separated, highest degree first (the CLI input form).
    std::string to_csv() const;

    friend bool operator==(const IntPoly&, const IntPoly&) = default;

private:
    std::vector<Int> coeffs_;
};

/// Parses comma-separated integers, highest degree first. Requires a leading 1.
IntPoly parse_poly(std::string_view text);

Int discriminant(const IntPoly& p);

/// Resultant of two integer polynomials (low-first coefficient vectors).
Int resultant(const std::vector<Int>& f, const std::vector<Int>& g);

IntMatrix companion_matrix(const IntPoly& p);

/// Characteristic polynomial det(xI - M) by exact cofactor expansion over Z[x].
std::vector<Int> charpoly_cofactor(const IntMatrix& m);

// ---------------------------------------------------------------------------
// Polynomials over Z/p, p prime < 2^31, coefficients low-first, trimmed.

using ModPoly = std::vector<std::int64_t>;

namespace modp {
void trim(ModPoly& f);
int degree(const ModPoly& f);
ModPoly reduce(const std::vector<Int>& f, std::int64_t p);
ModPoly add(const ModPoly& a, const ModPoly& b, std::int64_t p);
ModPoly sub(const ModPoly& a, const ModPoly& b, std::int64_t p);
ModPoly mul(const ModPoly& a, const ModPoly& b, std::int64_t p);
/// Returns (quotient, remainder); divisor must be nonzero.
std::pair<ModPoly, ModPoly> divmod(const ModPoly& a, const ModPoly& b, std::int64_t p);
ModPoly rem(const ModPoly& a, const ModPoly& b, std::int64_t p);
ModPoly monic(const ModPoly& a, std::int64_t p);
ModPoly gcd(ModPoly a, ModPoly b, std::int64_t p);
ModPoly derivative(const ModPoly& a, std::int64_t p);
ModPoly powmod(ModPoly base, Int e, const ModPoly& m, std::int64_t p);
bool is_one(const ModPoly& a);
}  // namespace modp

struct ModPFactor {
    ModPoly poly;  // monic, low-first
    int multiplicity = 1;
};

/// Factorization of a monic polynomial modulo a prime.
struct ModPFactorization {
    Int prime;
    std::vector<ModPFactor> factors;  // sorted by (degree, coefficients)

    bool has_repeated_factor() const;
    /// Residue degrees of the irreducible factors, one entry per distinct factor.
    std::vector<int> factor_degrees() const;
};

/// Complete factorization of p mod `prime` into monic irreducibles.  Equal-degree
/// splitting is Cantor-Zassenhaus with a fixed seed.
ModPFactorization factor_mod_p(const IntPoly& p, const Int& prime);
ModPFactorization factor_mod_p(const ModPoly& f, std::int64_t prime);

enum class Irreducibility { irreducible, reducible, inconclusive };

struct IrreducibilityCertificate {
    Irreducibility status = Irreducibility::inconclusive;
    std::string method;                   // "mod_p", "degree_sets", "exhaustive", "factor"
    std::optional<Int> prime;             // prime where p is irreducible mod prime
    std::vector<std::int64_t> primes;     // primes used by the degree-set argument
    std::optional<IntPoly> factor;        // explicit monic factor over Z
};

/// Exact for degree <= 4.  Beyond that, certificate based: irreducibility modulo
/// a prime, or incompatible factor-degree sets across primes; otherwise a
/// rational-root search and an "inconclusive" verdict.
IrreducibilityCertificate is_irreducible(const IntPoly& p, int prime_budget = 60);

/// Primes up to `limit` by a simple sieve.
std::vector<std::int64_t> small_primes(std::int64_t limit);

}  // namespace orbcount
