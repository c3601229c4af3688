#pragma once

#include <cstdint>
#include <string>

#include "orbcount/arith.hpp"
#include "orbcount/symbolic.hpp"

namespace orbcount {

class QuadraticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fundamental unit (t + u sqrt(disc)) / 2 > 1 of the quadratic order of
/// discriminant disc > 0.
struct QuadraticUnit {
    Int t, u;
    int norm = 1;  // +1 or -1
    long double log_value = 0;
    /// Display name of log(eps), e.g. "log((1+sqrt(5))/2)".
    std::string log_name;
};

/// Invariants of the quadratic order of (not necessarily fundamental)
/// discriminant disc.
struct QuadraticOrderInvariants {
    Int disc;
    Int class_number;        // Picard group order
    Int narrow_class_number; // equals class_number for disc < 0
    int roots_of_unity = 2;  // disc < 0 only
    QuadraticUnit unit;      // disc > 0 only
};

struct QuadraticInvariants {
    Int D;
    Int h;
    int w_K = 2;          // D < 0
    QuadraticUnit unit;   // D > 0; regulator is unit.log_value
    Symbolic residue;     // Res_{s=1} zeta_K(s)
    long double residue_float = 0;
};

/// Largest |disc| accepted by the form enumerations.
inline constexpr std::int64_t kQuadraticBudget = 100000000;

bool is_fundamental_discriminant(const Int& D);

QuadraticOrderInvariants quadratic_order_invariants(const Int& disc);

QuadraticInvariants quadratic_invariants(const Int& D);

}  // namespace orbcount
