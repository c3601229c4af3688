#pragma once

#include <map>
#include <string>

#include "orbcount/arith.hpp"

namespace orbcount {

/// A monomial  c * sqrt(m) * pi^(k/2) * prod log(eps_i)^a_i * prod zeta(j)^b_j
/// with c rational and m a squarefree positive integer.  Equal values in this
/// class have equal normal forms.
class Symbolic {
public:
    Symbolic(Rat c = 0);  // NOLINT(implicit)
    Symbolic(long c) : Symbolic(Rat(c)) {}
    Symbolic(int c) : Symbolic(Rat(c)) {}

    /// pi^(half_power / 2).
    static Symbolic pi(int half_power = 2);
    /// sqrt(m) for a positive integer m.
    static Symbolic sqrt(const Int& m);
    /// A named logarithm with its numerical value (positive).
    static Symbolic log(const std::string& name, long double value);
    /// zeta(k) for odd k >= 3; even k is reduced to a rational multiple of pi^k.
    static Symbolic zeta(int k);

    const Rat& coeff() const { return coeff_; }
    const Int& root() const { return root_; }
    int pi_half_power() const { return pi_half_; }
    const std::map<std::string, int>& log_powers() const { return logs_; }
    const std::map<int, int>& zeta_powers() const { return zetas_; }
    const std::map<std::string, long double>& log_values() const { return log_values_; }

    bool is_zero() const { return coeff_ == 0; }
    /// True when the value is rational times sqrt(m) (no transcendental part).
    bool is_algebraic() const { return pi_half_ == 0 && logs_.empty() && zetas_.empty(); }

    long double value() const;
    std::string to_string() const;

    Symbolic pow(int e) const;

    friend Symbolic operator*(const Symbolic& a, const Symbolic& b);
    friend Symbolic operator/(const Symbolic& a, const Symbolic& b);
    Symbolic operator-() const;
    friend bool operator==(const Symbolic& a, const Symbolic& b);
    friend bool operator!=(const Symbolic& a, const Symbolic& b) { return !(a == b); }

    /// Sum of two monomials that differ only in the rational coefficient;
    /// throws std::invalid_argument otherwise.
    friend Symbolic operator+(const Symbolic& a, const Symbolic& b);

private:
    void normalize();

    Rat coeff_;
    Int root_ = 1;
    int pi_half_ = 0;
    std::map<std::string, int> logs_;
    std::map<std::string, long double> log_values_;
    std::map<int, int> zetas_;
};

/// Riemann zeta at an integer k >= 2 (MPFR, 200 bits, rounded to long double).
long double zeta_value(int k);

/// Bernoulli number B_k as an exact rational.
Rat bernoulli(int k);

/// log((t + u sqrt(D)) / 2) at 200-bit working precision.
long double log_quadratic_unit(const Int& t, const Int& u, const Int& D);

}  // namespace orbcount
