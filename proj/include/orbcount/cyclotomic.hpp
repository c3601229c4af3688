#pragma once

#include <complex>
#include <string>
#include <vector>

#include "orbcount/arith.hpp"

namespace orbcount {

/// Cyclotomic polynomial Phi_d, coefficients low-first.
std::vector<Int> cyclotomic_polynomial(int d);

/// Element of Z[zeta_d], stored reduced modulo Phi_d (phi(d) coefficients of
/// 1, z, ..., z^{phi(d)-1} with z = exp(2 pi i / d)).
class Cyclotomic {
public:
    explicit Cyclotomic(int d = 1, const Int& value = 0);
    static Cyclotomic zeta_power(int d, long k);

    int order() const { return d_; }
    const std::vector<Int>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_integer() const;
    /// The integer value; throws unless is_integer().
    Int integer_value() const;

    /// Complex conjugate (z -> z^{-1}).
    Cyclotomic conj() const;
    std::complex<double> value() const;
    std::string to_string() const;

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return a.d_ == b.d_ && a.c_ == b.c_; }
    Cyclotomic& operator+=(const Cyclotomic& b) { return *this = *this + b; }

private:
    static Cyclotomic from_unreduced(int d, std::vector<Int> c);
    int d_;
    std::vector<Int> c_;
};

}  // namespace orbcount
