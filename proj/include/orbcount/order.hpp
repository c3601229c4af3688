#pragma once

#include <vector>

#include "orbcount/arith.hpp"
#include "orbcount/poly.hpp"

namespace orbcount {

class OrderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The order R = Z[x]/(chi) in its power basis 1, g, ..., g^{n-1}.  Elements of
/// K are row vectors of power-basis coordinates; matrices act on the right.
struct OrderData {
    IntPoly poly;
    int n = 0;
    /// mult_table[i](j, k) = coefficient of g^k in g^i * g^j.
    std::vector<IntMatrix> mult_table;
    /// trace_gram(i, j) = Tr(g^{i+j}).
    IntMatrix trace_gram;
    Int disc;
    /// Rows form a Z-basis of the trace dual R^v, in power-basis coordinates.
    RatMatrix dual_basis;
    /// Companion matrix of chi (column convention, char poly exactly chi).
    IntMatrix gamma_matrix;
};

/// Throws OrderError when chi is not certified irreducible.
OrderData build_order(const IntPoly& chi);

/// Product of two elements given in power-basis coordinates.
std::vector<Rat> multiply(const OrderData& o, const std::vector<Rat>& a, const std::vector<Rat>& b);

/// Matrix of y -> y * x on power-basis row vectors.
RatMatrix multiplication_matrix(const OrderData& o, const std::vector<Rat>& x);

/// Matrix of y -> y * x in the coordinates of the row basis `basis`.
RatMatrix multiplication_in_basis(const OrderData& o, const RatMatrix& basis, const std::vector<Rat>& x);

/// Power-basis coordinates of g (the class of x).
std::vector<Rat> gamma_element(const OrderData& o);

Rat trace(const OrderData& o, const std::vector<Rat>& x);
Rat norm(const OrderData& o, const std::vector<Rat>& x);

/// True iff every power-basis vector lies in the Z-span of dual_basis.
bool dual_contains_check(const OrderData& o);

/// Whether the Z-lattice with row basis `basis` is closed under multiplication
/// and contains 1.
bool is_order(const OrderData& o, const RatMatrix& basis);

struct MaximalizationResult {
    Int p;
    int s_p = 0;
    /// Canonical basis of the p-maximal overorder (denominators powers of p).
    RatMatrix overorder_basis;
};

/// p-maximal overorder of R by iterated radical idealizers. Degree <= 4.
MaximalizationResult p_maximal_order(const OrderData& o, const Int& p);

/// Same, starting from an arbitrary order given by its basis.
MaximalizationResult p_maximal_overorder(const OrderData& o, const RatMatrix& order_basis, const Int& p);

/// Residue degrees f_w of the primes w | p of K, read off the semisimple
/// quotient of O/pO for the p-maximal order O (sorted ascending).
std::vector<int> residue_degrees(const OrderData& o, const RatMatrix& maximal_basis, const Int& p);

/// Basis of the p-radical of O/pO lifted to O (row basis in power coordinates).
RatMatrix p_radical(const OrderData& o, const RatMatrix& order_basis, const Int& p);

struct GlobalIndex {
    Int index = 1;
    std::vector<std::pair<Int, int>> per_prime;  // (p, s_p) for p^2 | disc
    bool complete = true;
    Int unfactored = 1;
};

/// [O_K : R] as the product of p^{s_p} over primes p with p^2 | disc.
GlobalIndex global_index(const OrderData& o);

}  // namespace orbcount
