#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orbcount {

using Int = mpz_class;
using Rat = mpq_class;

/// Dense row-major matrix over an arbitrary ring-like value type.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

/// Fraction-free determinant (Bareiss).
Int determinant(const IntMatrix& m);
Rat determinant(const RatMatrix& m);

/// Exact inverse; throws std::domain_error on a singular matrix.
RatMatrix inverse(const RatMatrix& m);

RatMatrix to_rational(const IntMatrix& m);

/// Row-style Hermite normal form of the row lattice: upper triangular, positive
/// pivots, entries above a pivot reduced into [0, pivot). Zero rows dropped.
IntMatrix hermite_normal_form(const IntMatrix& generators);

/// Canonical basis of the Z-lattice spanned by the rational rows.  The result
/// is the HNF of the scaled integer lattice divided back by the common
/// denominator, so equal lattices give equal matrices.
RatMatrix lattice_basis(const RatMatrix& generators);

/// Coordinates of `v` in the row basis `basis` (square, invertible).
std::vector<Rat> solve_row(const RatMatrix& basis, const std::vector<Rat>& v);

bool is_integral(const std::vector<Rat>& v);
bool is_integral(const RatMatrix& m);

/// Integer square root (floor) of a nonnegative integer.
Int isqrt(const Int& n);

/// p-adic valuation of a nonzero integer.
int valuation(Int n, const Int& p);

bool is_probable_prime(const Int& n);

/// Factorization of |n| as (prime, exponent) pairs: trial division up to
/// `trial_bound`, then Pollard rho with `rho_steps` iterations per cofactor.
/// Unfactored composite cofactors are returned in `unfactored`.
struct Factorization {
    std::vector<std::pair<Int, int>> factors;
    Int unfactored = 1;
    bool complete() const { return unfactored == 1; }
};
Factorization factor_integer(const Int& n, std::uint64_t trial_bound = 1000000,
                             std::uint64_t rho_steps = 2000000);

/// Squarefree part s and square factor r with n = s * r^2 (sign kept on s).
std::pair<Int, Int> squarefree_decomposition(const Int& n);

std::string to_string(const Int& v);
std::string to_string(const Rat& v);

// Small modular helpers on 64-bit values.
std::int64_t mod_floor(std::int64_t a, std::int64_t m);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t pow_mod(std::int64_t a, std::uint64_t e, std::int64_t m);
std::int64_t inv_mod(std::int64_t a, std::int64_t m);

/// Basis (rows) of the right kernel {x : M x = 0} over F_p.
std::vector<std::vector<std::int64_t>> kernel_mod_p(std::vector<std::vector<std::int64_t>> m,
                                                    std::size_t cols, std::int64_t p);

/// Rank over F_p of a list of row vectors.
std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> rows, std::int64_t p);

}  // namespace orbcount
