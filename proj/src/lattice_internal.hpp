#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbcount/lattice.hpp"

namespace orbcount::detail {

using i64 = std::int64_t;
using Vec = std::vector<Int>;
using ModMat = std::vector<std::vector<i64>>;

Int ipow(const Int& p, int e);
Int mod_pos(const Int& a, const Int& m);
i64 small(const Int& p);
IntMatrix hnf_mod(const std::vector<Vec>& rows, std::size_t n, const Int& modulus);
std::vector<Vec> rows_of(const IntMatrix& m);
Vec row_times(const Vec& v, const IntMatrix& m);
std::string key_of(const IntMatrix& m);
Int colength(const IntMatrix& h);
ModMat reduce_mat(const IntMatrix& m, i64 p);
i64 det_mod(ModMat a, i64 p);
IntMatrix mult_matrix(const LocalOrder& lo, const Vec& x);
i64 norm_mod_p(const LocalOrder& lo, const std::vector<i64>& x, i64 p);
/// Coordinates of 1 in the O-basis.
Vec one_coordinates(const LocalOrder& lo);
/// Multiplication matrices generating (O / p^depth O)^x.
std::vector<IntMatrix> unit_generators(const LocalOrder& lo, int depth);

}  // namespace orbcount::detail
