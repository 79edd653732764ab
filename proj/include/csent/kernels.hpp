#pragma once

#include <vector>

#include "csent/types.hpp"

// Structure kernels on dense complex matrices indexed by mixed-radix tensor
// digits (factor 0 most significant). csent::kern holds the OpenMP-parallel
// versions used everywhere; csent::kern::serial holds independent plain-loop
// reference implementations kept for testing and for the benchmark target.

namespace csent::kern {

// stride[k] = product of dims[k+1..]
std::vector<long> strides(const std::vector<int>& dims);

// Kronecker product, index (ia*rows_b + ib, ja*cols_b + jb).
Mat tensor(const Mat& a, const Mat& b);

// Trace out the factors at `discard` positions; kept factors preserve order.
Mat partial_trace(const Mat& m, const std::vector<int>& dims,
                  const std::vector<int>& discard);

// Transpose the index digits at `positions` between row and column.
Mat partial_transpose(const Mat& m, const std::vector<int>& dims,
                      const std::vector<int>& positions);

// Permutation taking old basis index to the index of the reordered layout
// where new slot k holds old factor order[k]. map[i_old] = i_new.
std::vector<long> permutation_map(const std::vector<int>& dims,
                                  const std::vector<int>& order);

// rho reordered: out(map(i), map(j)) = in(i, j).
Mat permute_factors(const Mat& m, const std::vector<int>& dims,
                    const std::vector<int>& order);

// Permutation unitary P with P(map(i), i) = 1.
Mat permutation_unitary(const std::vector<int>& dims, const std::vector<int>& order);

// op acting on the factors at `positions` (digit order as listed), identity
// elsewhere.
Mat embed(const Mat& op, const std::vector<int>& dims, const std::vector<int>& positions);

namespace serial {

Mat tensor(const Mat& a, const Mat& b);
Mat partial_trace(const Mat& m, const std::vector<int>& dims,
                  const std::vector<int>& discard);
Mat partial_transpose(const Mat& m, const std::vector<int>& dims,
                      const std::vector<int>& positions);
Mat permute_factors(const Mat& m, const std::vector<int>& dims,
                    const std::vector<int>& order);
Mat embed(const Mat& op, const std::vector<int>& dims, const std::vector<int>& positions);

} // namespace serial

} // namespace csent::kern
