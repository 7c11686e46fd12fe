#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qtnsim {

// Dense operand with arbitrary per-index extents, row-major in ids order.
// Shared by the matmul contraction path and the synthetic benchmarks, so the
// same kernel serves both size-2 circuit tensors and large-extent tensors.
template <typename T>
struct DenseOperand {
  std::vector<int> ids;
  std::vector<std::size_t> dims;  // parallel to ids
  std::vector<T> data;            // size = product of dims

  std::size_t size() const { return data.size(); }
};

// Reorders axes to new_ids (a permutation of ids).
template <typename T>
DenseOperand<T> permute(const DenseOperand<T>& a, const std::vector<int>& new_ids);

// Sums out the given axes.
template <typename T>
DenseOperand<T> sum_axes(const DenseOperand<T>& a, const std::vector<int>& ids);

// Contracts a pair of operands, summing over sum_now. Both operands are
// transposed and reshaped into (batch, kept, summed) matrices and multiplied
// with a dense GEMM kernel; indices shared but not summed act as a batch
// dimension. A sum_now index present in only one operand is pre-summed.
// Result ids are in ascending order.
template <typename T>
DenseOperand<T> pairwise_contract(const DenseOperand<T>& a,
                                  const DenseOperand<T>& b,
                                  const std::vector<int>& sum_now);

// Reference path: direct enumeration over every assignment of the distinct
// indices. Result ids follow out_ids (which may be empty for a scalar).
template <typename T>
DenseOperand<T> enumerate_contract(const std::vector<DenseOperand<T>>& operands,
                                   const std::vector<int>& out_ids);

}  // namespace qtnsim
