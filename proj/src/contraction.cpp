#include "qtnsim/contraction.hpp"

#include <algorithm>
#include <cassert>
#include <complex>

#include <cblas.h>

#include "qtnsim/errors.hpp"

namespace qtnsim {

namespace {

using std::size_t;

size_t product(const std::vector<size_t>& dims) {
  size_t p = 1;
  for (size_t d : dims) p *= d;
  return p;
}

template <typename T>
size_t dim_of(const DenseOperand<T>& a, int id) {
  for (size_t i = 0; i < a.ids.size(); ++i)
    if (a.ids[i] == id) return a.dims[i];
  return 0;
}

std::vector<int> sorted_intersection(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> sorted_difference(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void gemm(size_t m, size_t n, size_t k, const float* a, const float* b, float* c) {
  cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, (int)m, (int)n, (int)k,
              1.0f, a, (int)std::max<size_t>(k, 1), b, (int)std::max<size_t>(n, 1),
              0.0f, c, (int)std::max<size_t>(n, 1));
}

void gemm(size_t m, size_t n, size_t k, const double* a, const double* b, double* c) {
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, (int)m, (int)n, (int)k,
              1.0, a, (int)std::max<size_t>(k, 1), b, (int)std::max<size_t>(n, 1),
              0.0, c, (int)std::max<size_t>(n, 1));
}

void gemm(size_t m, size_t n, size_t k, const std::complex<float>* a,
          const std::complex<float>* b, std::complex<float>* c) {
  const std::complex<float> one{1.0f, 0.0f}, zero{0.0f, 0.0f};
  cblas_cgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, (int)m, (int)n, (int)k,
              &one, a, (int)std::max<size_t>(k, 1), b, (int)std::max<size_t>(n, 1),
              &zero, c, (int)std::max<size_t>(n, 1));
}

void gemm(size_t m, size_t n, size_t k, const std::complex<double>* a,
          const std::complex<double>* b, std::complex<double>* c) {
  const std::complex<double> one{1.0, 0.0}, zero{0.0, 0.0};
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, (int)m, (int)n, (int)k,
              &one, a, (int)std::max<size_t>(k, 1), b, (int)std::max<size_t>(n, 1),
              &zero, c, (int)std::max<size_t>(n, 1));
}

}  // namespace

template <typename T>
DenseOperand<T> permute(const DenseOperand<T>& a, const std::vector<int>& new_ids) {
  if (new_ids == a.ids) return a;
  const size_t r = a.ids.size();
  if (new_ids.size() != r)
    throw InvalidInputError("permute: new ids must be a permutation of ids");

  std::vector<size_t> old_strides(r);  // strides of a's axes in a's layout
  {
    size_t s = 1;
    for (size_t i = r; i-- > 0;) {
      old_strides[i] = s;
      s *= a.dims[i];
    }
  }

  DenseOperand<T> out;
  out.ids = new_ids;
  out.dims.resize(r);
  std::vector<size_t> stride_for_axis(r);  // old stride per output axis
  for (size_t k = 0; k < r; ++k) {
    auto it = std::find(a.ids.begin(), a.ids.end(), new_ids[k]);
    if (it == a.ids.end())
      throw InvalidInputError("permute: id not present in operand");
    const size_t i = static_cast<size_t>(it - a.ids.begin());
    out.dims[k] = a.dims[i];
    stride_for_axis[k] = old_strides[i];
  }
  out.data.resize(a.data.size());

  std::vector<size_t> idx(r, 0);
  size_t src = 0;
  const size_t total = out.data.size();
  for (size_t lin = 0; lin < total; ++lin) {
    out.data[lin] = a.data[src];
    for (size_t k = r; k-- > 0;) {
      src += stride_for_axis[k];
      if (++idx[k] < out.dims[k]) break;
      src -= stride_for_axis[k] * out.dims[k];
      idx[k] = 0;
    }
  }
  return out;
}

template <typename T>
DenseOperand<T> sum_axes(const DenseOperand<T>& a, const std::vector<int>& ids) {
  std::vector<int> summed = sorted_intersection(a.ids, ids);
  if (summed.empty()) return a;
  std::vector<int> kept = sorted_difference(a.ids, summed);

  std::vector<int> layout = kept;
  layout.insert(layout.end(), summed.begin(), summed.end());
  DenseOperand<T> arranged = permute(a, layout);

  DenseOperand<T> out;
  out.ids = kept;
  out.dims.assign(arranged.dims.begin(), arranged.dims.begin() + kept.size());
  const size_t kept_n = product(out.dims);
  const size_t block = arranged.data.size() / std::max<size_t>(kept_n, 1);
  out.data.assign(kept_n, T{});
  for (size_t i = 0; i < kept_n; ++i) {
    T acc{};
    const T* p = arranged.data.data() + i * block;
    for (size_t j = 0; j < block; ++j) acc += p[j];
    out.data[i] = acc;
  }
  return out;
}

template <typename T>
DenseOperand<T> pairwise_contract(const DenseOperand<T>& a,
                                  const DenseOperand<T>& b,
                                  const std::vector<int>& sum_now) {
  // Indices summed here but present in only one operand are summed out first.
  std::vector<int> both = sorted_intersection(a.ids, b.ids);
  std::vector<int> shared_sum = sorted_intersection(both, sum_now);
  std::vector<int> a_only_sum = sorted_difference(sorted_intersection(a.ids, sum_now), both);
  std::vector<int> b_only_sum = sorted_difference(sorted_intersection(b.ids, sum_now), both);

  DenseOperand<T> lhs = sum_axes(a, a_only_sum);
  DenseOperand<T> rhs = sum_axes(b, b_only_sum);

  std::vector<int> batch = sorted_difference(both, shared_sum);
  std::vector<int> kept_a = sorted_difference(sorted_difference(lhs.ids, both), sum_now);
  std::vector<int> kept_b = sorted_difference(sorted_difference(rhs.ids, both), sum_now);

  // (batch, kept_a, shared_sum) x (batch, shared_sum, kept_b)
  std::vector<int> layout_a = batch;
  layout_a.insert(layout_a.end(), kept_a.begin(), kept_a.end());
  layout_a.insert(layout_a.end(), shared_sum.begin(), shared_sum.end());
  std::vector<int> layout_b = batch;
  layout_b.insert(layout_b.end(), shared_sum.begin(), shared_sum.end());
  layout_b.insert(layout_b.end(), kept_b.begin(), kept_b.end());
  lhs = permute(lhs, layout_a);
  rhs = permute(rhs, layout_b);

  size_t n_batch = 1, m = 1, k = 1, n = 1;
  for (size_t i = 0; i < batch.size(); ++i) n_batch *= lhs.dims[i];
  for (size_t i = 0; i < kept_a.size(); ++i) m *= lhs.dims[batch.size() + i];
  for (size_t i = 0; i < shared_sum.size(); ++i)
    k *= lhs.dims[batch.size() + kept_a.size() + i];
  for (size_t i = 0; i < kept_b.size(); ++i)
    n *= rhs.dims[batch.size() + shared_sum.size() + i];

  DenseOperand<T> out;
  out.ids = batch;
  out.ids.insert(out.ids.end(), kept_a.begin(), kept_a.end());
  out.ids.insert(out.ids.end(), kept_b.begin(), kept_b.end());
  out.dims.reserve(out.ids.size());
  for (size_t i = 0; i < batch.size(); ++i) out.dims.push_back(lhs.dims[i]);
  for (size_t i = 0; i < kept_a.size(); ++i)
    out.dims.push_back(lhs.dims[batch.size() + i]);
  for (size_t i = 0; i < kept_b.size(); ++i)
    out.dims.push_back(rhs.dims[batch.size() + shared_sum.size() + i]);
  out.data.resize(n_batch * m * n);

  for (size_t c = 0; c < n_batch; ++c)
    gemm(m, n, k, lhs.data.data() + c * m * k, rhs.data.data() + c * k * n,
         out.data.data() + c * m * n);

  std::vector<int> ascending = out.ids;
  std::sort(ascending.begin(), ascending.end());
  return permute(out, ascending);
}

template <typename T>
DenseOperand<T> enumerate_contract(const std::vector<DenseOperand<T>>& operands,
                                   const std::vector<int>& out_ids) {
  // Distinct indices, ascending, with extents taken from the operands.
  std::vector<int> all;
  for (const auto& op : operands) all.insert(all.end(), op.ids.begin(), op.ids.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  std::vector<size_t> extents(all.size());
  for (size_t i = 0; i < all.size(); ++i) {
    size_t d = 0;
    for (const auto& op : operands)
      if ((d = dim_of(op, all[i])) != 0) break;
    extents[i] = d;
  }
  for (int id : out_ids)
    if (!std::binary_search(all.begin(), all.end(), id))
      throw InvalidInputError("enumerate_contract: output id not in any operand");

  // Per-operand and output strides along every distinct index (0 if absent).
  auto strides_along = [&](const std::vector<int>& ids, const std::vector<size_t>& dims) {
    std::vector<size_t> axis_stride(ids.size());
    size_t s = 1;
    for (size_t i = ids.size(); i-- > 0;) {
      axis_stride[i] = s;
      s *= dims[i];
    }
    std::vector<size_t> per_index(all.size(), 0);
    for (size_t i = 0; i < ids.size(); ++i) {
      const size_t j = static_cast<size_t>(
          std::lower_bound(all.begin(), all.end(), ids[i]) - all.begin());
      per_index[j] = axis_stride[i];
    }
    return per_index;
  };

  std::vector<std::vector<size_t>> op_strides;
  for (const auto& op : operands) op_strides.push_back(strides_along(op.ids, op.dims));

  DenseOperand<T> out;
  out.ids = out_ids;
  for (int id : out_ids) {
    const size_t j = static_cast<size_t>(
        std::lower_bound(all.begin(), all.end(), id) - all.begin());
    out.dims.push_back(extents[j]);
  }
  out.data.assign(product(out.dims), T{});
  const std::vector<size_t> out_strides = strides_along(out.ids, out.dims);

  std::vector<size_t> idx(all.size(), 0);
  std::vector<size_t> op_off(operands.size(), 0);
  size_t out_off = 0;
  const size_t total = product(extents);
  for (size_t lin = 0; lin < total; ++lin) {
    T prod = static_cast<T>(1);
    for (size_t t = 0; t < operands.size(); ++t) prod *= operands[t].data[op_off[t]];
    out.data[out_off] += prod;
    for (size_t j = all.size(); j-- > 0;) {
      for (size_t t = 0; t < operands.size(); ++t) op_off[t] += op_strides[t][j];
      out_off += out_strides[j];
      if (++idx[j] < extents[j]) break;
      for (size_t t = 0; t < operands.size(); ++t)
        op_off[t] -= op_strides[t][j] * extents[j];
      out_off -= out_strides[j] * extents[j];
      idx[j] = 0;
    }
  }
  return out;
}

template DenseOperand<float> permute(const DenseOperand<float>&, const std::vector<int>&);
template DenseOperand<double> permute(const DenseOperand<double>&, const std::vector<int>&);
template DenseOperand<std::complex<float>> permute(const DenseOperand<std::complex<float>>&, const std::vector<int>&);
template DenseOperand<std::complex<double>> permute(const DenseOperand<std::complex<double>>&, const std::vector<int>&);

template DenseOperand<float> sum_axes(const DenseOperand<float>&, const std::vector<int>&);
template DenseOperand<double> sum_axes(const DenseOperand<double>&, const std::vector<int>&);
template DenseOperand<std::complex<float>> sum_axes(const DenseOperand<std::complex<float>>&, const std::vector<int>&);
template DenseOperand<std::complex<double>> sum_axes(const DenseOperand<std::complex<double>>&, const std::vector<int>&);

template DenseOperand<float> pairwise_contract(const DenseOperand<float>&, const DenseOperand<float>&, const std::vector<int>&);
template DenseOperand<double> pairwise_contract(const DenseOperand<double>&, const DenseOperand<double>&, const std::vector<int>&);
template DenseOperand<std::complex<float>> pairwise_contract(const DenseOperand<std::complex<float>>&, const DenseOperand<std::complex<float>>&, const std::vector<int>&);
template DenseOperand<std::complex<double>> pairwise_contract(const DenseOperand<std::complex<double>>&, const DenseOperand<std::complex<double>>&, const std::vector<int>&);

template DenseOperand<float> enumerate_contract(const std::vector<DenseOperand<float>>&, const std::vector<int>&);
template DenseOperand<double> enumerate_contract(const std::vector<DenseOperand<double>>&, const std::vector<int>&);
template DenseOperand<std::complex<float>> enumerate_contract(const std::vector<DenseOperand<std::complex<float>>>&, const std::vector<int>&);
template DenseOperand<std::complex<double>> enumerate_contract(const std::vector<DenseOperand<std::complex<double>>>&, const std::vector<int>&);

}  // namespace qtnsim
