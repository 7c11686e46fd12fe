#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace qtnsim {

using VarId = int;
using cd = std::complex<double>;

// Dense tensor over binary variables. Row-major in vars order: the offset of
// assignment (b_0 .. b_{r-1}) is sum b_i << (r-1-i), i.e. the first axis is
// the most significant bit.
struct Tensor {
  std::string label;
  std::vector<VarId> vars;
  std::vector<cd> data;  // size 1 << vars.size()

  int rank() const { return static_cast<int>(vars.size()); }
  std::size_t size() const { return data.size(); }

  static Tensor scalar(cd value) { return Tensor{"scalar", {}, {value}}; }
};

// Sorted union of all variables across the tensors.
std::vector<VarId> unique_vars(const std::vector<Tensor>& tensors);

}  // namespace qtnsim
