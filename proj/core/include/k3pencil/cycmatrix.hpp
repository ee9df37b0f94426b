#pragma once

#include <utility>
#include <vector>

#include "k3pencil/cyclotomic.hpp"

namespace k3pencil {

using CycVec = std::vector<CycNum>;

// Dense rectangular matrix over the ambient cyclotomic field. Dimensions are
// fixed at construction; all arithmetic is exact.
class CycMatrix {
 public:
  CycMatrix() : rows_(0), cols_(0) {}
  CycMatrix(int rows, int cols);

  static CycMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  CycNum& at(int r, int c) { return a_[static_cast<size_t>(r * cols_ + c)]; }
  const CycNum& at(int r, int c) const { return a_[static_cast<size_t>(r * cols_ + c)]; }

  CycMatrix operator*(const CycMatrix& o) const;
  CycVec operator*(const CycVec& v) const;
  CycMatrix operator+(const CycMatrix& o) const;
  CycMatrix operator-(const CycMatrix& o) const;
  CycMatrix mul_scalar(const CycNum& s) const;
  CycMatrix transpose() const;
  CycNum trace() const;
  CycNum det() const;  // square matrices

  bool operator==(const CycMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool operator!=(const CycMatrix& o) const { return !(*this == o); }

  bool is_identity() const;
  std::uint64_t fingerprint() const;
  std::string to_string() const;

 private:
  int rows_, cols_;
  std::vector<CycNum> a_;
};

// Basis of the right kernel of m (exact Gaussian elimination; the zero test
// on pivots is exact, no tolerances). Empty result means m is injective.
std::vector<CycVec> solve_kernel(const CycMatrix& m);

// Eigenvalues of a 2x2 matrix of finite multiplicative order with det = 1:
// the pair (z, z^-1) with z a 120th root of unity and z + z^-1 = trace.
// Throws std::invalid_argument if the matrix is not 2x2 with det 1, and
// std::domain_error if no 120th root of unity matches the trace (an element
// outside the supported groups).
std::pair<CycNum, CycNum> eigenvalues_finite_order(const CycMatrix& m);

}  // namespace k3pencil
